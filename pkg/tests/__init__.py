"""Test suite for the phase-only compressive sensing toolkit."""
