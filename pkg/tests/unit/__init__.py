"""Unit tests for phase_only_cs components."""
