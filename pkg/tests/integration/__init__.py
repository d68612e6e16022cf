"""Acceptance runs at experiment scale."""
