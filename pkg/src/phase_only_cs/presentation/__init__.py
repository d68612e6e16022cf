"""Presentation layer module."""
