"""Tests for bispec."""
