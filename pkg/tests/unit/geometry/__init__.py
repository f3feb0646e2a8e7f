"""Tests for point input and metrics."""
