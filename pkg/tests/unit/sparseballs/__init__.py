"""Tests for sparse balls and covering weights."""
