"""Tests for the brute-force references."""
