"""Tests for elements, chains and their serialization."""
