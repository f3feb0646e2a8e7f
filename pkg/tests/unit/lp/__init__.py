"""Tests for the minimum-reach solver."""
