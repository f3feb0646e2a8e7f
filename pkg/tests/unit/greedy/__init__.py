"""Tests for the greedy permutation and covering sequences."""
