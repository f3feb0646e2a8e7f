"""Unit tests, one package per sparsemc area."""
