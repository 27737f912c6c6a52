"""Tests package for calogero_sphere."""
