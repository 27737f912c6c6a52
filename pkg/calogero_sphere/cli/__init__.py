"""Command-line front end for calogero_sphere."""

from calogero_sphere.cli.runner import main

__all__ = ["main"]
