"""Stable module category toolkit - syzygies, Tate cohomology and ghost maps for p-groups."""

__version__ = "0.1.0"
