"""File formats and verification reports."""
