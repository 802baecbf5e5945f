"""Exact arithmetic for pencils of quadrics over the rationals."""

__version__ = "0.1.0"
