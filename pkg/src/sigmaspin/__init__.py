"""Spin matrices from CP^{2s} sigma model projectors: exact and numeric verification."""

__version__ = "0.1.0"
