"""Subspace codes over random linear network coding with a systematic inner code."""

__version__ = "0.1.0"
