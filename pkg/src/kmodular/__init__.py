"""Exact Bar-Natan cobordism calculus, truncated categorified projectors and
their Temperley-Lieb shadow."""

__version__ = "0.1.0"
