"""Galois self-orthogonal algebraic-geometry codes over GF(p^h), built and
verified with exact arithmetic."""

__version__ = "0.1.0"
