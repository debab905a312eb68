"""Exact construction and certification of algebraic embeddings of affine
subrings of K[s] into polynomial rings F[t]."""

__version__ = "0.1.0"
