"""Quasi K-matrices and bar involutions for quantum symmetric pairs."""

from .scalars import RatFuncQ, Q, q_pow, q_int, q_binomial, q_factorial

__version__ = "0.1.0"
