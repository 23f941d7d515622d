"""Exact D_n-graded Bredon cohomology of a point for odd cyclic groups.

Closed-form group computations cross-validated cell by cell against a
brute-force chain-homotopy oracle, plus a symbolic multiplicative calculus
on the named generator classes.
"""

from .linalg import AbelianGroup

__all__ = ["AbelianGroup"]
