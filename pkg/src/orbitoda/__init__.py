"""Exact computations for equivariant Gromov-Witten theory of gerby orbifold
projective lines: wreath Hurwitz numbers, their tau functions, Hurwitz-Hodge
generating functions and the localization assembly of n-point functions."""

__version__ = "0.1.0"
