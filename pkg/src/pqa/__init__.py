"""Exact computations with p-monomial ideals, p-semigroup rings, p-toric face rings and quasilength."""

__version__ = "0.1.0"
