"""Minimal exact computer-algebra engine: multivariate polynomials and
rational functions over Q, expression trees with sqrt branches, the
eliminations, and the degeneracy derivative tests."""

from .eliminate import DilateElimination, eliminate_dilate, eliminate_shifted_product, eliminate_sp
from .expr import (
    Expr,
    NonzeroWitness,
    ProbablyZero,
    degeneracy_test_numeric,
    flip_branch,
)
from .poly import MPoly, divexact, parse_poly, poly_gcd
from .ratfunc import (
    DegeneracyReport,
    RatFunc,
    degeneracy_test_rational,
    differentiate,
    mixed_log_partial,
)

__all__ = [
    "DegeneracyReport",
    "DilateElimination",
    "Expr",
    "MPoly",
    "NonzeroWitness",
    "ProbablyZero",
    "RatFunc",
    "degeneracy_test_numeric",
    "degeneracy_test_rational",
    "differentiate",
    "divexact",
    "eliminate_dilate",
    "eliminate_shifted_product",
    "eliminate_sp",
    "flip_branch",
    "mixed_log_partial",
    "parse_poly",
    "poly_gcd",
]
