"""splab: an exact-arithmetic laboratory for sum-product estimates along
sparse graphs -- extremal constructions, graph-restricted set arithmetic
over a radical number field, a mini-CAS with the degeneracy derivative
test, and brute-force counting audits."""

__version__ = "0.1.0"

from .radical_field import (
    Enclosure,
    RadicalSum,
    RadicalTerm,
    add,
    div,
    eval_enclosure,
    mul,
    parse_radsum,
    sqrt_fraction,
    sqrt_int,
    squarefree_decompose,
)

__all__ = [
    "Enclosure",
    "RadicalSum",
    "RadicalTerm",
    "add",
    "div",
    "eval_enclosure",
    "mul",
    "parse_radsum",
    "sqrt_fraction",
    "sqrt_int",
    "squarefree_decompose",
]
