"""Eliminations of the two-variable systems into trivariate relations.

- dilate system   c = a+b, d = a+lam*b, e = ab   ->  e = f(c, d), polynomial;
- sum/product     c = a+b, d = ab               ->  F = X(Y-X) - Z;
- shifted product c = a+b, d = ab, e = (a+alpha)(b+beta) -> sqrt branch in
  the discriminant of t^2 - c t + d.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import NamedTuple

from ..errors import LambdaOne
from ..radical_field import RadicalSum
from . import expr as ex
from .poly import MPoly
from .ratfunc import RatFunc


class DilateElimination(NamedTuple):
    f: RatFunc  # f(X, Y) with e = f(c, d)
    F: MPoly  # F(X, Y, Z) = f(X, Y) - Z


def eliminate_dilate(lam) -> DilateElimination:
    """Solve the dilate system for e: f = (X-Y)(Y-lam*X) / (1-lam)^2.

    lam = 1 makes a and b unrecoverable from (c, d) and is rejected.
    """
    lam = Fraction(lam)
    if lam == 1:
        raise LambdaOne("lambda = 1: a and b cannot be recovered from (c, d)")
    x = MPoly.var("X")
    y = MPoly.var("Y")
    k = Fraction(1) / (1 - lam) ** 2
    num = ((x - y) * (y - x.scale(lam))).scale(k)
    f = RatFunc(num)
    big_f = num - MPoly.var("Z")
    return DilateElimination(f, big_f)


def eliminate_sp() -> MPoly:
    """F(X, Y, Z) = X(Y - X) - Z for the sum/product system."""
    x = MPoly.var("X")
    y = MPoly.var("Y")
    return x * (y - x) - MPoly.var("Z")


def eliminate_shifted_product(
    alpha, beta, validate_samples: int = 1000, seed: int = 271828
) -> ex.Expr:
    """Branch expression Z(X, Y) for the shifted-product system.

    With s = sqrt(X^2 - 4Y) (the discriminant of t^2 - Xt + Y, whose roots
    are a and b), the + branch corresponds to a >= b:

        Z = Y + (alpha+beta)/2 * X + alpha*beta + (beta-alpha)/2 * s.

    alpha = beta zeroes the sqrt coefficient and the branch collapses to a
    polynomial.  The construction is self-validated against random (a, b)
    pairs with the branch chosen by the a >= b ordering.
    """
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    x = ex.var("X")
    y = ex.var("Y")
    root = ex.sqrt(ex.sub(ex.mul(x, x), ex.mul(ex.const(4), y)), 1)
    branch = ex.add(
        ex.add(
            ex.add(y, ex.mul(ex.const((alpha + beta) / 2), x)),
            ex.const(alpha * beta),
        ),
        ex.mul(ex.const((beta - alpha) / 2), root),
    )
    if validate_samples:
        flipped = ex.flip_branch(branch)
        rng = random.Random(seed)
        for _ in range(validate_samples):
            a = Fraction(rng.randint(-40, 40), rng.randint(1, 6))
            b = Fraction(rng.randint(-40, 40), rng.randint(1, 6))
            env = {
                "X": RadicalSum.from_fraction(a + b),
                "Y": RadicalSum.from_fraction(a * b),
            }
            chosen = branch if a >= b else flipped
            got = ex.eval_radical(chosen, env)
            want = RadicalSum.from_fraction((a + alpha) * (b + beta))
            if got != want:
                raise RuntimeError(
                    f"shifted-product elimination failed at a={a}, b={b}: "
                    f"{got} != {want}"
                )
    return branch
