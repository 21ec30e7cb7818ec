"""Expression trees over {+, -, *, /, sqrt} for the elimination branches that
leave the polynomial world.

Sqrt nodes carry a declared branch sign.  Construction folds constants and
drops zero terms, so a vanishing sqrt coefficient collapses the branch to a
plain polynomial expression.  Exact evaluation lands in the radical field
when every sqrt argument evaluates to a nonnegative rational; interval
evaluation backs the numeric degeneracy test.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from mpmath.ctx_iv import MPIntervalContext

from ..errors import DomainError, PreconditionError, UnsupportedEvaluation
from ..radical_field import Enclosure, RadicalSum, _mpf_to_fraction, sqrt_fraction

Point = tuple[Fraction, Fraction]


class Expr:
    __slots__ = ()

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __truediv__(self, other):
        return div(self, other)

    def __neg__(self):
        return mul(Const(Fraction(-1)), self)


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Add(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Sub(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Mul(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Div(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Sqrt(Expr):
    arg: Expr
    sign: int = 1  # declared branch: value is sign * sqrt(arg)


def _as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    return Const(Fraction(v))


def const(v) -> Const:
    return Const(Fraction(v))


def var(name: str) -> Var:
    if name not in ("X", "Y", "Z"):
        raise ValueError(f"unknown variable {name!r}")
    return Var(name)


def add(a, b) -> Expr:
    a, b = _as_expr(a), _as_expr(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if isinstance(a, Const) and a.value == 0:
        return b
    if isinstance(b, Const) and b.value == 0:
        return a
    return Add(a, b)


def sub(a, b) -> Expr:
    a, b = _as_expr(a), _as_expr(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if isinstance(b, Const) and b.value == 0:
        return a
    return Sub(a, b)


def mul(a, b) -> Expr:
    a, b = _as_expr(a), _as_expr(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if isinstance(a, Const):
        if a.value == 0:
            return Const(Fraction(0))
        if a.value == 1:
            return b
    if isinstance(b, Const):
        if b.value == 0:
            return Const(Fraction(0))
        if b.value == 1:
            return a
    return Mul(a, b)


def div(a, b) -> Expr:
    a, b = _as_expr(a), _as_expr(b)
    if isinstance(b, Const):
        if b.value == 0:
            raise ZeroDivisionError("division by a zero constant")
        if isinstance(a, Const):
            return Const(a.value / b.value)
        if b.value == 1:
            return a
    if isinstance(a, Const) and a.value == 0:
        return Const(Fraction(0))
    return Div(a, b)


def sqrt(arg, sign: int = 1) -> Expr:
    if sign not in (1, -1):
        raise ValueError("branch sign must be +1 or -1")
    return Sqrt(_as_expr(arg), sign)


def flip_branch(e: Expr) -> Expr:
    """Flip the declared sign of every sqrt node."""
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, Add):
        return add(flip_branch(e.a), flip_branch(e.b))
    if isinstance(e, Sub):
        return sub(flip_branch(e.a), flip_branch(e.b))
    if isinstance(e, Mul):
        return mul(flip_branch(e.a), flip_branch(e.b))
    if isinstance(e, Div):
        return div(flip_branch(e.a), flip_branch(e.b))
    if isinstance(e, Sqrt):
        return Sqrt(flip_branch(e.arg), -e.sign)
    raise TypeError(f"unknown node {e!r}")


def sqrt_nodes(e: Expr) -> list[Sqrt]:
    if isinstance(e, (Const, Var)):
        return []
    if isinstance(e, Sqrt):
        return [e] + sqrt_nodes(e.arg)
    return sqrt_nodes(e.a) + sqrt_nodes(e.b)


def diff(e: Expr, name: str) -> Expr:
    if isinstance(e, Const):
        return Const(Fraction(0))
    if isinstance(e, Var):
        return Const(Fraction(1 if e.name == name else 0))
    if isinstance(e, Add):
        return add(diff(e.a, name), diff(e.b, name))
    if isinstance(e, Sub):
        return sub(diff(e.a, name), diff(e.b, name))
    if isinstance(e, Mul):
        return add(mul(diff(e.a, name), e.b), mul(e.a, diff(e.b, name)))
    if isinstance(e, Div):
        return div(
            sub(mul(diff(e.a, name), e.b), mul(e.a, diff(e.b, name))),
            mul(e.b, e.b),
        )
    if isinstance(e, Sqrt):
        # d(s*sqrt(u)) = du / (2 * s * sqrt(u))
        return div(diff(e.arg, name), mul(const(2 * e.sign), Sqrt(e.arg, 1)))
    raise TypeError(f"unknown node {e!r}")


def eval_radical(e: Expr, env: dict[str, RadicalSum]) -> RadicalSum:
    """Exact evaluation in the radical field.

    Raises UnsupportedEvaluation when a sqrt argument is irrational or
    negative (the value would leave the supported field).
    """
    if isinstance(e, Const):
        return RadicalSum.from_fraction(e.value)
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Add):
        return eval_radical(e.a, env) + eval_radical(e.b, env)
    if isinstance(e, Sub):
        return eval_radical(e.a, env) - eval_radical(e.b, env)
    if isinstance(e, Mul):
        return eval_radical(e.a, env) * eval_radical(e.b, env)
    if isinstance(e, Div):
        return eval_radical(e.a, env) / eval_radical(e.b, env)
    if isinstance(e, Sqrt):
        inner = eval_radical(e.arg, env)
        if not inner.is_rational():
            raise UnsupportedEvaluation(f"sqrt of an irrational value {inner}")
        f = inner.as_fraction()
        if f < 0:
            raise UnsupportedEvaluation(f"sqrt of a negative value {f}")
        root = sqrt_fraction(f)
        return root if e.sign == 1 else -root
    raise TypeError(f"unknown node {e!r}")


def poly_to_expr(p) -> Expr:
    """Lift an MPoly to an expression tree (for the numeric test path)."""
    total: Expr = Const(Fraction(0))
    names = ("X", "Y", "Z")
    for exps, coeff in sorted(p.terms.items()):
        mono: Expr = Const(coeff)
        for v in range(3):
            for _ in range(exps[v]):
                mono = mul(mono, Var(names[v]))
        total = add(total, mono)
    return total


def to_text(e: Expr) -> str:
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Add):
        return f"({to_text(e.a)}+{to_text(e.b)})"
    if isinstance(e, Sub):
        return f"({to_text(e.a)}-{to_text(e.b)})"
    if isinstance(e, Mul):
        return f"({to_text(e.a)}*{to_text(e.b)})"
    if isinstance(e, Div):
        return f"({to_text(e.a)}/{to_text(e.b)})"
    if isinstance(e, Sqrt):
        body = f"sqrt({to_text(e.arg)})"
        return body if e.sign == 1 else f"-{body}"
    raise TypeError(f"unknown node {e!r}")


# -- interval evaluation -----------------------------------------------------------


def _eval_interval(e: Expr, env: dict, ctx) -> object:
    if isinstance(e, Const):
        return ctx.mpf(e.value.numerator) / ctx.mpf(e.value.denominator)
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Add):
        return _eval_interval(e.a, env, ctx) + _eval_interval(e.b, env, ctx)
    if isinstance(e, Sub):
        return _eval_interval(e.a, env, ctx) - _eval_interval(e.b, env, ctx)
    if isinstance(e, Mul):
        return _eval_interval(e.a, env, ctx) * _eval_interval(e.b, env, ctx)
    if isinstance(e, Div):
        denom = _eval_interval(e.b, env, ctx)
        lo, hi = denom._mpi_
        if _mpf_to_fraction(lo) <= 0 <= _mpf_to_fraction(hi):
            raise DomainError("denominator interval contains zero")
        return _eval_interval(e.a, env, ctx) / denom
    if isinstance(e, Sqrt):
        inner = _eval_interval(e.arg, env, ctx)
        lo, _ = inner._mpi_
        if _mpf_to_fraction(lo) <= 0:
            raise DomainError("sqrt argument interval is not strictly positive")
        root = ctx.sqrt(inner)
        return root if e.sign == 1 else -root
    raise TypeError(f"unknown node {e!r}")


def eval_interval(
    e: Expr, x: tuple[Fraction, Fraction], y: tuple[Fraction, Fraction], prec: int
) -> Enclosure:
    """Certified interval evaluation over the box [x] times [y]."""
    ctx = MPIntervalContext()
    ctx.prec = prec

    def iv_of(bounds):
        lo, hi = bounds
        lo_iv = ctx.mpf(lo.numerator) / ctx.mpf(lo.denominator)
        if lo == hi:
            return lo_iv
        hi_iv = ctx.mpf(hi.numerator) / ctx.mpf(hi.denominator)
        # Affine hull lo + [0,1]*(hi-lo): contains [lo, hi], outward-rounded.
        return lo_iv + ctx.mpf([0, 1]) * (hi_iv - lo_iv)

    env = {"X": iv_of(x), "Y": iv_of(y)}
    result = _eval_interval(e, env, ctx)
    lo, hi = result._mpi_
    return Enclosure(_mpf_to_fraction(lo), _mpf_to_fraction(hi))


def eval_point_interval(e: Expr, point: Point, prec: int) -> Enclosure:
    x, y = point
    return eval_interval(e, (x, x), (y, y), prec)


# -- numeric degeneracy test ----------------------------------------------------


@dataclass(frozen=True)
class ProbablyZero:
    """All sampled enclosures contained zero; consistent with, never a proof
    of, an identically-zero test expression."""

    samples: int


@dataclass(frozen=True)
class NonzeroWitness:
    point: Point
    enclosure: Enclosure


def _box_candidates():
    half = Fraction(1, 4)
    centers = [0, 3, -3, 1, -1, 2, -2, 4, -4, 5, -5, 6, -6, 8, -8]
    for cx in centers:
        for cy in centers:
            yield (Fraction(cx), Fraction(cy), half)
    for cx in centers:
        for cy in centers:
            yield (Fraction(2 * cx + 1, 2), Fraction(2 * cy + 1, 2), Fraction(1, 8))


def _find_box(t: Expr) -> tuple[Fraction, Fraction, Fraction]:
    for cx, cy, half in _box_candidates():
        try:
            eval_interval(t, (cx - half, cx + half), (cy - half, cy + half), 64)
            return cx, cy, half
        except (DomainError, ZeroDivisionError):
            continue
    raise DomainError("no valid evaluation box found")


def test_expression(e: Expr) -> Expr:
    """T = d/dY (e_XX/e_X - e_XY/e_Y) built symbolically on the tree."""
    ex = diff(e, "X")
    ey = diff(e, "Y")
    if isinstance(ex, Const) and ex.value == 0:
        raise PreconditionError("e_X vanishes identically")
    if isinstance(ey, Const) and ey.value == 0:
        raise PreconditionError("e_Y vanishes identically")
    return diff(sub(div(diff(ex, "X"), ex), div(diff(ex, "Y"), ey)), "Y")


def degeneracy_test_numeric(
    e: Expr,
    samples: int = 64,
    precision_bits: int = 1024,
    seed: int = 0,
) -> Union[ProbablyZero, NonzeroWitness]:
    """Numeric path of the derivative test for sqrt-bearing expressions.

    Builds T = d/dY (e_XX/e_X - e_XY/e_Y) symbolically on the tree, picks an
    open box on which T is interval-evaluable (sqrt arguments strictly
    positive, denominators bounded away from zero), and interval-evaluates T
    at `samples` random rational points, escalating the working precision
    from 64 bits up to `precision_bits`.  A sample whose enclosure excludes
    zero is returned as a NonzeroWitness; otherwise ProbablyZero is reported,
    which is inconclusive-but-consistent, never a proof.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    t = test_expression(e)
    if isinstance(t, Const) and t.value == 0:
        return ProbablyZero(samples)
    cx, cy, half = _find_box(t)
    rng = random.Random(seed)
    denom = 997  # odd prime keeps sample coordinates distinct from box edges
    precs = []
    p = 64
    while p < precision_bits:
        precs.append(p)
        p *= 2
    precs.append(precision_bits)
    for _ in range(samples):
        px = cx + half * Fraction(rng.randint(-denom + 1, denom - 1), denom)
        py = cy + half * Fraction(rng.randint(-denom + 1, denom - 1), denom)
        for prec in precs:
            enc = eval_point_interval(t, (px, py), prec)
            if not enc.contains_zero():
                return NonzeroWitness((px, py), enc)
    return ProbablyZero(samples)
