"""Normalized rational functions over Q[X, Y, Z] and the derivative-based
degeneracy test.

The test expression is the second mixed partial of log|f_X / f_Y|, computed
without ever materializing a logarithm: the absolute value is immaterial
after differentiation, so T = d/dY (f_XX/f_X - f_XY/f_Y).  Whether T vanishes
identically is decided symbolically (zero numerator), never numerically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import count
from typing import Iterable, Optional, Sequence, Union

from ..errors import PreconditionError
from .poly import MPoly, divexact, poly_gcd

Point = tuple[Fraction, Fraction]


class RatFunc:
    """num / den with gcd(num, den) = 1 and den primitive with positive lead.

    The canonical form makes structural equality exact equality of rational
    functions.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: Optional[MPoly] = None):
        if den is None:
            den = MPoly.const(1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num = MPoly.zero()
            self.den = MPoly.const(1)
            return
        g = poly_gcd(num, den)
        if not g.is_const() or g.const_value() != 1:
            num = divexact(num, g)
            den = divexact(den, g)
            assert num is not None and den is not None
        c = den.signed_content()
        self.num = num.scale(1 / c)
        self.den = den.scale(1 / c)

    @classmethod
    def const(cls, value) -> "RatFunc":
        return cls(MPoly.const(value))

    @classmethod
    def from_poly(cls, p: MPoly) -> "RatFunc":
        return cls(p)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "RatFunc") -> "RatFunc":
        if not isinstance(other, RatFunc):
            return NotImplemented
        return RatFunc(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        if not isinstance(other, RatFunc):
            return NotImplemented
        return RatFunc(
            self.num * other.den - other.num * self.den, self.den * other.den
        )

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        if not isinstance(other, RatFunc):
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if not isinstance(other, RatFunc):
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def diff(self, var: Union[int, str]) -> "RatFunc":
        return RatFunc(
            self.num.diff(var) * self.den - self.num * self.den.diff(var),
            self.den * self.den,
        )

    def eval(self, point: tuple) -> Fraction:
        d = self.den.eval(point)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at {point}")
        return self.num.eval(point) / d

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RatFunc({self.to_text()!r})"

    def to_text(self) -> str:
        if self.den.is_const() and self.den.const_value() == 1:
            return self.num.to_text()
        return f"({self.num.to_text()})/({self.den.to_text()})"


def differentiate(rf: RatFunc, var: Union[int, str]) -> RatFunc:
    """Quotient-rule derivative, normalized by gcd."""
    return rf.diff(var)


@dataclass(frozen=True)
class DegeneracyReport:
    T: RatFunc
    identically_zero: bool
    witness: Optional[Point]
    witness_value: Optional[Fraction]


def mixed_log_partial(f: RatFunc, x_first: bool = True) -> RatFunc:
    """d^2 log|f_X / f_Y| / dX dY, differentiating in either order."""
    fx = f.diff("X")
    fy = f.diff("Y")
    if fx.is_zero() or fy.is_zero():
        raise PreconditionError("f_X and f_Y must not vanish identically")
    if x_first:
        inner = f.diff("X").diff("X") / fx - fx.diff("Y") / fy
        return inner.diff("Y")
    inner = fx.diff("Y") / fx - fy.diff("Y") / fy
    return inner.diff("X")


def _candidate_points() -> Iterable[Point]:
    """Deterministic spiral of small rational points, (0,0), (0,1), (1,0), ..."""
    vals: list[Fraction] = [Fraction(0)]
    for k in count(1):
        vals.append(Fraction(k))
        vals.append(Fraction(-k))
        vals.append(Fraction(1, k + 1))
        vals.append(Fraction(-1, k + 1))
        if k >= 12:
            break
    for s in range(len(vals)):
        for i in range(s + 1):
            yield (vals[i], vals[s - i])


def degeneracy_test_rational(
    f: RatFunc, prefer: Sequence[Point] = ()
) -> DegeneracyReport:
    """Symbolic degeneracy test for a rational f(X, Y).

    identically_zero is decided by the numerator of T being the zero
    polynomial.  Otherwise the witness is the first rational point (from
    `prefer`, then a deterministic small-point spiral) where both the
    numerator and denominator of T are nonzero.
    """
    if f.num.uses("Z") or f.den.uses("Z"):
        raise PreconditionError("f must be a function of X and Y only")
    T = mixed_log_partial(f)
    if T.is_zero():
        return DegeneracyReport(T, True, None, None)

    def try_point(pt: Point) -> Optional[Fraction]:
        triple = (pt[0], pt[1], Fraction(0))
        if T.den.eval(triple) == 0:
            return None
        v = T.eval(triple)
        return v if v != 0 else None

    for pt in prefer:
        pt = (Fraction(pt[0]), Fraction(pt[1]))
        v = try_point(pt)
        if v is not None:
            return DegeneracyReport(T, False, pt, v)
    for pt in _candidate_points():
        v = try_point(pt)
        if v is not None:
            return DegeneracyReport(T, False, pt, v)
    raise RuntimeError("no witness point found for a nonzero test expression")
