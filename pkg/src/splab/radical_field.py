"""Exact arithmetic in the real field generated by square roots of squarefree
positive integers.

Every value is a finite Q-linear combination  sum_k  c_k * sqrt(r_k)  with the
r_k distinct squarefree positive integers (r = 1 carries the rational part).
Square roots of distinct squarefree integers are linearly independent over Q,
so the sorted term list is a canonical form: structural equality is exact
equality, and hashing is sound.

Internally a term is a plain ``(num, den, rad)`` int triple with ``den > 0``
and ``gcd(|num|, den) = 1``; the tight representation matters because the
counting loops elsewhere in the package do millions of field operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, NamedTuple, Optional

from mpmath.ctx_iv import MPIntervalContext
from mpmath.libmp import to_rational

from .errors import DivisionByZero, RadsumParseError, UnsupportedDenominator

_RawTerm = tuple[int, int, int]  # (numerator, denominator > 0, squarefree radicand)


def squarefree_decompose(m: int) -> tuple[int, int]:
    """Write m >= 1 as s*s*r with r squarefree; return (s, r).

    Trial division up to sqrt(m); every integer this package decomposes is
    desk-scale so nothing fancier is needed.
    """
    if m < 1:
        raise ValueError(f"expected a positive integer, got {m}")
    s = 1
    r = 1
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            s *= d ** (e // 2)
            if e & 1:
                r *= d
        d += 1 if d == 2 else 2
    return s, r * m


def is_squarefree(m: int) -> bool:
    return m >= 1 and squarefree_decompose(m)[0] == 1


class RadicalTerm(NamedTuple):
    """Read-only view of one canonical term c * sqrt(radicand)."""

    coefficient: Fraction
    radicand: int


class RadicalSum:
    """Canonical element of the radical field; immutable and hashable."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[tuple[Fraction, int]] = ()):
        acc: dict[int, Fraction] = {}
        for coeff, rad in terms:
            if rad < 1:
                raise ValueError(f"radicand must be positive, got {rad}")
            s, r = squarefree_decompose(rad)
            c = Fraction(coeff) * s
            acc[r] = acc.get(r, _F0) + c
        raw = []
        for r in sorted(acc):
            c = acc[r]
            if c:
                raw.append((c.numerator, c.denominator, r))
        self._terms = tuple(raw)

    # -- construction ------------------------------------------------------

    @classmethod
    def _make(cls, raw: tuple[_RawTerm, ...]) -> "RadicalSum":
        obj = object.__new__(cls)
        obj._terms = raw
        return obj

    @classmethod
    def from_fraction(cls, value) -> "RadicalSum":
        f = Fraction(value)
        if not f:
            return ZERO
        return cls._make(((f.numerator, f.denominator, 1),))

    @classmethod
    def zero(cls) -> "RadicalSum":
        return ZERO

    @classmethod
    def one(cls) -> "RadicalSum":
        return ONE

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> tuple[RadicalTerm, ...]:
        return tuple(RadicalTerm(Fraction(n, d), r) for n, d, r in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and self._terms[0][2] == 1)

    def as_fraction(self) -> Fraction:
        if not self._terms:
            return _F0
        if len(self._terms) == 1 and self._terms[0][2] == 1:
            n, d, _ = self._terms[0]
            return Fraction(n, d)
        raise ValueError(f"{self} is irrational")

    def sort_key(self) -> tuple:
        """Deterministic total order on canonical forms (not numeric order):
        term count, then the (radicand, coefficient) sequence."""
        return (len(self._terms), tuple((r, n, d) for n, d, r in self._terms))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "RadicalSum") -> "RadicalSum":
        if not isinstance(other, RadicalSum):
            return NotImplemented
        a, b = self._terms, other._terms
        if not a:
            return other
        if not b:
            return self
        out = []
        i = j = 0
        na, nb = len(a), len(b)
        while i < na and j < nb:
            ta = a[i]
            tb = b[j]
            ra, rb = ta[2], tb[2]
            if ra == rb:
                n = ta[0] * tb[1] + tb[0] * ta[1]
                if n:
                    d = ta[1] * tb[1]
                    g = gcd(n, d)
                    out.append((n // g, d // g, ra))
                i += 1
                j += 1
            elif ra < rb:
                out.append(ta)
                i += 1
            else:
                out.append(tb)
                j += 1
        out.extend(a[i:])
        out.extend(b[j:])
        return RadicalSum._make(tuple(out))

    def __neg__(self) -> "RadicalSum":
        return RadicalSum._make(tuple((-n, d, r) for n, d, r in self._terms))

    def __sub__(self, other: "RadicalSum") -> "RadicalSum":
        if not isinstance(other, RadicalSum):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: "RadicalSum") -> "RadicalSum":
        if not isinstance(other, RadicalSum):
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return ZERO
        if len(b) == 1:
            a, b = b, a
        if len(a) == 1:
            n1, d1, r1 = a[0]
            if r1 == 1:
                out = []
                for n2, d2, r2 in b:
                    num = n1 * n2
                    den = d1 * d2
                    g = gcd(num, den)
                    out.append((num // g, den // g, r2))
                return RadicalSum._make(tuple(out))
            # One radical factor: for fixed squarefree r1 the radicand map
            # r2 -> squarefree(r1*r2) is injective, so no accumulation is
            # needed, only a re-sort.
            out = []
            for n2, d2, r2 in b:
                g = gcd(r1, r2)
                num = n1 * n2 * g
                den = d1 * d2
                gg = gcd(num, den)
                out.append(((r1 // g) * (r2 // g), num // gg, den // gg))
            out.sort()
            return RadicalSum._make(tuple((n, d, r) for r, n, d in out))
        acc: dict[int, tuple[int, int]] = {}
        for n1, d1, r1 in a:
            for n2, d2, r2 in b:
                g = gcd(r1, r2)
                rad = (r1 // g) * (r2 // g)
                num = n1 * n2 * g
                den = d1 * d2
                cur = acc.get(rad)
                if cur is None:
                    acc[rad] = (num, den)
                else:
                    cn, cd = cur
                    acc[rad] = (cn * den + num * cd, cd * den)
        out = []
        for rad in sorted(acc):
            num, den = acc[rad]
            if num:
                g = gcd(num, den)
                out.append((num // g, den // g, rad))
        return RadicalSum._make(tuple(out))

    def scale(self, factor) -> "RadicalSum":
        """Multiply by a rational scalar (fast path, no term mixing)."""
        f = Fraction(factor)
        if not f:
            return ZERO
        fn, fd = f.numerator, f.denominator
        out = []
        for n, d, r in self._terms:
            num = n * fn
            den = d * fd
            g = gcd(num, den)
            out.append((num // g, den // g, r))
        return RadicalSum._make(tuple(out))

    def __truediv__(self, other: "RadicalSum") -> "RadicalSum":
        if not isinstance(other, RadicalSum):
            return NotImplemented
        return div(self, other)

    # -- comparisons / hashing ---------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, RadicalSum):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __repr__(self) -> str:
        return f"RadicalSum({self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()

    # -- text form -----------------------------------------------------------

    def to_text(self) -> str:
        """Serialize canonically; parse_radsum inverts this bit-exactly."""
        if not self._terms:
            return "0"
        parts = []
        for k, (n, d, r) in enumerate(self._terms):
            sign = "-" if n < 0 else ("+" if k else "")
            an = -n if n < 0 else n
            if r == 1:
                body = str(an) if d == 1 else f"{an}/{d}"
            elif an == 1 and d == 1:
                body = f"sqrt({r})"
            else:
                coeff = str(an) if d == 1 else f"{an}/{d}"
                body = f"{coeff}*sqrt({r})"
            parts.append(sign + body)
        return "".join(parts)


_F0 = Fraction(0)
ZERO = RadicalSum._make(())
ONE = RadicalSum._make(((1, 1, 1),))


# -- module-level operations (the public op surface) --------------------------


def sqrt_int(m: int) -> RadicalSum:
    """Exact square root of a positive integer: sqrt(m) = s*sqrt(r)."""
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"sqrt_int expects a positive integer, got {m!r}")
    s, r = squarefree_decompose(m)
    return RadicalSum._make(((s, 1, r),))


def sqrt_fraction(value) -> RadicalSum:
    """Exact square root of a nonnegative rational: sqrt(p/q) = sqrt(p*q)/q."""
    f = Fraction(value)
    if f < 0:
        raise ValueError(f"sqrt_fraction expects a nonnegative rational, got {f}")
    if not f:
        return ZERO
    s, r = squarefree_decompose(f.numerator * f.denominator)
    n, d = s, f.denominator
    g = gcd(n, d)
    return RadicalSum._make(((n // g, d // g, r),))


def add(x: RadicalSum, y: RadicalSum) -> RadicalSum:
    return x + y


def mul(x: RadicalSum, y: RadicalSum) -> RadicalSum:
    return x * y


def negate(x: RadicalSum) -> RadicalSum:
    return -x


def _invert(y: RadicalSum) -> RadicalSum:
    raw = y._terms
    if not raw:
        raise DivisionByZero("division by zero")
    nonunit = sum(1 for t in raw if t[2] != 1)
    if len(raw) > 2 or nonunit > 1:
        raise UnsupportedDenominator(
            f"denominator {y} spans more than one quadratic extension"
        )
    if len(raw) == 1:
        n, d, r = raw[0]
        if r == 1:
            return RadicalSum._make(((d, n, 1),) if n > 0 else ((-d, -n, 1),))
        # 1 / ((n/d) sqrt(r)) = (d / (n r)) sqrt(r)
        num, den = d, n * r
        if den < 0:
            num, den = -num, -den
        g = gcd(num, den)
        return RadicalSum._make(((num // g, den // g, r),))
    # p + q*sqrt(r): rationalize with the conjugate.
    (pn, pd, _), (qn, qd, r) = raw  # sorted, so raw[0] is the rational part
    dn = pn * pn * qd * qd - qn * qn * r * pd * pd
    dd = pd * pd * qd * qd
    # dn = 0 would mean sqrt(r) rational, impossible for squarefree r > 1.
    conj = RadicalSum._make(((pn, pd, 1), (-qn, qd, r)))
    return conj.scale(Fraction(dd, dn))


def div(x: RadicalSum, y: RadicalSum) -> RadicalSum:
    """Exact quotient; the denominator must lie in one quadratic extension."""
    return x * _invert(y)


# -- certified enclosures ------------------------------------------------------


@dataclass(frozen=True)
class Enclosure:
    """Closed interval with exact rational endpoints, lo <= hi."""

    lo: Fraction
    hi: Fraction

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def contains(self, value) -> bool:
        v = Fraction(value)
        return self.lo <= v <= self.hi

    def intersects(self, other: "Enclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2


def _mpf_to_fraction(raw) -> Fraction:
    p, q = to_rational(raw)
    return Fraction(int(p), int(q))


def eval_enclosure(x: RadicalSum, precision_bits: int = 64) -> Enclosure:
    """Interval certified to contain the exact value of x.

    Uses outward-rounded interval arithmetic at the requested working
    precision; the width shrinks as precision_bits grows.
    """
    if precision_bits < 16:
        raise ValueError(f"precision_bits must be >= 16, got {precision_bits}")
    ctx = MPIntervalContext()
    ctx.prec = precision_bits
    total = ctx.mpf(0)
    for n, d, r in x._terms:
        t = ctx.mpf(n) / ctx.mpf(d)
        if r != 1:
            t *= ctx.sqrt(ctx.mpf(r))
        total += t
    lo_raw, hi_raw = total._mpi_
    return Enclosure(_mpf_to_fraction(lo_raw), _mpf_to_fraction(hi_raw))


def separation_bits(x: RadicalSum, y: RadicalSum, cap: int = 4096) -> Optional[int]:
    """Smallest tried precision at which the enclosures of x and y are disjoint.

    Escalates 64 -> cap doubling each step; None if the cap is reached.  For
    structurally equal values this is always None (their enclosures always
    intersect); structural equality stays authoritative either way.
    """
    bits = 64
    while bits <= cap:
        if not eval_enclosure(x, bits).intersects(eval_enclosure(y, bits)):
            return bits
        bits *= 2
    return None


# -- text format ----------------------------------------------------------------
#
# radsum   := ['-'] term (('+'|'-') term)*
# term     := rational ['*' 'sqrt(' integer ')'] | 'sqrt(' integer ')'
# rational := integer ['/' positive-integer]
#
# Parsing normalizes: terms are merged, reduced and sorted, radicands
# squarefree-decomposed.  Serialization emits the canonical form, so
# parse_radsum(x.to_text()) == x bit-exactly.


def parse_radsum(text: str) -> RadicalSum:
    s = text.strip()
    if not s:
        raise RadsumParseError("empty input", 0)
    pos = 0
    n = len(s)

    def skip_ws():
        nonlocal pos
        while pos < n and s[pos] in " \t":
            pos += 1

    def read_int() -> int:
        nonlocal pos
        start = pos
        while pos < n and s[pos].isdigit():
            pos += 1
        if pos == start:
            raise RadsumParseError("expected an integer", start)
        return int(s[start:pos])

    def read_term(sign: int) -> tuple[Fraction, int]:
        nonlocal pos
        skip_ws()
        if pos >= n:
            raise RadsumParseError("expected a term", pos)
        if s.startswith("sqrt", pos):
            coeff = Fraction(sign)
        else:
            num = read_int()
            den = 1
            if pos < n and s[pos] == "/":
                pos += 1
                dstart = pos
                den = read_int()
                if den == 0:
                    raise RadsumParseError("zero denominator", dstart)
            coeff = Fraction(sign * num, den)
            skip_ws()
            if pos < n and s[pos] == "*":
                pos += 1
                skip_ws()
            else:
                return coeff, 1
        if not s.startswith("sqrt", pos):
            raise RadsumParseError("expected 'sqrt('", pos)
        pos += 4
        if pos >= n or s[pos] != "(":
            raise RadsumParseError("expected '(' after sqrt", pos)
        pos += 1
        rstart = pos
        rad = read_int()
        if rad < 1:
            raise RadsumParseError("radicand must be positive", rstart)
        if pos >= n or s[pos] != ")":
            raise RadsumParseError("expected ')'", pos)
        pos += 1
        return coeff, rad

    terms: list[tuple[Fraction, int]] = []
    skip_ws()
    sign = 1
    if s[pos] == "-":
        sign = -1
        pos += 1
    elif s[pos] == "+":
        pos += 1
    terms.append(read_term(sign))
    skip_ws()
    while pos < n:
        c = s[pos]
        if c == "+":
            sign = 1
        elif c == "-":
            sign = -1
        else:
            raise RadsumParseError(f"unexpected character {c!r}", pos)
        pos += 1
        terms.append(read_term(sign))
        skip_ws()
    return RadicalSum(terms)


def canonical_sorted(values: Iterable[RadicalSum]) -> list[RadicalSum]:
    """Sort by the deterministic canonical-form order (not numeric order)."""
    return sorted(values, key=RadicalSum.sort_key)


def numeric_sorted(values: Iterable[RadicalSum], precision_bits: int = 64) -> list[RadicalSum]:
    """Sort by numeric value via enclosure midpoints (plot emission only)."""
    return sorted(values, key=lambda v: eval_enclosure(v, precision_bits).midpoint())
