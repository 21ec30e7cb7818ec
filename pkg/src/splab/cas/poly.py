"""Exact multivariate polynomials over Q in the variables X, Y, Z.

Monomials are exponent triples; the canonical order is graded lexicographic
with X > Y > Z.  The gcd is a primitive-part Euclidean algorithm with content
recursion in a chosen main variable, which is plenty at the degrees in scope.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd as int_gcd
from typing import Iterable, Mapping, Optional, Union

from ..errors import PolyParseError

Exponent = tuple[int, int, int]
VARS = ("X", "Y", "Z")
_F0 = Fraction(0)
_F1 = Fraction(1)


def _grlex(e: Exponent) -> tuple[int, int, int, int]:
    return (e[0] + e[1] + e[2], e[0], e[1], e[2])


def _var_index(var: Union[int, str]) -> int:
    if isinstance(var, str):
        try:
            return VARS.index(var)
        except ValueError:
            raise ValueError(f"unknown variable {var!r}") from None
    if var not in (0, 1, 2):
        raise ValueError(f"variable index out of range: {var}")
    return var


class MPoly:
    """Polynomial as a map exponent-triple -> nonzero Fraction coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Exponent, Fraction]] = None):
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[e] = c
        self.terms = clean

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls) -> "MPoly":
        return cls()

    @classmethod
    def const(cls, value) -> "MPoly":
        return cls({(0, 0, 0): Fraction(value)})

    @classmethod
    def var(cls, var: Union[int, str]) -> "MPoly":
        e = [0, 0, 0]
        e[_var_index(var)] = 1
        return cls({tuple(e): _F1})

    # -- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or set(self.terms) == {(0, 0, 0)}

    def const_value(self) -> Fraction:
        if not self.terms:
            return _F0
        if self.is_const():
            return self.terms[(0, 0, 0)]
        raise ValueError("not a constant polynomial")

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def degree_in(self, var: Union[int, str]) -> int:
        v = _var_index(var)
        if not self.terms:
            return 0
        return max(e[v] for e in self.terms)

    def uses(self, var: Union[int, str]) -> bool:
        v = _var_index(var)
        return any(e[v] for e in self.terms)

    def leading(self) -> tuple[Exponent, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex)
        return e, self.terms[e]

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "MPoly") -> "MPoly":
        if not isinstance(other, MPoly):
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, _F0) + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        res = MPoly.__new__(MPoly)
        res.terms = out
        return res

    def __neg__(self) -> "MPoly":
        res = MPoly.__new__(MPoly)
        res.terms = {e: -c for e, c in self.terms.items()}
        return res

    def __sub__(self, other: "MPoly") -> "MPoly":
        if not isinstance(other, MPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: "MPoly") -> "MPoly":
        if not isinstance(other, MPoly):
            return NotImplemented
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                s = out.get(e, _F0) + c1 * c2
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
        res = MPoly.__new__(MPoly)
        res.terms = out
        return res

    def __pow__(self, k: int) -> "MPoly":
        if k < 0:
            raise ValueError("negative power")
        result = MPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, factor) -> "MPoly":
        f = Fraction(factor)
        if not f:
            return MPoly.zero()
        res = MPoly.__new__(MPoly)
        res.terms = {e: c * f for e, c in self.terms.items()}
        return res

    def diff(self, var: Union[int, str]) -> "MPoly":
        v = _var_index(var)
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            if e[v]:
                ne = list(e)
                ne[v] -= 1
                out[tuple(ne)] = c * e[v]
        res = MPoly.__new__(MPoly)
        res.terms = out
        return res

    # -- evaluation ---------------------------------------------------------

    def eval(self, point: tuple) -> Fraction:
        """Evaluate at a rational point (x, y, z)."""
        x, y, z = (Fraction(v) for v in point)
        total = _F0
        for (a, b, c), coeff in self.terms.items():
            total += coeff * x**a * y**b * z**c
        return total

    def eval_ring(self, point: tuple) -> "object":
        """Evaluate over any commutative ring with +, * and .scale(Fraction).

        Used with RadicalSum values; powers along each axis are cached.
        """
        from ..radical_field import RadicalSum

        if not self.terms:
            return RadicalSum.zero()
        maxes = [0, 0, 0]
        for e in self.terms:
            for v in range(3):
                if e[v] > maxes[v]:
                    maxes[v] = e[v]
        pows: list[list] = []
        for v in range(3):
            axis = [RadicalSum.one()]
            for _ in range(maxes[v]):
                axis.append(axis[-1] * point[v])
            pows.append(axis)
        total = RadicalSum.zero()
        for (a, b, c), coeff in self.terms.items():
            mono = pows[0][a] * pows[1][b] * pows[2][c]
            total = total + mono.scale(coeff)
        return total

    # -- normal forms ---------------------------------------------------------

    def signed_content(self) -> Fraction:
        """Rational c with self = c * primitive(self); sign follows the
        leading grlex coefficient, so primitive parts have positive lead."""
        if not self.terms:
            raise ValueError("zero polynomial has no content")
        num = 0
        den = 1
        for c in self.terms.values():
            num = int_gcd(num, c.numerator)
            den = den * c.denominator // int_gcd(den, c.denominator)
        content = Fraction(num, den)
        if self.leading()[1] < 0:
            content = -content
        return content

    def primitive(self) -> "MPoly":
        """Integer coprime coefficients, positive leading grlex coefficient."""
        if not self.terms:
            return self
        return self.scale(1 / self.signed_content())

    # -- comparisons -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"MPoly({self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()

    # -- text ---------------------------------------------------------------------

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_grlex, reverse=True):
            c = self.terms[e]
            mono = []
            for v in range(3):
                if e[v] == 1:
                    mono.append(VARS[v])
                elif e[v] > 1:
                    mono.append(f"{VARS[v]}^{e[v]}")
            body = "*".join(mono)
            ac = abs(c)
            if not body:
                piece = str(ac)
            elif ac == 1:
                piece = body
            else:
                piece = f"{ac}*{body}"
            if not parts:
                parts.append(piece if c > 0 else "-" + piece)
            else:
                parts.append(("+" if c > 0 else "-") + piece)
        return "".join(parts)


def parse_poly(text: str) -> MPoly:
    """Parse the polynomial grammar: rationals, X/Y/Z, ^, *, +, -, parens."""
    s = text
    n = len(s)
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < n and s[pos] in " \t":
            pos += 1

    def peek() -> str:
        skip_ws()
        return s[pos] if pos < n else ""

    def read_int() -> int:
        nonlocal pos
        skip_ws()
        start = pos
        while pos < n and s[pos].isdigit():
            pos += 1
        if pos == start:
            raise PolyParseError("expected an integer", start)
        return int(s[start:pos])

    def parse_base() -> MPoly:
        nonlocal pos
        c = peek()
        if c == "(":
            pos += 1
            inner = parse_expr()
            if peek() != ")":
                raise PolyParseError("expected ')'", pos)
            pos += 1
            return inner
        if c in VARS:
            pos += 1
            return MPoly.var(c)
        if c.isdigit():
            num = read_int()
            if peek() == "/":
                pos += 1
                dstart = pos
                den = read_int()
                if den == 0:
                    raise PolyParseError("zero denominator", dstart)
                return MPoly.const(Fraction(num, den))
            return MPoly.const(num)
        raise PolyParseError(f"unexpected character {c!r}" if c else "unexpected end of input", pos)

    def parse_factor() -> MPoly:
        nonlocal pos
        base = parse_base()
        if peek() == "^":
            pos += 1
            expo = read_int()
            return base**expo
        return base

    def parse_term(negated: bool) -> MPoly:
        nonlocal pos
        result = parse_factor()
        while peek() == "*":
            pos += 1
            result = result * parse_factor()
        return -result if negated else result

    def parse_expr() -> MPoly:
        nonlocal pos
        negated = False
        if peek() == "-":
            pos += 1
            negated = True
        elif peek() == "+":
            pos += 1
        total = parse_term(negated)
        while True:
            c = peek()
            if c == "+":
                pos += 1
                total = total + parse_term(False)
            elif c == "-":
                pos += 1
                total = total + parse_term(True)
            else:
                return total

    result = parse_expr()
    skip_ws()
    if pos != n:
        raise PolyParseError(f"unexpected character {s[pos]!r}", pos)
    return result


# -- exact division and gcd -------------------------------------------------------


def divexact(p: MPoly, q: MPoly) -> Optional[MPoly]:
    """p / q when the division is exact, else None."""
    if q.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if p.is_zero():
        return MPoly.zero()
    qe, qc = q.leading()
    rem = dict(p.terms)
    quot: dict[Exponent, Fraction] = {}
    while rem:
        re = max(rem, key=_grlex)
        rc = rem[re]
        de = (re[0] - qe[0], re[1] - qe[1], re[2] - qe[2])
        if min(de) < 0:
            return None
        c = rc / qc
        quot[de] = quot.get(de, _F0) + c
        for e2, c2 in q.terms.items():
            e = (de[0] + e2[0], de[1] + e2[1], de[2] + e2[2])
            sdiff = rem.get(e, _F0) - c * c2
            if sdiff:
                rem[e] = sdiff
            elif e in rem:
                del rem[e]
    return MPoly(quot)


def _coeffs_in(p: MPoly, v: int) -> dict[int, MPoly]:
    """View p as a univariate polynomial in variable v with MPoly coefficients."""
    out: dict[int, dict[Exponent, Fraction]] = {}
    for e, c in p.terms.items():
        d = e[v]
        ne = list(e)
        ne[v] = 0
        out.setdefault(d, {})[tuple(ne)] = c
    return {d: MPoly(t) for d, t in out.items()}


def _from_coeffs(coeffs: dict[int, MPoly], v: int) -> MPoly:
    total = MPoly.zero()
    for d, poly in coeffs.items():
        shift: dict[Exponent, Fraction] = {}
        for e, c in poly.terms.items():
            ne = list(e)
            ne[v] += d
            shift[tuple(ne)] = c
        total = total + MPoly(shift)
    return total


def _content_in(p: MPoly, v: int) -> MPoly:
    return reduce(poly_gcd, _coeffs_in(p, v).values())


def _pseudo_rem(a: MPoly, b: MPoly, v: int) -> MPoly:
    """Pseudo-remainder of a by b in variable v (up to lc(b) factors)."""
    db = b.degree_in(v)
    bc = _coeffs_in(b, v)
    lcb = bc[db]
    r = a
    while not r.is_zero():
        dr = r.degree_in(v)
        if dr < db:
            break
        rc = _coeffs_in(r, v)
        lcr = rc[dr]
        shift: dict[Exponent, Fraction] = {}
        for e, c in b.terms.items():
            ne = list(e)
            ne[v] += dr - db
            shift[tuple(ne)] = c
        r = r * lcb - lcr * MPoly(shift)
    return r


def poly_gcd(p: MPoly, q: MPoly) -> MPoly:
    """gcd up to the canonical convention: primitive integer coefficients,
    positive leading grlex coefficient; gcd(p, 0) = normalized p."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    if p.is_zero():
        return q.primitive()
    if q.is_zero():
        return p.primitive()
    if p.is_const() or q.is_const():
        return MPoly.const(1)
    v = next(i for i in range(3) if p.uses(i) or q.uses(i))
    if not p.uses(v) or not q.uses(v):
        # One of them is free of the main variable: it divides only the
        # content of the other with respect to v.
        free, other = (p, q) if not p.uses(v) else (q, p)
        return poly_gcd(free, _content_in(other, v))
    cont_p = _content_in(p, v)
    cont_q = _content_in(q, v)
    a = divexact(p, cont_p)
    b = divexact(q, cont_q)
    assert a is not None and b is not None
    if a.degree_in(v) < b.degree_in(v):
        a, b = b, a
    while not b.is_zero():
        r = _pseudo_rem(a, b, v)
        if r.is_zero():
            a, b = b, r
            break
        if not r.uses(v):
            # Nonzero remainder free of v: the primitive gcd is trivial.
            a, b = MPoly.const(1), MPoly.zero()
            break
        pp = divexact(r, _content_in(r, v))
        assert pp is not None
        a, b = b, pp
    cont_gcd = poly_gcd(cont_p, cont_q)
    result = cont_gcd * (a.primitive() if not a.is_const() else MPoly.const(1))
    return result.primitive()
