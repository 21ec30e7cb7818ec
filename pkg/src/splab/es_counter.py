"""Brute-force counting of polynomial zeros on Cartesian products, the
edge-to-triple injection, and the bound audits.

All counting is exact radical arithmetic end to end; the real-valued ratios
in an AuditRecord are 64-bit floats for reporting, while every hard
assertion elsewhere is made on the equivalent exact integer comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .cas.eliminate import eliminate_dilate
from .cas.poly import MPoly
from .constructions import ConstructionInstance
from .errors import (
    DivisionByZero,
    LambdaOne,
    SizeGuardExceeded,
    UnsupportedDenominator,
    UnsupportedEvaluation,
)
from .graph_sets import (
    RestrictionGraph,
    restricted_dilate_sum,
    restricted_product,
    restricted_ratio,
    restricted_sum,
)
from .radical_field import RadicalSum

SIZE_GUARD = 10**8


@dataclass(frozen=True)
class SolutionCount:
    S: int
    z_count: int
    injective: bool


def _z_linear_part(F: MPoly) -> Optional[tuple[MPoly, Fraction]]:
    """If F = f(X, Y) + u*Z with constant u != 0, return (f, u)."""
    u = None
    rest: dict = {}
    for e, c in F.terms.items():
        if e[2] == 0:
            rest[e] = c
        elif e == (0, 0, 1):
            u = c
        else:
            return None
    if u is None:
        return None
    return MPoly(rest), u


def count_zero_intersection(
    F: MPoly,
    cs: Iterable[RadicalSum],
    ds: Iterable[RadicalSum],
    es: Iterable[RadicalSum],
    force_slow: bool = False,
    size_guard: int = SIZE_GUARD,
) -> int:
    """Exact number of triples (c, d, e) in C x D x E with F(c, d, e) = 0.

    When F is linear in Z with a constant coefficient the count hashes E and
    walks the (c, d) grid; otherwise it is a triple loop guarded by
    |C|*|D|*|E| <= size_guard.
    """
    cs = list(dict.fromkeys(cs))
    ds = list(dict.fromkeys(ds))
    es = list(dict.fromkeys(es))
    linear = None if force_slow else _z_linear_part(F)
    if linear is not None:
        f, u = linear
        es_set = frozenset(es)
        count = 0
        zero = RadicalSum.zero()
        scale = -Fraction(1) / u
        try:
            for c in cs:
                for d in ds:
                    target = f.eval_ring((c, d, zero)).scale(scale)
                    if target in es_set:
                        count += 1
        except (DivisionByZero, UnsupportedDenominator) as exc:
            raise UnsupportedEvaluation(str(exc)) from exc
        return count

    if len(cs) * len(ds) * len(es) > size_guard:
        raise SizeGuardExceeded(
            f"{len(cs)}*{len(ds)}*{len(es)} triples exceed the guard {size_guard}"
        )
    # Group F by the Z exponent so each triple costs one Horner evaluation.
    by_z: dict[int, dict] = {}
    for e, c in F.terms.items():
        by_z.setdefault(e[2], {})[(e[0], e[1], 0)] = c
    z_exps = sorted(by_z)
    polys = [MPoly(by_z[g]) for g in z_exps]
    max_g = z_exps[-1] if z_exps else 0
    e_pows: list[list[RadicalSum]] = []
    for e in es:
        axis = [RadicalSum.one()]
        for _ in range(max_g):
            axis.append(axis[-1] * e)
        e_pows.append(axis)
    # Hoist the (c, d)-independent slices: coefficients of Z^g that are
    # constant polynomials contribute the same value to every (c, d) cell.
    const_part: list[tuple[int, Fraction]] = []
    var_part: list[tuple[int, MPoly]] = []
    for g, p in zip(z_exps, polys):
        if p.is_const():
            const_part.append((g, p.const_value()))
        else:
            var_part.append((g, p))
    zero = RadicalSum.zero()
    pre_e = []
    for pows in e_pows:
        acc = zero
        for g, cval in const_part:
            acc = acc + pows[g].scale(cval)
        pre_e.append(acc)
    count = 0
    try:
        for c in cs:
            for d in ds:
                vals = [(g, p.eval_ring((c, d, zero))) for g, p in var_part]
                for i_e, pows in enumerate(e_pows):
                    acc = pre_e[i_e]
                    for g, v in vals:
                        acc = acc + (v if g == 0 else v * pows[g])
                    if acc.is_zero():
                        count += 1
    except (DivisionByZero, UnsupportedDenominator) as exc:
        raise UnsupportedEvaluation(str(exc)) from exc
    return count


def verify_injection(g: RestrictionGraph, lam) -> SolutionCount:
    """Map each edge (a, b) to (a+b, a+lam*b, ab), check every image lies on
    the eliminated surface, and count the surface points over C x D x E.

    S = |G| since each edge is one solution of the system; the triple map is
    injective because (c, d) already determines (a, b) when lam != 1.
    """
    lam = Fraction(lam)
    if lam == 1:
        raise LambdaOne("verify_injection requires lambda != 1")
    _, F = eliminate_dilate(lam)
    c_set = restricted_sum(g)
    d_set = restricted_dilate_sum(g, lam)
    e_set = restricted_product(g)
    triples = set()
    n_edges = 0
    for a, b in g.edge_values():
        c = a + b
        d = a + b.scale(lam)
        e = a * b
        if not F.eval_ring((c, d, e)).is_zero():
            raise RuntimeError(f"edge image ({c}, {d}, {e}) is off the surface")
        triples.add((c, d, e))
        n_edges += 1
    s = g.size
    z = count_zero_intersection(F, c_set.values, d_set.values, e_set.values)
    return SolutionCount(S=s, z_count=z, injective=len(triples) == s)


def rsz_rhs(na: int, nb: int, nc: int) -> float:
    """Constant-free right-hand side n_a^(1/2) n_b^(2/3) n_c^(2/3)
    + n_a^(1/2) (n_a^(1/2) + n_b + n_c)."""
    if min(na, nb, nc) < 0:
        raise ValueError("set sizes must be nonnegative")
    ra = math.sqrt(na)
    return ra * nb ** (2 / 3) * nc ** (2 / 3) + ra * (ra + nb + nc)


@dataclass(frozen=True)
class AuditRecord:
    size_a: int
    size_b: int
    size_g: int
    size_sum: int
    size_dilate: int
    size_prod: int
    size_ratio: Optional[int]
    ratio_trivial: float
    ratio611: float
    ratio_sp34: float
    ars_rhs: float
    rsz_rhs: float
    rsz_ratio: float
    eps15: Optional[float]
    eps15_prime: Optional[float]


def eps_prime_map(eps: float) -> float:
    """The exponent map eps -> 4*eps / (24 + 16*eps)."""
    return 4 * eps / (24 + 16 * eps)


def bound_audit(instance: ConstructionInstance, lam) -> AuditRecord:
    """Measure one instance against the exponent bounds.

    ratio611   = max(|C|,|D|,|E|) / |G|^(6/11)
    ratioTriv  = max(|C|,|E|) * sqrt(2) / |G|^(1/2)   (>= 1 always; the exact
                 decision lives in graph_sets.trivial_bound_check)
    ratioSp34  = max(|C|,|E|) * |A|^(3/8) / |G|^(3/4)
    arsRhs     = |G|^(3/2) / |A|^(7/4)
    """
    lam = Fraction(lam)
    g = instance.graph
    if g.size < 1:
        raise ValueError("bound_audit requires at least one edge")
    n_sum = len(restricted_sum(g))
    n_dil = len(restricted_dilate_sum(g, lam))
    n_prod = len(restricted_product(g))
    try:
        n_ratio: Optional[int] = len(restricted_ratio(g))
    except (DivisionByZero, UnsupportedDenominator):
        n_ratio = None
    na = len(g.left)
    nb = len(g.right)
    ng = g.size
    m_cde = max(n_sum, n_dil, n_prod)
    m_ce = max(n_sum, n_prod)
    rhs = rsz_rhs(n_sum, n_dil, n_prod)
    if na >= 2:
        eps = math.log(ng) / math.log(na) - 1.5
        eps_p = eps_prime_map(eps)
    else:
        eps = None
        eps_p = None
    return AuditRecord(
        size_a=na,
        size_b=nb,
        size_g=ng,
        size_sum=n_sum,
        size_dilate=n_dil,
        size_prod=n_prod,
        size_ratio=n_ratio,
        ratio_trivial=m_ce * math.sqrt(2) / math.sqrt(ng),
        ratio611=m_cde / ng ** (6 / 11),
        ratio_sp34=m_ce * na ** (3 / 8) / ng ** (3 / 4),
        ars_rhs=ng ** (3 / 2) / na ** (7 / 4),
        rsz_rhs=rhs,
        rsz_ratio=ng / rhs if rhs > 0 else float("inf"),
        eps15=eps,
        eps15_prime=eps_p,
    )
