"""Generators for the extremal constructions: each returns the ground sets,
the restriction graph, and the statistics the construction is supposed to
achieve, so the audit side can recompute and compare.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional

from .errors import DiscriminantFailure, GraphFormatError, InsufficientPrimes
from .graph_sets import (
    GroundSet,
    RestrictionGraph,
    parse_graph,
    restricted_dilate_sum,
    restricted_product,
    restricted_ratio,
    restricted_shifted_product,
    restricted_sum,
    write_graph,
)
from .radical_field import RadicalSum, sqrt_fraction, sqrt_int


def sieve_primes_to(n: int) -> list[int]:
    """All primes <= n by the sieve of Eratosthenes."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i in range(2, n + 1) if sieve[i]]


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) computed exactly."""
    if n < 0 or k < 1:
        raise ValueError("iroot expects n >= 0, k >= 1")
    if n < 2:
        return n
    x = int(round(n ** (1.0 / k)))
    while x > 0 and x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


class Prediction(NamedTuple):
    """One claimed statistic: op is '==' or '<='."""

    op: str
    value: int


@dataclass
class ConstructionInstance:
    name: str
    params: dict
    graph: RestrictionGraph
    predicted: dict[str, Prediction]


# -- recomputation / audit of predicted statistics --------------------------------


def recompute_statistic(instance: ConstructionInstance, key: str) -> int:
    g = instance.graph
    if key == "G":
        return g.size
    if key == "sum":
        return len(restricted_sum(g))
    if key == "prod":
        return len(restricted_product(g))
    if key == "ratio":
        return len(restricted_ratio(g))
    if key.startswith("dilate@"):
        return len(restricted_dilate_sum(g, Fraction(key.split("@", 1)[1])))
    if key.startswith("shifted@"):
        a, b = key.split("@", 1)[1].split(",")
        return len(restricted_shifted_product(g, Fraction(a), Fraction(b)))
    raise ValueError(f"unknown statistic {key!r}")


def verify_predicted(instance: ConstructionInstance) -> list[str]:
    """Recompute every predicted statistic; return mismatch descriptions."""
    failures = []
    for key, (op, value) in instance.predicted.items():
        actual = recompute_statistic(instance, key)
        ok = actual == value if op == "==" else actual <= value
        if not ok:
            failures.append(f"{instance.name}: {key} {op} {value} but got {actual}")
    return failures


# -- the constructions -------------------------------------------------------------


def chang(n: int) -> ConstructionInstance:
    """A = {sqrt(i) +- sqrt(j)}, edges (sqrt(i)+sqrt(j), sqrt(i)-sqrt(j)).

    Restricted sums collapse to {2 sqrt(i)}, differences to {2 sqrt(j)}, and
    products to the integers {i - j}; the graph has exactly n^2 edges.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    roots = [sqrt_int(i) for i in range(1, n + 1)]
    values = []
    for ri in roots:
        for rj in roots:
            values.append(ri + rj)
            values.append(ri - rj)
    ground = GroundSet.from_values(values)
    edges = []
    for ri in roots:
        for rj in roots:
            edges.append((ground.index_of(ri + rj), ground.index_of(ri - rj)))
    graph = RestrictionGraph(ground, ground, edges)
    predicted = {
        "G": Prediction("==", n * n),
        "sum": Prediction("==", n),
        "dilate@-1": Prediction("==", n),
        "prod": Prediction("==", 2 * n - 1),
    }
    return ConstructionInstance("chang", {"n": n}, graph, predicted)


def figure1_lines_hyperbolas(n: int) -> ConstructionInstance:
    """Intersections of n lines x+y = s_k with n hyperbolas xy = c_m.

    s_k = 2n + k and c_m = m keep every discriminant positive, so each pair
    meets in two distinct points and |G| = 2 n^2 with the sum set hitting the
    trivial bound with equality.  A coincidence among intersection points
    would be repaired by shifting the s_k upward; with these parameters it
    cannot occur (a point determines (s, c)).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    for shift in range(8):
        points: list[tuple[RadicalSum, RadicalSum]] = []
        for k in range(1, n + 1):
            s = 2 * n + k + shift
            s_val = RadicalSum.from_fraction(s)
            for m in range(1, n + 1):
                disc = s * s - 4 * m
                root = sqrt_int(disc)
                x1 = (s_val + root).scale(Fraction(1, 2))
                x2 = (s_val - root).scale(Fraction(1, 2))
                points.append((x1, x2))
                points.append((x2, x1))
        if len(set(points)) == len(points):
            break
    else:
        raise RuntimeError("could not find collision-free line heights")
    left = GroundSet.from_values(x for x, _ in points)
    right = GroundSet.from_values(y for _, y in points)
    edges = [(left.index_of(x), right.index_of(y)) for x, y in points]
    graph = RestrictionGraph(left, right, edges)
    predicted = {
        "G": Prediction("==", 2 * n * n),
        "sum": Prediction("==", n),
        "prod": Prediction("==", n),
    }
    return ConstructionInstance(
        "figure1", {"n": n, "shift": shift}, graph, predicted
    )


def ars2(n: int, lam=2) -> ConstructionInstance:
    """Prime-radical construction: A = {u sqrt(v) / sqrt(w)} with u, v, w
    distinct primes, v, w <= n^(1/5) and u <= n^(3/5).

    Edges pair u sqrt(v)/sqrt(w) with z sqrt(w)/sqrt(v) over quadruples of
    distinct primes; products are the plain integers uz, so the product set
    stays below n^(6/5) while |G| grows like n^(8/5).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    lam = Fraction(lam)
    k1 = iroot(n, 5)
    k3 = iroot(n**3, 5)
    smalls = sieve_primes_to(k1)
    bigs = sieve_primes_to(k3)
    if len(smalls) < 2 or len(bigs) < 3:
        raise InsufficientPrimes(
            f"need >=2 primes <= n^(1/5)={k1} and >=3 primes <= n^(3/5)={k3}"
        )

    def element(u: int, v: int, w: int) -> RadicalSum:
        # u*sqrt(v)/sqrt(w) = (u/w)*sqrt(v*w); v != w primes, so v*w squarefree.
        return RadicalSum(((Fraction(u, w), v * w),))

    values = []
    small_pairs = [(v, w) for v in smalls for w in smalls if v != w]
    for v, w in small_pairs:
        for u in bigs:
            if u != v and u != w:
                values.append(element(u, v, w))
    ground = GroundSet.from_values(values)

    edges = []
    for v, w in small_pairs:
        us = [u for u in bigs if u != v and u != w]
        for u in us:
            ai = ground.index_of(element(u, v, w))
            for z in us:
                if z != u:
                    edges.append((ai, ground.index_of(element(z, w, v))))
    graph = RestrictionGraph(ground, ground, edges)

    s = len(smalls)
    m = len(bigs) - 2
    n65 = iroot(n**6, 5)  # floor(n^(6/5))
    numer_sum = iroot(32 * n**4, 5)  # floor(2 n^(4/5))
    denom_cnt = iroot(n**2, 5)  # floor(n^(2/5))
    predicted = {
        "G": Prediction("==", s * (s - 1) * m * (m - 1)),
        "prod": Prediction("<=", min(len(bigs) ** 2, n65)),
        "sum": Prediction("<=", numer_sum * denom_cnt),
    }
    if lam.denominator == 1 and lam != 0:
        a = abs(int(lam))
        numer_dil = iroot((1 + a) ** 5 * n**4, 5)  # floor((1+|lam|) n^(4/5))
        predicted[f"dilate@{lam}"] = Prediction("<=", numer_dil * denom_cnt)
    return ConstructionInstance("ars2", {"n": n, "lambda": lam}, graph, predicted)


def pencil(n: int, lam) -> ConstructionInstance:
    """Three-pencil construction: X = {2^i + lam*2^j}, Y = {-2^k - 2^l},
    edges (2^i + lam*2^j, -2^i - 2^j) for i, j in [n].

    Sums collapse to {(lam-1) 2^j}, dilates to {(1-lam) 2^i}, and ratios take
    at most 2n-1 values (one per j-i).  Edge collisions (only possible when
    lam = 1) are detected and the exact-count predictions downgraded.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    lam = Fraction(lam)
    if lam == 0:
        raise ValueError("lam must be nonzero")
    pow2 = [Fraction(2) ** i for i in range(1, n + 1)]
    xs = []
    ys = []
    for pi in pow2:
        for pj in pow2:
            xs.append(RadicalSum.from_fraction(pi + lam * pj))
            ys.append(RadicalSum.from_fraction(-pi - pj))
    left = GroundSet.from_values(xs)
    right = GroundSet.from_values(ys)
    edge_set: dict[tuple[int, int], None] = {}
    for pi in pow2:
        for pj in pow2:
            xi = left.index_of(RadicalSum.from_fraction(pi + lam * pj))
            yi = right.index_of(RadicalSum.from_fraction(-pi - pj))
            edge_set.setdefault((xi, yi), None)
    graph = RestrictionGraph(left, right, edge_set.keys())
    collisions = n * n - graph.size
    if collisions == 0:
        predicted = {
            "G": Prediction("==", n * n),
            "sum": Prediction("==", n),
            f"dilate@{lam}": Prediction("==", n),
            "ratio": Prediction("<=", 2 * n - 1),
        }
    else:
        predicted = {
            "G": Prediction("==", graph.size),
            "ratio": Prediction("<=", 2 * n - 1),
        }
    return ConstructionInstance(
        "pencil",
        {"n": n, "lambda": lam, "collisions": collisions},
        graph,
        predicted,
    )


def hyperbola_pair_families(n: int, alpha, beta) -> ConstructionInstance:
    """Intersections of {xy = c : c in C} with {(x+alpha)(y+beta) = d : d in D}.

    C = {1..n} and D = {M+1..M+M+n} with M = ceil(4 max(|alpha|,|beta|,1)^2 n)
    make every discriminant (c + alpha*beta - d)^2 - 4*alpha*beta*c positive,
    so each pair meets in two points and |G| = 2 n^2; the product set equals C
    and the shifted product set equals D.  M doubles on a discriminant
    failure; alpha = 0 degenerates every pair to a single point, which no
    reselection can repair.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    if beta == 0:
        raise ValueError("beta must be nonzero")
    if alpha == 0:
        raise DiscriminantFailure(
            "alpha = 0 collapses every hyperbola pair to a single intersection"
        )
    amax = max(abs(alpha), abs(beta), Fraction(1)) ** 2 * 4 * n
    m_base = -(-amax.numerator // amax.denominator)  # ceil
    cs = [Fraction(c) for c in range(1, n + 1)]
    for attempt in range(16):
        m_shift = m_base << attempt
        ds = [Fraction(m_shift + i) for i in range(1, n + 1)]
        if all((c + alpha * beta - d) ** 2 > 4 * alpha * beta * c for c in cs for d in ds):
            break
    else:
        raise DiscriminantFailure("no discriminant-positive shift found")

    points: list[tuple[RadicalSum, RadicalSum]] = []
    for c in cs:
        c_val = RadicalSum.from_fraction(c)
        for d in ds:
            disc = (c + alpha * beta - d) ** 2 - 4 * alpha * beta * c
            root = sqrt_fraction(disc)
            base = RadicalSum.from_fraction(d - c - alpha * beta)
            scale = Fraction(1) / (2 * beta)
            for x in ((base + root).scale(scale), (base - root).scale(scale)):
                y = c_val / x
                points.append((x, y))
    if len(set(points)) != len(points):
        raise DiscriminantFailure("intersection points are not pairwise distinct")
    left = GroundSet.from_values(x for x, _ in points)
    right = GroundSet.from_values(y for _, y in points)
    edges = [(left.index_of(x), right.index_of(y)) for x, y in points]
    graph = RestrictionGraph(left, right, edges)
    predicted = {
        "G": Prediction("==", 2 * n * n),
        "prod": Prediction("==", n),
        f"shifted@{alpha},{beta}": Prediction("==", n),
    }
    return ConstructionInstance(
        "hyperbola-pair",
        {"n": n, "alpha": alpha, "beta": beta, "M": m_shift},
        graph,
        predicted,
    )


CONSTRUCTION_NAMES = ("chang", "figure1", "ars2", "pencil", "hyperbola-pair")


def build(name: str, n: int, lam=None, alpha=None, beta=None) -> ConstructionInstance:
    """Dispatch by CLI-facing name."""
    if name == "chang":
        return chang(n)
    if name == "figure1":
        return figure1_lines_hyperbolas(n)
    if name == "ars2":
        return ars2(n, lam if lam is not None else 2)
    if name == "pencil":
        if lam is None:
            raise ValueError("pencil requires a lambda parameter")
        return pencil(n, lam)
    if name == "hyperbola-pair":
        if alpha is None or beta is None:
            raise ValueError("hyperbola-pair requires alpha and beta")
        return hyperbola_pair_families(n, alpha, beta)
    raise ValueError(f"unknown construction {name!r}")


# -- instance serialization ---------------------------------------------------------
#
# Graph text format followed by a META: line holding name, params and the
# predicted-statistics block as one JSON object.


def _param_to_json(v):
    if isinstance(v, Fraction):
        return str(v)
    return v


def _param_from_json(key: str, v):
    if key in ("lambda", "alpha", "beta") and isinstance(v, str):
        return Fraction(v)
    return v


def write_instance(instance: ConstructionInstance) -> str:
    meta = {
        "name": instance.name,
        "params": {k: _param_to_json(v) for k, v in instance.params.items()},
        "predicted": {k: [p.op, p.value] for k, p in instance.predicted.items()},
    }
    return (
        write_graph(instance.graph)
        + "META:\n"
        + json.dumps(meta, sort_keys=True)
        + "\n"
    )


def parse_instance(text: str) -> ConstructionInstance:
    lines = text.splitlines()
    try:
        im = lines.index("META:")
    except ValueError as exc:
        raise GraphFormatError("missing META: section") from exc
    graph = parse_graph("\n".join(lines[:im]) + "\n")
    try:
        meta = json.loads("\n".join(lines[im + 1 :]))
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"bad META JSON: {exc}") from exc
    params = {k: _param_from_json(k, v) for k, v in meta.get("params", {}).items()}
    predicted = {
        k: Prediction(op, value) for k, (op, value) in meta.get("predicted", {}).items()
    }
    return ConstructionInstance(meta.get("name", "?"), params, graph, predicted)
