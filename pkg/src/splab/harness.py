"""Sweep driver: generate constructions over a parameter grid, audit each
grid point, fit the empirical exponent, and emit CSV/JSON rows.

Outputs are deterministic for a fixed config and seed: grid points run in
grid order (possibly concurrently, results reassembled in order), rationals
print as p/q, floats under a fixed format.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import constructions
from .constructions import ConstructionInstance, verify_predicted
from .es_counter import AuditRecord, bound_audit

CSV_HEADER = (
    "construction,n,lambda,alpha,beta,sizeA,sizeB,sizeG,sizeSum,"
    "sizeDilate,sizeProd,sizeRatio,ratioTrivial,ratio611,ratioSp34,rszRhsRatio"
)


@dataclass(frozen=True)
class SweepConfig:
    construction: str
    n_values: tuple[int, ...]
    lam: Optional[Fraction] = None
    alpha: Optional[Fraction] = None
    beta: Optional[Fraction] = None
    audits: tuple[str, ...] = ("bounds",)
    seed: int = 0
    jobs: int = 1
    out: Optional[str] = None
    fmt: str = "csv"

    def __post_init__(self):
        if self.construction not in constructions.CONSTRUCTION_NAMES:
            raise ValueError(f"unknown construction {self.construction!r}")
        if not self.n_values:
            raise ValueError("n_values must be nonempty")
        if list(self.n_values) != sorted(set(self.n_values)):
            raise ValueError("n_values must be strictly ascending")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if self.fmt not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        for a in self.audits:
            if a not in ("bounds", "predicted"):
                raise ValueError(f"unknown audit {a!r}")


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    r2: float
    points: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class SweepRow:
    construction: str
    n: int
    lam: Optional[Fraction]
    alpha: Optional[Fraction]
    beta: Optional[Fraction]
    record: AuditRecord


def fit_loglog(points) -> ExponentFit:
    """Ordinary least squares on (log10 x, log10 y) pairs; needs >= 3 points."""
    pts = tuple((float(x), float(y)) for x, y in points)
    if len(pts) < 3:
        raise ValueError("need at least 3 points to fit")
    n = len(pts)
    sx = sum(p[0] for p in pts)
    sy = sum(p[1] for p in pts)
    sxx = sum(p[0] * p[0] for p in pts)
    sxy = sum(p[0] * p[1] for p in pts)
    denom = n * sxx - sx * sx
    if denom == 0:
        raise ValueError("degenerate fit: all x values equal")
    slope = (n * sxy - sx * sy) / denom
    intercept = (sy - slope * sx) / n
    ss_res = sum((y - (slope * x + intercept)) ** 2 for x, y in pts)
    ss_tot = sum((y - sy / n) ** 2 for _, y in pts)
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return ExponentFit(slope, intercept, r2, pts)


def effective_lambda(
    instance: ConstructionInstance, lam: Optional[Fraction] = None
) -> Fraction:
    """Dilate parameter for audits: explicit, else the instance's own, else
    -1 (the difference set)."""
    if lam is not None:
        return Fraction(lam)
    own = instance.params.get("lambda")
    return Fraction(own) if own is not None else Fraction(-1)


def audit_instance(
    instance: ConstructionInstance,
    lam: Optional[Fraction] = None,
    check_predicted: bool = True,
) -> AuditRecord:
    if check_predicted:
        failures = verify_predicted(instance)
        if failures:
            raise RuntimeError("; ".join(failures))
    return bound_audit(instance, effective_lambda(instance, lam))


def audit_row(
    instance: ConstructionInstance,
    lam: Optional[Fraction] = None,
    alpha: Optional[Fraction] = None,
    beta: Optional[Fraction] = None,
    check_predicted: bool = True,
) -> SweepRow:
    lam_eff = effective_lambda(instance, lam)
    record = audit_instance(instance, lam_eff, check_predicted)
    return SweepRow(
        instance.name,
        int(instance.params.get("n", 0)),
        lam_eff,
        alpha if alpha is not None else instance.params.get("alpha"),
        beta if beta is not None else instance.params.get("beta"),
        record,
    )


def _run_point(cfg: SweepConfig, n: int) -> SweepRow:
    instance = constructions.build(
        cfg.construction, n, lam=cfg.lam, alpha=cfg.alpha, beta=cfg.beta
    )
    return audit_row(
        instance,
        lam=cfg.lam,
        alpha=cfg.alpha,
        beta=cfg.beta,
        check_predicted="predicted" in cfg.audits,
    )


def run_sweep(cfg: SweepConfig) -> tuple[list[SweepRow], Optional[ExponentFit]]:
    """One AuditRecord per grid point, plus a log-log fit over >= 3 points."""
    if cfg.jobs == 1:
        rows = [_run_point(cfg, n) for n in cfg.n_values]
    else:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(lambda n: _run_point(cfg, n), cfg.n_values))
    fit = None
    if len(rows) >= 3:
        pts = [
            (
                math.log10(r.record.size_g),
                math.log10(max(r.record.size_sum, r.record.size_dilate, r.record.size_prod)),
            )
            for r in rows
        ]
        fit = fit_loglog(pts)
    return rows, fit


# -- emission -----------------------------------------------------------------


def _fmt_float(v: float) -> str:
    return f"{v:.12g}"


def _fmt_frac(v: Optional[Fraction]) -> str:
    return "" if v is None else str(v)


def row_to_csv(row: SweepRow) -> str:
    r = row.record
    fields = [
        row.construction,
        str(row.n),
        _fmt_frac(row.lam),
        _fmt_frac(row.alpha),
        _fmt_frac(row.beta),
        str(r.size_a),
        str(r.size_b),
        str(r.size_g),
        str(r.size_sum),
        str(r.size_dilate),
        str(r.size_prod),
        "" if r.size_ratio is None else str(r.size_ratio),
        _fmt_float(r.ratio_trivial),
        _fmt_float(r.ratio611),
        _fmt_float(r.ratio_sp34),
        _fmt_float(r.rsz_ratio),
    ]
    return ",".join(fields)


def rows_to_csv(rows: list[SweepRow], fit: Optional[ExponentFit] = None) -> str:
    lines = [CSV_HEADER]
    lines.extend(row_to_csv(r) for r in rows)
    if fit is not None:
        lines.append(
            f"# fit slope={_fmt_float(fit.slope)} "
            f"intercept={_fmt_float(fit.intercept)} r2={_fmt_float(fit.r2)}"
        )
    return "\n".join(lines) + "\n"


def row_to_dict(row: SweepRow) -> dict:
    r = row.record
    return {
        "construction": row.construction,
        "n": row.n,
        "lambda": _fmt_frac(row.lam) or None,
        "alpha": _fmt_frac(row.alpha) or None,
        "beta": _fmt_frac(row.beta) or None,
        "sizeA": r.size_a,
        "sizeB": r.size_b,
        "sizeG": r.size_g,
        "sizeSum": r.size_sum,
        "sizeDilate": r.size_dilate,
        "sizeProd": r.size_prod,
        "sizeRatio": r.size_ratio,
        "ratioTrivial": r.ratio_trivial,
        "ratio611": r.ratio611,
        "ratioSp34": r.ratio_sp34,
        "arsRhs": r.ars_rhs,
        "rszRhs": r.rsz_rhs,
        "rszRhsRatio": r.rsz_ratio,
        "eps15": r.eps15,
        "eps15Prime": r.eps15_prime,
    }


def rows_to_json(rows: list[SweepRow], fit: Optional[ExponentFit] = None) -> str:
    payload: dict = {"records": [row_to_dict(r) for r in rows]}
    if fit is not None:
        payload["fit"] = {
            "slope": fit.slope,
            "intercept": fit.intercept,
            "r2": fit.r2,
            "points": [list(p) for p in fit.points],
        }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def rows_to_plotdata(rows: list[SweepRow]) -> str:
    """Two whitespace-separated columns: log10 |G|, log10 max set size."""
    lines = []
    for r in rows:
        x = math.log10(r.record.size_g)
        y = math.log10(
            max(r.record.size_sum, r.record.size_dilate, r.record.size_prod)
        )
        lines.append(f"{_fmt_float(x)} {_fmt_float(y)}")
    return "\n".join(lines) + "\n"
