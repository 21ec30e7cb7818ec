"""Command-line driver.

    splab generate <construction> --n N [--lambda L --alpha A --beta B] [--out F]
    splab audit [instance-file | --construction NAME --n N ...] [--format csv|json]
    splab degeneracy (--dilate-lambda L | --sp | --poly TEXT |
                      --shifted --alpha A --beta B) [--samples N] [--seed S]
    splab sweep --construction NAME --n N1,N2,... [--jobs J] [--format csv|json]
    splab plotdata --construction NAME --n N1,N2,...

Flags may also come from a key=value config file via --config; explicit
flags win.  SPLAB_JOBS sets the default parallelism.

Exit codes: 0 success, 2 usage/config error, 3 input parse error,
4 computation/generation error, 5 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional

from . import constructions
from .cas import expr as cas_expr
from .cas.eliminate import eliminate_dilate, eliminate_shifted_product, eliminate_sp
from .cas.expr import NonzeroWitness, degeneracy_test_numeric
from .cas.poly import MPoly, parse_poly
from .cas.ratfunc import RatFunc, degeneracy_test_rational
from .errors import (
    DiscriminantFailure,
    DivisionByZero,
    DomainError,
    GraphFormatError,
    InsufficientPrimes,
    LambdaOne,
    PolyParseError,
    PreconditionError,
    RadsumParseError,
    SizeGuardExceeded,
    UnsupportedDenominator,
    UnsupportedEvaluation,
)
from .harness import (
    CSV_HEADER,
    SweepConfig,
    audit_row,
    row_to_csv,
    rows_to_csv,
    rows_to_json,
    rows_to_plotdata,
    run_sweep,
)

_PARSE_ERRORS = (RadsumParseError, GraphFormatError, PolyParseError, json.JSONDecodeError)
_COMPUTE_ERRORS = (
    DiscriminantFailure,
    DivisionByZero,
    DomainError,
    InsufficientPrimes,
    LambdaOne,
    PreconditionError,
    SizeGuardExceeded,
    UnsupportedDenominator,
    UnsupportedEvaluation,
    ValueError,
    RuntimeError,
)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad rational {text!r}: {exc}") from exc


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from exc


def _load_config(path: str) -> dict[str, str]:
    with open(path, encoding="utf-8") as fh:
        out = {}
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise GraphFormatError(f"{path}:{lineno}: expected key=value")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def _write_out(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splab",
        description="sum-product lab: constructions, audits, degeneracy certificates",
    )
    parser.add_argument("--config", help="key=value config file mirroring the flags")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=_int_list, help="comma-separated n values")
    common.add_argument("--lambda", dest="lam", type=_fraction, help='rational "p/q"')
    common.add_argument("--alpha", type=_fraction)
    common.add_argument("--beta", type=_fraction)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument(
        "--jobs", type=int, default=int(os.environ.get("SPLAB_JOBS", "1"))
    )
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")

    gen = sub.add_parser("generate", parents=[common], help="emit an instance file")
    gen.add_argument("construction", choices=constructions.CONSTRUCTION_NAMES)

    aud = sub.add_parser("audit", parents=[common], help="audit an instance")
    aud.add_argument("instance", nargs="?", help="instance file from `generate`")
    aud.add_argument("--construction", choices=constructions.CONSTRUCTION_NAMES)
    aud.add_argument(
        "--no-check",
        action="store_true",
        help="skip re-verifying the predicted statistics",
    )

    deg = sub.add_parser("degeneracy", parents=[common], help="emit a certificate")
    deg.add_argument("--dilate-lambda", type=_fraction, dest="dilate_lam")
    deg.add_argument("--sp", action="store_true", help="the sum/product surface")
    deg.add_argument("--poly", help="polynomial f(X,Y) text")
    deg.add_argument(
        "--shifted", action="store_true", help="shifted-product branch (numeric path)"
    )
    deg.add_argument("--samples", type=int, default=64)
    deg.add_argument("--precision-bits", type=int, default=1024)

    swe = sub.add_parser("sweep", parents=[common], help="audit a parameter grid + fit")
    swe.add_argument("--construction", choices=constructions.CONSTRUCTION_NAMES)
    plo = sub.add_parser("plotdata", parents=[common], help="log-log columns")
    plo.add_argument("--construction", choices=constructions.CONSTRUCTION_NAMES)
    return parser


def _single_n(args) -> int:
    if not args.n or len(args.n) != 1:
        raise ValueError("this command needs exactly one --n value")
    return args.n[0]


def _cmd_generate(args) -> int:
    instance = constructions.build(
        args.construction, _single_n(args), lam=args.lam, alpha=args.alpha, beta=args.beta
    )
    _write_out(constructions.write_instance(instance), args.out)
    return 0


def _cmd_audit(args) -> int:
    if args.instance:
        with open(args.instance, encoding="utf-8") as fh:
            instance = constructions.parse_instance(fh.read())
    elif args.construction:
        instance = constructions.build(
            args.construction, _single_n(args), lam=args.lam,
            alpha=args.alpha, beta=args.beta,
        )
    else:
        raise ValueError("audit needs an instance file or --construction NAME")
    row = audit_row(
        instance,
        lam=args.lam,
        alpha=args.alpha,
        beta=args.beta,
        check_predicted=not args.no_check,
    )
    if args.fmt == "json":
        _write_out(rows_to_json([row]), args.out)
    else:
        _write_out(CSV_HEADER + "\n" + row_to_csv(row) + "\n", args.out)
    return 0


def _cmd_degeneracy(args) -> int:
    chosen = [
        args.dilate_lam is not None,
        args.sp,
        args.poly is not None,
        args.shifted,
    ]
    if sum(chosen) != 1:
        raise ValueError("pick exactly one of --dilate-lambda, --sp, --poly, --shifted")
    if args.shifted:
        if args.alpha is None or args.beta is None:
            raise ValueError("--shifted needs --alpha and --beta")
        branch = eliminate_shifted_product(args.alpha, args.beta)
        result = degeneracy_test_numeric(
            branch, samples=args.samples, precision_bits=args.precision_bits,
            seed=args.seed,
        )
        cert: dict = {
            "input": f"shifted-product branch alpha={args.alpha} beta={args.beta}: "
            + cas_expr.to_text(branch),
            "T": cas_expr.to_text(cas_expr.test_expression(branch)),
        }
        if isinstance(result, NonzeroWitness):
            cert["verdict"] = "nonzero"
            cert["witness"] = [str(result.point[0]), str(result.point[1])]
            cert["witness_enclosure"] = [
                str(result.enclosure.lo),
                str(result.enclosure.hi),
            ]
        else:
            cert["verdict"] = "probably-zero"
            cert["samples"] = result.samples
        _write_out(json.dumps(cert, sort_keys=True, indent=2) + "\n", args.out)
        return 0

    prefer = ()
    if args.dilate_lam is not None:
        f = eliminate_dilate(args.dilate_lam).f
        label = f"dilate lambda={args.dilate_lam}"
        # (1, 1) is a valid witness for every lambda not in {-1, 1}.
        prefer = ((Fraction(1), Fraction(1)),)
    elif args.sp:
        fpoly = eliminate_sp()
        f = RatFunc(MPoly({e: c for e, c in fpoly.terms.items() if e[2] == 0}))
        label = "sum-product surface X(Y-X)"
    else:
        f = RatFunc(parse_poly(args.poly))
        label = args.poly
    report = degeneracy_test_rational(f, prefer=prefer)
    cert = {
        "input": label,
        "T": report.T.to_text(),
        "verdict": "identically-zero" if report.identically_zero else "nonzero",
    }
    if report.witness is not None:
        cert["witness"] = [str(report.witness[0]), str(report.witness[1])]
        cert["witness_enclosure"] = [
            str(report.witness_value),
            str(report.witness_value),
        ]
    _write_out(json.dumps(cert, sort_keys=True, indent=2) + "\n", args.out)
    return 0


def _sweep_config(args) -> SweepConfig:
    if not args.construction:
        raise ValueError("--construction is required")
    if not args.n:
        raise ValueError("--n with at least one value is required")
    return SweepConfig(
        construction=args.construction,
        n_values=tuple(args.n),
        lam=args.lam,
        alpha=args.alpha,
        beta=args.beta,
        seed=args.seed,
        jobs=max(1, args.jobs),
        out=args.out,
        fmt=args.fmt,
    )


def _cmd_sweep(args) -> int:
    cfg = _sweep_config(args)
    rows, fit = run_sweep(cfg)
    if cfg.fmt == "json":
        _write_out(rows_to_json(rows, fit), args.out)
    else:
        _write_out(rows_to_csv(rows, fit), args.out)
    return 0


def _cmd_plotdata(args) -> int:
    cfg = _sweep_config(args)
    rows, _ = run_sweep(cfg)
    _write_out(rows_to_plotdata(rows), args.out)
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "audit": _cmd_audit,
    "degeneracy": _cmd_degeneracy,
    "sweep": _cmd_sweep,
    "plotdata": _cmd_plotdata,
}


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    # Two-pass parse so --config supplies defaults that explicit flags override.
    if "--config" in argv:
        idx = argv.index("--config")
        try:
            cfg_path = argv[idx + 1]
        except IndexError:
            parser.error("--config needs a path")
        try:
            raw = _load_config(cfg_path)
        except OSError as exc:
            print(f"splab: {exc}", file=sys.stderr)
            return 5
        except GraphFormatError as exc:
            print(f"splab: {exc}", file=sys.stderr)
            return 3
        for key, value in raw.items():
            flag = f"--{key}"
            if flag not in argv and key != "command":
                argv.extend([flag, value])
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except _PARSE_ERRORS as exc:
        print(f"splab: parse error: {exc}", file=sys.stderr)
        return 3
    except _COMPUTE_ERRORS as exc:
        print(f"splab: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"splab: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
