"""Command-line front end.

Subcommands: ``exact``, ``mc``, ``verify-tables``, ``sweep`` and ``selftest``.
Any long flag can also come from a ``--config`` file of ``key = value``
lines (``#`` starts a comment); flags given on the command line win.

Exit status: 0 on success, 1 when a reference cell or self-check fails,
2 on an invalid configuration.

Output columns (CSV header and JSON keys) are fixed per command:

* exact, sweep:   family, d, param, kind, n, functional, value, abs_err
* mc, sweep --method mc:
                  family, d, param, kind, n, functional, value, stderr,
                  samples, seed, exact, z
* verify-tables:  table, cell, n, computed, expected, rel_error, status
* selftest:       check, status, detail, seconds

``param`` is beta, or alpha for the half-sphere family, and empty for the sphere.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Iterable, Optional, Sequence

import numpy as np

from .betadist import Family, Model
from .expectations import (
    FunctionalKind,
    FunctionalSpec,
    ParameterRangeError,
    PolytopeKind,
    evaluate,
    halfsphere_expected_facets,
)
from .mc import estimate, zscore
from .selftest import run_selftest
from .tables import TABLE_TITLES, TABLES, check_cell, sphere3_law_cells

__all__ = ["main", "build_parser", "parse_n_range", "parse_grid", "read_config"]

EXACT_FIELDS = ["family", "d", "param", "kind", "n", "functional", "value", "abs_err"]
MC_FIELDS = ["family", "d", "param", "kind", "n", "functional", "value", "stderr", "samples", "seed", "exact", "z"]
TABLE_FIELDS = ["table", "cell", "n", "computed", "expected", "rel_error", "status"]
SELFTEST_FIELDS = ["check", "status", "detail", "seconds"]

_FAMILIES = ["beta", "betaprime", "sphere", "halfsphere"]
_FUNCTIONALS = [k.value for k in FunctionalKind]


class ConfigError(ValueError):
    pass


# ------------------------------------------------------------- parsing helpers

def parse_n_range(text: str) -> list[int]:
    """'7', '4..10', '4..20..2' or '4,6,9'."""
    text = text.strip()
    try:
        if ".." in text:
            parts = [int(p) for p in text.split("..")]
            if len(parts) == 2:
                lo, hi, step = parts[0], parts[1], 1
            elif len(parts) == 3:
                lo, hi, step = parts
            else:
                raise ValueError
            if step < 1 or hi < lo:
                raise ValueError
            return list(range(lo, hi + 1, step))
        return [int(p) for p in text.split(",")]
    except ValueError:
        raise ConfigError(f"bad n range {text!r}; use N, LO..HI, LO..HI..STEP or a comma list") from None


def parse_grid(text: str) -> list[float]:
    """'0.5', 'a,b,c' or 'lo:hi:count' (inclusive, evenly spaced)."""
    text = text.strip()
    try:
        if ":" in text:
            lo, hi, cnt = text.split(":")
            return [float(v) for v in np.linspace(float(lo), float(hi), int(cnt))]
        return [float(p) for p in text.split(",")]
    except ValueError:
        raise ConfigError(f"bad parameter grid {text!r}; use a comma list or lo:hi:count") from None


def read_config(path: str) -> list[str]:
    """Turn a key=value file into long-flag argv tokens."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc.strerror}") from None
    argv: list[str] = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("_", "-")
        if key == "command":
            argv.insert(0, value)
        else:
            argv += [f"--{key}", value]
    return argv


def _merge_config(argv: list[str]) -> list[str]:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    if not known.config:
        return argv
    from_file = read_config(known.config)
    commands = {"exact", "mc", "verify-tables", "sweep", "selftest"}
    cmd_cli = next((a for a in rest if a in commands), None)
    cmd_file = from_file[0] if from_file and from_file[0] in commands else None
    flags_file = from_file[1:] if cmd_file else from_file
    cmd = cmd_cli or cmd_file
    if cmd is None:
        return rest
    rest = [a for a in rest if a != cmd]
    return [cmd] + flags_file + rest


# ------------------------------------------------------------- parser

def _model_flags(p: argparse.ArgumentParser, n_help: str) -> None:
    p.add_argument("--family", choices=_FAMILIES, default="beta", help="point distribution (default beta)")
    p.add_argument("--d", type=int, default=2, help="dimension (default 2)")
    p.add_argument("--beta", type=float, default=0.0, help="beta parameter (default 0)")
    p.add_argument("--alpha", type=float, default=0.0, help="half-sphere density exponent (default 0)")
    p.add_argument("--kind", choices=["P", "S", "Q"], default="P", help="plain, symmetric or origin-adjoined hull")
    p.add_argument("--n", default=None, help=n_help)
    p.add_argument("--functional", choices=_FUNCTIONALS, default="volume")
    p.add_argument("--k", type=int, default=None, help="order of the intrinsic volume")
    p.add_argument("--a", type=float, default=0.0, help="distance exponent of the T-functional")
    p.add_argument("--b", type=float, default=0.0, help="facet-volume exponent of the T-functional")
    p.add_argument("--tol", type=float, default=None, help="relative quadrature tolerance")


def _output_flags(p: argparse.ArgumentParser, default: str = "text") -> None:
    p.add_argument("--format", choices=["text", "csv", "json"], default=default)
    p.add_argument("--out", default=None, help="write to this path instead of stdout")


def _mc_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0, help="64-bit unsigned master seed")
    p.add_argument("--m-dirs", type=int, default=8, help="directions or frames per sample")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="betapoly", description="Expected functionals of random beta and beta-prime polytopes."
    )
    parser.add_argument("--config", help="key=value file supplying any long flag")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="evaluate an expectation by quadrature")
    _model_flags(p, "number of points")
    _output_flags(p)

    p = sub.add_parser("mc", help="Monte Carlo estimate with z-score against the exact value")
    _model_flags(p, "number of points")
    _mc_flags(p)
    _output_flags(p)

    p = sub.add_parser("verify-tables", help="reproduce the reference tables from quadrature")
    p.add_argument("--tables", default="1,2,3,4,5,6", help="comma list of tables")
    p.add_argument("--rtol", type=float, default=1e-9)
    p.add_argument("--laws-n-max", type=int, default=50, help="largest n for the sphere closed-form laws (0 skips)")
    _output_flags(p)

    p = sub.add_parser("sweep", help="tabulate a functional over an n range or a beta grid")
    _model_flags(p, "n range: N, LO..HI, LO..HI..STEP or comma list")
    p.add_argument("--beta-grid", default=None, help="comma list or lo:hi:count; overrides --beta")
    p.add_argument("--method", choices=["exact", "mc"], default="exact")
    _mc_flags(p)
    _output_flags(p, default="csv")

    p = sub.add_parser("selftest", help="run the invariant battery")
    _output_flags(p)
    return parser


# ------------------------------------------------------------- model building

def _kind(name: str) -> PolytopeKind:
    return PolytopeKind[name]


def _functional(args) -> FunctionalSpec:
    fk = FunctionalKind(args.functional)
    k = args.k if fk is FunctionalKind.INTRINSIC_VOLUME else None
    if fk is FunctionalKind.INTRINSIC_VOLUME and k is None:
        raise ConfigError("--functional intrinsic needs --k")
    if fk is FunctionalKind.T_FUNCTIONAL:
        return FunctionalSpec(fk, a=args.a, b=args.b)
    return FunctionalSpec(fk, k=k)


def _model(family: str, d: int, beta: float) -> Model:
    if family == "sphere":
        return Model(Family.SPHERE, d)
    return Model(Family.BETA if family == "beta" else Family.BETA_PRIME, d, beta)


def _param(args, beta: float):
    if args.family == "sphere":
        return ""
    return args.alpha if args.family == "halfsphere" else beta


def _halfsphere_model(args) -> Model:
    """The beta-prime model whose P-polytope facet count equals the half-sphere one."""
    return Model(Family.BETA_PRIME, args.d, (args.alpha + args.d + 1) / 2)


def _check_halfsphere(args, spec: FunctionalSpec) -> None:
    if spec.kind is not FunctionalKind.FACET_COUNT or args.kind != "P":
        raise ConfigError("the half-sphere family supports --functional facets with --kind P only")


def _exact_row(args, beta: float, n: int, spec: FunctionalSpec) -> dict:
    if args.family == "halfsphere":
        _check_halfsphere(args, spec)
        value, err = halfsphere_expected_facets(n, args.d, args.alpha, args.tol), 0.0
    else:
        r = evaluate(spec, _model(args.family, args.d, beta), _kind(args.kind), n, args.tol)
        value, err = r.value, r.abs_error_estimate
    return {
        "family": args.family, "d": args.d, "param": _param(args, beta), "kind": args.kind, "n": n,
        "functional": spec.label(), "value": value, "abs_err": err,
    }


def _mc_row(args, beta: float, n: int, spec: FunctionalSpec) -> dict:
    if args.family == "halfsphere":
        _check_halfsphere(args, spec)
        model = _halfsphere_model(args)
    else:
        model = _model(args.family, args.d, beta)
    est = estimate(spec, model, _kind(args.kind), n, args.samples, args.seed, m_dirs=args.m_dirs)
    try:
        exact = _exact_row(args, beta, n, spec)["value"]
    except (ParameterRangeError, ValueError, ArithmeticError):
        exact = math.nan
    if math.isnan(exact):
        z = math.nan
    elif est.stderr > 0:
        z = zscore(exact, est)
    else:
        z = 0.0 if est.mean == exact else math.copysign(math.inf, est.mean - exact)
    return {
        "family": args.family, "d": args.d, "param": _param(args, beta), "kind": args.kind, "n": n,
        "functional": spec.label(), "value": est.mean, "stderr": est.stderr, "samples": est.samples,
        "seed": est.seed, "exact": exact, "z": z,
    }


def _single_n(args) -> int:
    if args.n is None:
        raise ConfigError("--n is required")
    try:
        return int(args.n)
    except ValueError:
        raise ConfigError(f"--n must be an integer here, got {args.n!r}") from None


# ------------------------------------------------------------- output

def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _emit(rows: Sequence[dict], fields: list[str], fmt: str, out: Optional[str], text_lines: Iterable[str]) -> None:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _fmt(r[k]) for k in fields})
        body = buf.getvalue()
    elif fmt == "json":
        clean = [{k: (None if isinstance(r[k], float) and not math.isfinite(r[k]) else r[k]) for k in fields} for r in rows]
        body = json.dumps(clean, indent=2) + "\n"
    else:
        body = "".join(line + "\n" for line in text_lines)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


# ------------------------------------------------------------- commands

def _cmd_exact(args) -> int:
    row = _exact_row(args, args.beta, _single_n(args), _functional(args))
    text = [f"{row['functional']} {args.family} d={args.d} {args.kind} n={row['n']}: "
            f"{row['value']!r}  (quadrature error estimate {row['abs_err']:.2e})"]
    _emit([row], EXACT_FIELDS, args.format, args.out, text)
    return 0


def _cmd_mc(args) -> int:
    row = _mc_row(args, args.beta, _single_n(args), _functional(args))
    exact = "n/a" if math.isnan(row["exact"]) else repr(row["exact"])
    text = [
        f"{row['functional']} {args.family} d={args.d} {args.kind} n={row['n']}: "
        f"{row['value']!r} +- {row['stderr']:.3g} ({row['samples']} samples, seed {row['seed']})",
        f"exact {exact}, z = {row['z']:+.3f}",
    ]
    _emit([row], MC_FIELDS, args.format, args.out, text)
    return 0


def _cmd_verify(args) -> int:
    try:
        wanted = [int(t) for t in args.tables.split(",")]
    except ValueError:
        raise ConfigError(f"--tables must be a comma list of integers, got {args.tables!r}") from None
    unknown = [t for t in wanted if t not in TABLES]
    if unknown:
        raise ConfigError(f"unknown tables {unknown}; available {sorted(TABLES)}")
    rows, text = [], []
    for t in wanted:
        text.append(f"# table {t}: {TABLE_TITLES[t]}")
        for cell in TABLES[t]:
            r = check_cell(cell, args.rtol)
            status = "PASS" if r.passed else "FAIL"
            rows.append({"table": t, "cell": cell.name, "n": cell.n, "computed": r.computed,
                         "expected": r.expected, "rel_error": r.rel_error, "status": status})
            text.append(f"{status} {cell.name}: computed {r.computed!r} expected {r.expected!r} (rel {r.rel_error:.1e})")
    if 4 in wanted and args.laws_n_max >= 4:
        text.append(f"# sphere closed-form laws, 4 <= n <= {args.laws_n_max}")
        for label, n, law, thunk in sphere3_law_cells(args.laws_n_max):
            got = thunk().value
            rel = abs(got - law) / abs(law)
            status = "PASS" if rel <= args.rtol else "FAIL"
            name = f"law[{label}, n={n}]"
            rows.append({"table": 4, "cell": name, "n": n, "computed": got, "expected": law,
                         "rel_error": rel, "status": status})
            if status == "FAIL":
                text.append(f"FAIL {name}: computed {got!r} expected {law!r} (rel {rel:.1e})")
        text.append("laws done")
    failed = sum(r["status"] == "FAIL" for r in rows)
    text.append(f"{len(rows) - failed}/{len(rows)} cells pass")
    _emit(rows, TABLE_FIELDS, args.format, args.out, text)
    return 1 if failed else 0


def _cmd_sweep(args) -> int:
    if args.n is None:
        raise ConfigError("--n is required")
    ns = parse_n_range(args.n)
    betas = parse_grid(args.beta_grid) if args.beta_grid else [args.beta]
    if args.family == "halfsphere" and args.beta_grid:
        raise ConfigError("the half-sphere family is parametrised by --alpha, not a beta grid")
    spec = _functional(args)
    make = _mc_row if args.method == "mc" else _exact_row
    fields = MC_FIELDS if args.method == "mc" else EXACT_FIELDS
    rows = [make(args, b, n, spec) for b in betas for n in ns]
    text = [" ".join(f"{k}={_fmt(r[k])}" for k in fields) for r in rows]
    _emit(rows, fields, args.format, args.out, text)
    return 0


def _cmd_selftest(args) -> int:
    checks = run_selftest()
    rows = [{"check": c.name, "status": "PASS" if c.passed else "FAIL", "detail": c.detail,
             "seconds": round(c.seconds, 3)} for c in checks]
    text = [f"{r['status']} {r['check']}: {r['detail']} ({r['seconds']:.2f}s)" for r in rows]
    _emit(rows, SELFTEST_FIELDS, args.format, args.out, text)
    return 0 if all(c.passed for c in checks) else 1


_COMMANDS = {
    "exact": _cmd_exact,
    "mc": _cmd_mc,
    "verify-tables": _cmd_verify,
    "sweep": _cmd_sweep,
    "selftest": _cmd_selftest,
}


def _attach_negative_values(argv: list[str]) -> list[str]:
    # argparse takes "-0.5:3:8" or "-1,2" for an option; bind such tokens to the flag before them
    out: list[str] = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and len(tok) > 1 and tok[0] == "-" \
                and (tok[1].isdigit() or tok[1] == "."):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = _attach_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        argv = _merge_config(argv)
    except ConfigError as exc:
        print(f"betapoly: error: {exc}", file=sys.stderr)
        return 2
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 2
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ParameterRangeError, ValueError) as exc:
        print(f"betapoly: error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"betapoly: numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
