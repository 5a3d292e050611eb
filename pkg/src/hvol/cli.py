"""Command-line front end.

Subcommands: ``compute`` (one valuation report), ``minimize`` (search for
the minimizing weight), ``table`` (reproduce the A-D-E minimizer tables
against the embedded references), ``oracle`` (lattice-count convergence
study), ``verify`` (inequality property suites) and ``fujita`` (cone
interpolation analysis).

stdout carries machine-parseable JSON or CSV only; diagnostics go to
stderr.  Exit codes: 0 success, 2 malformed model file or usage, 3 domain
error (for example a non-klt weight), 4 minimization did not converge,
5 a table row deviates from the embedded reference, 1 other failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

from . import fujita, inequalities, lattice, modelio, optimize, tables
from .core import normalized_volume
from .exact import Scalar, format_scalar, parse_rational
from .models import (
    CapacityError,
    DomainError,
    HvolError,
    InvalidModelError,
    UnsupportedModelError,
)

_EXIT_SCHEMA = 2
_EXIT_DOMAIN = 3
_EXIT_NOT_CONVERGED = 4
_EXIT_TABLE_DEVIATION = 5

_TABLE_VALUE_RTOL = 1e-7
_TABLE_WEIGHT_ATOL = 1e-6


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except InvalidModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_SCHEMA
    except (DomainError, UnsupportedModelError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_DOMAIN
    except HvolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hvol",
        description="normalized volumes of monomial valuations on model singularities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="evaluate one (model, weight) pair")
    p.add_argument("model", help="model JSON file")
    p.add_argument("--weight", required=True, help='comma-separated rationals, e.g. "1,1,2/3"')
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(handler=_cmd_compute)

    p = sub.add_parser("minimize", help="minimize the normalized volume over weights")
    p.add_argument("model", help="model JSON file")
    p.add_argument("--starts", type=int, default=12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=1e-7)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(handler=_cmd_minimize)

    p = sub.add_parser("table", help="reproduce a family minimizer table")
    p.add_argument("--family", required=True, choices=tables.FAMILIES)
    p.add_argument("--n-range", help="inclusive range a:b")
    p.add_argument("--k-range", help="inclusive range a:b (A and D families)")
    p.add_argument("--starts", type=int, default=12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--emit-models", metavar="DIR", help="also write the model files")
    p.add_argument("--format", choices=("csv", "json", "text"), default="csv")
    p.set_defaults(handler=_cmd_table)

    p = sub.add_parser("oracle", help="lattice colength convergence study")
    p.add_argument("model", help="model JSON file")
    p.add_argument("--weight", required=True)
    p.add_argument("--radii", help='comma-separated radii, e.g. "10,100"; default schedule otherwise')
    p.add_argument("--format", choices=("csv", "json", "text"), default="csv")
    p.set_defaults(handler=_cmd_oracle)

    p = sub.add_parser("verify", help="run the inequality property suites")
    p.add_argument("--suite", choices=("all", "thm13", "skew2", "dfem", "proper"), default="all")
    p.add_argument("--samples", type=int, default=10**4)
    p.add_argument("--seed", type=int, default=20260810)
    p.add_argument("--dims", default="2:5", help="inclusive dimension range a:b")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("fujita", help="cone interpolation analysis")
    p.add_argument("cone", help="cone model JSON file")
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(handler=_cmd_fujita)

    return parser


# ---------------------------------------------------------------------------
# helpers


def _parse_weight(text: str) -> tuple[Scalar, ...]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise DomainError("empty weight")
    out = []
    for part in parts:
        if "." in part or "e" in part or "E" in part:
            out.append(float(part))
        else:
            try:
                out.append(parse_rational(part))
            except ValueError as exc:
                raise DomainError(str(exc)) from exc
    return tuple(out)


def _scalar_json(value):
    if value is None:
        return "unavailable"
    return format_scalar(value)


def _weight_json(weight):
    return [_scalar_json(v) for v in weight]


def _print_payload(payload, fmt: str):
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for key, value in payload.items():
            print(f"{key}: {value}")


def _parse_range(text, default):
    if text is None:
        return default
    try:
        a, b = (int(v) for v in text.split(":"))
    except ValueError as exc:
        raise DomainError(f"range must look like a:b, got {text!r}") from exc
    if b < a:
        raise DomainError(f"empty range {text!r}")
    return range(a, b + 1)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_compute(args) -> int:
    model = modelio.load_model(args.model)
    if isinstance(model, fujita.ConeModel):
        raise DomainError("compute expects a singularity model, not a cone file")
    weight = _parse_weight(args.weight)
    report = normalized_volume(model, weight)
    payload = {
        "log_discrepancy": _scalar_json(report.log_discrepancy),
        "volume": _scalar_json(report.volume),
        "normalized_volume": _scalar_json(report.normalized_volume),
        "ideal_value": _scalar_json(report.ideal_value),
        "skewness": _scalar_json(report.skewness),
        "dim": model.dim,
    }
    _print_payload(payload, args.format)
    return 0


def _cmd_minimize(args) -> int:
    model = modelio.load_model(args.model)
    if isinstance(model, fujita.ConeModel):
        raise DomainError("minimize expects a singularity model, not a cone file")
    result = optimize.minimize_hvol(
        model, starts=args.starts, seed=args.seed, tolerance=args.tolerance
    )
    payload = _minimization_payload(result)
    _print_payload(payload, args.format)
    return 0 if result.status == "converged" else _EXIT_NOT_CONVERGED


def _minimization_payload(result) -> dict:
    return {
        "weight": _weight_json(result.weight),
        "value": _scalar_json(result.value),
        "active_monomials": [list(e) for e in result.active_monomials],
        "status": result.status,
        "starts_used": result.starts_used,
        "first_order_residual": float(f"{result.first_order_residual:.6g}"),
    }


def _cmd_table(args) -> int:
    family = args.family
    if family == "A":
        n_values = _parse_range(args.n_range, range(2, 7))
        k_values = _parse_range(args.k_range, range(1, 7))
    elif family == "D":
        n_values = _parse_range(args.n_range, range(1, 6))
        k_values = _parse_range(args.k_range, range(3, 7))
    else:
        n_values = _parse_range(args.n_range, range(1, 6))
        if args.k_range is not None:
            raise DomainError("E-family tables take no k range")
        k_values = None

    rows = []
    all_match = True
    for entry in tables.table_rows(family, n_values, k_values):
        model = tables.reference_model(entry.family, entry.n, entry.k)
        result = optimize.minimize_hvol(model, starts=args.starts, seed=args.seed)
        matches = _matches_reference(result, entry)
        all_match = all_match and matches
        rows.append(
            {
                "family": entry.family,
                "n": entry.n,
                "k": entry.k if entry.k is not None else "",
                "dim": entry.dim,
                "weight": " ".join(str(v) for v in _weight_json(result.weight)),
                "value": _scalar_json(result.value),
                "matches_reference": matches,
            }
        )
        if args.emit_models:
            os.makedirs(args.emit_models, exist_ok=True)
            stem = f"{entry.family.lower()}_n{entry.n}" + (
                f"_k{entry.k}" if entry.k is not None else ""
            )
            path = os.path.join(args.emit_models, stem + ".json")
            with open(path, "w", encoding="utf-8") as handle:
                handle.write(modelio.dumps_canonical(model))

    if args.format == "json":
        print(json.dumps(rows, indent=2))
    elif args.format == "text":
        for row in rows:
            flag = "ok" if row["matches_reference"] else "DEVIATES"
            label = f"{row['family']} n={row['n']}" + (f" k={row['k']}" if row["k"] != "" else "")
            print(f"{label}: value={row['value']} weight=({row['weight']}) {flag}")
    else:
        buffer = io.StringIO()
        writer = csv.DictWriter(
            buffer,
            fieldnames=["family", "n", "k", "dim", "weight", "value", "matches_reference"],
        )
        writer.writeheader()
        writer.writerows(rows)
        sys.stdout.write(buffer.getvalue())
    if not all_match:
        print("error: a table row deviates from the embedded reference", file=sys.stderr)
        return _EXIT_TABLE_DEVIATION
    return 0


def _matches_reference(result, entry) -> bool:
    value = float(result.value)
    reference = float(entry.value)
    if abs(value - reference) > _TABLE_VALUE_RTOL * abs(reference):
        return False
    got = [float(v) for v in result.weight]
    want = [float(v) for v in entry.normalized_weight()]
    if len(got) != len(want):
        return False
    return all(abs(g - w) <= _TABLE_WEIGHT_ATOL for g, w in zip(got, want))


def _cmd_oracle(args) -> int:
    model = modelio.load_model(args.model)
    if isinstance(model, fujita.ConeModel):
        raise DomainError("oracle expects a singularity model, not a cone file")
    weight = _parse_weight(args.weight)
    radii = None
    if args.radii:
        radii = _parse_weight(args.radii)
    series = lattice.estimate_volume(model, weight, radii)
    rows = [
        {
            "radius": _scalar_json(r),
            "colength": c,
            "vol_estimate": _scalar_json(v),
        }
        for r, c, v in zip(series.radii, series.colengths, series.vol_estimates)
    ]
    if args.format == "json":
        print(json.dumps(rows, indent=2))
    elif args.format == "csv":
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=["radius", "colength", "vol_estimate"])
        writer.writeheader()
        writer.writerows(rows)
        sys.stdout.write(buffer.getvalue())
    else:
        for row in rows:
            print(f"r={row['radius']}  colength={row['colength']}  estimate={row['vol_estimate']}")
    return 0


def _cmd_verify(args) -> int:
    dims = _parse_range(args.dims, range(2, 6))
    verdicts = inequalities.run_suite(
        args.suite, samples=args.samples, seed=args.seed, dims=tuple(dims)
    )
    payload = [
        {
            "name": v.name,
            "samples": v.samples,
            "min_margin": v.min_margin,
            "witnesses": [_weight_json(w) for w in v.witnesses],
            "passed": v.passed,
            **({"extra": v.extra} if v.extra else {}),
        }
        for v in verdicts
    ]
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print("# sweeps range over monomial valuations, the family with closed forms")
        for item in payload:
            flag = "PASS" if item["passed"] else "FAIL"
            print(f"{flag} {item['name']}: samples={item['samples']} min_margin={item['min_margin']:.3e}")
    return 0 if all(v.passed for v in verdicts) else 1


def _cmd_fujita(args) -> int:
    model = modelio.load_model(args.cone)
    if not isinstance(model, fujita.ConeModel):
        raise DomainError("fujita expects a cone model file")
    eta_value = fujita.eta(model)
    derivative = fujita.phi_prime_zero(model)
    convex = fujita.convexity_check(model, grid=args.grid)
    f0 = fujita.f_of_t(model, 0)
    f1 = fujita.f_of_t(model, 1)
    betas = [Fraction(0), Fraction(1, 100), Fraction(1, 10), Fraction(1, 2), Fraction(1),
             Fraction(2), Fraction(10), Fraction(100), math.inf]
    samples = fujita.phi_samples(model, betas)
    phi0 = float(samples[0][1])
    drops = any(float(value) < phi0 - 1e-12 for _, value in samples[1:])
    payload = {
        "eta": _scalar_json(eta_value),
        "phi_prime_zero": _scalar_json(derivative),
        "convex": convex,
        "f0": _scalar_json(f0),
        "f1": _scalar_json(f1),
        "phi_samples": [
            ["inf" if b == math.inf else _scalar_json(b), _scalar_json(value)]
            for b, value in samples
        ],
        "phi_drops_below_start": drops,
    }
    _print_payload(payload, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
