"""Command-line front end: catalog listing, extension tables, certification.

Subcommands:
  catalog      list the four superpotential branches of a family
  extend       sample V-, V~-, V~+ and closed-form eigenfunctions to CSV
  certify      run the full invariant suite and emit a JSON report
  interpolate  rational extensions at arbitrary shift constants R

Outputs are deterministic for a fixed configuration: floats are serialized
with their shortest round-trip decimal representation, CSV uses LF line
endings and UTF-8, and JSON keys appear in a stable order.  Exit codes:
0 success, 1 certification failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import deform, eop, spectral
from .catalog import (
    RadialOscillator,
    TrigDPT,
    branches,
    get_branch,
    partner_potentials,
    superpotential,
)
from .errors import ConfigurationError, IsoshiftError, SingularExtensionError

_RO_BRANCH_SERIES = {2: "L1", 3: "L2", 1: "L3"}


def _fmt(x):
    """Shortest round-trip decimal for floats; pass everything else through."""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _family_from_args(args):
    if args.family == "radial_oscillator":
        return RadialOscillator(args.omega, args.ell)
    if args.family == "trig_dpt":
        return TrigDPT(args.A, args.B)
    raise ConfigurationError(f"unknown family {args.family!r}")


def _write_csv(path: Path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _write_json(path: Path, obj):
    path.write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8", newline="\n")


def _sample_grid(family, args):
    n = args.grid_points if args.grid_points else 400
    if isinstance(family, RadialOscillator):
        rmax = args.rmax if args.rmax else 12.0 / np.sqrt(family.omega)
        return np.linspace(0.02 * rmax, rmax, n)
    hi = np.pi / 2.0 - 0.01
    return np.linspace(0.01, hi, n)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_catalog(args):
    family = _family_from_args(args)
    rows = [
        {
            "k": b.k,
            "a": b.a,
            "b": b.b,
            "factorization_energy": b.factorization_energy,
            "susy_kind": b.susy_kind,
        }
        for b in branches(family)
    ]
    if args.format == "json":
        print(json.dumps({"family": args.family, "branches": rows}, indent=2))
    else:
        print(f"family: {args.family}")
        print("k  a  b  factorization_energy  susy_kind")
        for r in rows:
            print(
                f"{r['k']}  {_fmt(r['a'])}  {_fmt(r['b'])}  "
                f"{_fmt(r['factorization_energy'])}  {r['susy_kind']}"
            )
    return 0


def cmd_extend(args):
    family = _family_from_args(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    grid = _sample_grid(family, args)
    warnings = []

    for m in args.m:
        branch = get_branch(family, args.branch)
        d = deform.seed_polynomial(family, branch, m)
        pair = deform.extend(d)
        w0 = d.w0
        v_minus = w0.f(grid) ** 2 - w0.df(grid)

        header = ["r", "V_minus", "V_tilde_minus", "V_tilde_plus"]
        cols = [grid, v_minus, pair.V_tilde_minus.f(grid), pair.V_tilde_plus.f(grid)]

        series = None
        if isinstance(family, RadialOscillator):
            series = _RO_BRANCH_SERIES.get(args.branch)
        if series is not None and not d.singular_points:
            for n in range(args.nmax + 1):
                psi = eop.eigenfunction_closed_form(eop.EOPSpec(series, n, m, family))
                header.append(f"psi_{n}")
                cols.append(psi.f(grid))
        elif d.singular_points:
            warnings.append(
                f"m={m}: singular extension (points {d.singular_points}); "
                "eigenfunction tables skipped"
            )
        elif args.nmax >= 0 and series is None:
            warnings.append(
                f"m={m}: no closed-form eigenfunction family for this branch; "
                "eigenfunction tables skipped"
            )

        stem = f"extend_{args.family}_b{args.branch}_m{m}"
        _write_csv(out_dir / f"{stem}.csv", header, zip(*cols))
        sidecar = {
            "family": args.family,
            "branch": args.branch,
            "m": m,
            "params": _params_dict(family),
            "shift": pair.shift,
            "singular_points": list(d.singular_points),
            "series": series,
            "warnings": warnings,
        }
        _write_json(out_dir / f"{stem}.json", sidecar)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    return 0


def _params_dict(family):
    if isinstance(family, RadialOscillator):
        return {"omega": family.omega, "ell": family.ell}
    return {"A": family.A, "B": family.B}


def _certify_cell(family, k, m, args):
    """All invariant checks for one (branch, m); returns (record, failures)."""
    t0 = time.perf_counter()
    record = {"branch": k, "m": m}
    failures = []

    d = deform.seed_polynomial(family, k, m)
    grid = deform.certification_grid(family, 400, exclude=d.singular_points)

    rr = d.riccati_residual(grid)
    record["riccati_residual"] = rr
    if rr > 1e-9 * (1.0 + abs(d.R)):
        failures.append(f"branch {k} m={m}: riccati residual {rr:.3e}")

    pair = deform.extend(d)  # raises InternalInconsistencyError on violation
    w0v = d.w0.f(grid)
    vplus = w0v**2 + d.w0.df(grid)
    dev = np.max(
        np.abs(pair.V_tilde_plus.f(grid) - vplus - d.R)
        / (1.0 + np.abs(vplus) + abs(d.R))
    )
    record["partner_shift_deviation"] = float(dev)
    record["shift"] = d.R

    reg = spectral.classify_regularity(family, k, m)
    record["regularity"] = reg.classification
    record["singular_points"] = list(reg.points)
    if reg.finding:
        record["finding"] = reg.finding

    series = _RO_BRANCH_SERIES.get(k) if isinstance(family, RadialOscillator) else None
    if series is not None and m > 0 and reg.is_regular and not args.skip_gram:
        G = eop.gram_matrix(series, m, family, min(args.nmax, 4))
        gmax = eop.gram_offdiag_max(G)
        record["gram_offdiag_max"] = gmax
        if gmax > 1e-8:
            failures.append(f"branch {k} m={m}: gram off-diagonal {gmax:.3e}")
        spec = eop.EOPSpec(series, 2, m, family)
        inside, outside = eop.zero_census(spec)
        record["zero_census_n2"] = {"inside": inside, "outside": outside}
    else:
        record["gram_offdiag_max"] = "skipped: " + (
            "m=0" if m == 0 else
            "singular extension" if not reg.is_regular else
            "no polynomial series for this branch" if series is None else
            "--skip-gram"
        )

    if not args.skip_spectral and reg.is_regular and k in (2, 3):
        gridspec = spectral.default_grid(family, k=4, m=m,
                                         n_points=args.grid_points or 3000)
        w = superpotential(family, k)
        v_minus, _ = partner_potentials(w)
        shift, deviation = spectral.isospectrality_report(
            pair.V_tilde_minus, v_minus, gridspec, 4
        )
        record["isospectrality"] = {"shift": shift, "deviation": deviation}
        if deviation > 1e-3:
            failures.append(
                f"branch {k} m={m}: isospectral deviation {deviation:.3e}"
            )
    else:
        record["isospectrality"] = "skipped: " + (
            "singular extension" if not reg.is_regular else
            "--skip-spectral" if args.skip_spectral else
            "exact-SUSY branch deletes levels; no constant shift expected"
        )

    record["wall_time_s"] = round(time.perf_counter() - t0, 3)
    return record, failures


def _certify_w0(family, m):
    """Consistency residuals of the explicit linking superpotential (RO)."""
    W0 = deform.w0_explicit(family, m)
    c = deform.w0_partner_constant(family, m)
    d2 = deform.seed_polynomial(family, 2, m)
    d3 = deform.seed_polynomial(family, 3, m)
    grid = deform.certification_grid(
        family, 400, exclude=list(d2.singular_points) + list(d3.singular_points)
    )
    v2 = deform.extend(d2).V_tilde_minus.f(grid)
    v3 = deform.extend(d3).V_tilde_minus.f(grid)
    w0v, w0d = W0.f(grid), W0.df(grid)
    res_minus = float(np.max(np.abs(w0v**2 - w0d - (v2 - c)) / (1.0 + np.abs(v2))))
    res_plus = float(np.max(np.abs(w0v**2 + w0d - (v3 - c)) / (1.0 + np.abs(v3))))
    psi0 = eop.eigenfunction_closed_form(eop.EOPSpec("L1", 0, m, family))
    gs = deform.w0_from_ground_state(psi0)
    res_gs = float(np.max(np.abs(w0v - gs.f(grid)) / (1.0 + np.abs(w0v))))
    return {
        "m": m,
        "partner_constant": c,
        "minus_partner_residual": res_minus,
        "plus_partner_residual": res_plus,
        "ground_state_residual": res_gs,
    }


def cmd_certify(args):
    family = _family_from_args(args)
    report = {
        "family": args.family,
        "params": _params_dict(family),
        "cells": [],
        "w0": [],
        "failures": [],
    }
    for k in args.branches:
        for m in args.m:
            record, failures = _certify_cell(family, k, m, args)
            report["cells"].append(record)
            report["failures"].extend(failures)
    if isinstance(family, RadialOscillator):
        for m in args.m:
            if m == 0:
                continue
            w0rec = _certify_w0(family, m)
            report["w0"].append(w0rec)
            for key in ("minus_partner_residual", "plus_partner_residual",
                        "ground_state_residual"):
                if w0rec[key] > 1e-9:
                    report["failures"].append(
                        f"w0 m={m}: {key} = {w0rec[key]:.3e}"
                    )
    report["status"] = "pass" if not report["failures"] else "fail"
    text = json.dumps(report, indent=2, default=_fmt)
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        _write_json(Path(args.out) / "certify.json", report)
    print(text)
    if report["failures"]:
        print(f"FAILED: {report['failures'][0]}", file=sys.stderr)
        return 1
    return 0


def cmd_interpolate(args):
    family = _family_from_args(args)
    if not isinstance(family, RadialOscillator):
        raise ConfigurationError("interpolate supports the radial oscillator only")
    if not args.R:
        raise ConfigurationError("interpolate requires at least one R value")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rmax = args.rmax if args.rmax else 12.0 / np.sqrt(family.omega)
    n = args.grid_points if args.grid_points else 400
    grid = np.linspace(0.02 * rmax, rmax, n)

    header = ["r"]
    cols = [grid]
    meta = {"family": args.family, "branch": args.branch,
            "params": _params_dict(family), "columns": []}
    for R in args.R:
        pair = deform.extend_general_R(family, args.branch, R, r_max=1.2 * rmax)
        name = f"V_tilde_minus_R={_fmt(R)}"
        header.append(name)
        cols.append(pair.V_tilde_minus.f(grid))
        meta["columns"].append(
            {
                "R": R,
                "singular": bool(pair.singular_points),
                "singular_points": list(pair.singular_points),
            }
        )
    _write_csv(out_dir / "interpolate.csv", header, zip(*cols))
    _write_json(out_dir / "interpolate.json", meta)
    return 0


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def _add_common(p, family_positional=False):
    if family_positional:
        p.add_argument("family", choices=["radial_oscillator", "trig_dpt"])
    else:
        p.add_argument("--family", choices=["radial_oscillator", "trig_dpt"],
                       default="radial_oscillator")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--ell", type=float, default=1.0)
    p.add_argument("--A", type=float, default=1.0)
    p.add_argument("--B", type=float, default=1.0)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--grid-points", type=int, default=None, dest="grid_points")
    p.add_argument("--rmax", type=float, default=None)
    p.add_argument("--config", type=str, default=None,
                   help="JSON config file; command-line flags override it")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="isoshift",
        description="rational extensions of shape-invariant potentials",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list the superpotential branches")
    _add_common(p, family_positional=True)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("extend", help="sample extended potentials and eigenfunctions")
    _add_common(p)
    p.add_argument("--branch", type=int, choices=[1, 2, 3, 4], default=2)
    p.add_argument("--m", type=int, nargs="+", default=[1])
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--out", type=str, default="isoshift_out")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("certify", help="run the invariant suite")
    _add_common(p)
    p.add_argument("--branches", type=int, nargs="+", default=[1, 2, 3])
    p.add_argument("--m", type=int, nargs="+", default=[0, 1, 2])
    p.add_argument("--nmax", type=int, default=4)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--skip-spectral", action="store_true", dest="skip_spectral")
    p.add_argument("--skip-gram", action="store_true", dest="skip_gram")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("interpolate", help="extensions at arbitrary shift R")
    _add_common(p)
    p.add_argument("--branch", type=int, choices=[1, 2, 3, 4], default=2)
    p.add_argument("--R", type=float, nargs="+", default=None)
    p.add_argument("--out", type=str, default="isoshift_out")
    p.set_defaults(func=cmd_interpolate)
    return parser


def _apply_config_file(parser, args, argv):
    if not args.config:
        return args
    try:
        cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read config file {args.config}: {exc}")
    if not isinstance(cfg, dict):
        raise ConfigurationError("config file must hold a JSON object")
    explicit = {a.lstrip("-").split("=")[0].replace("-", "_") for a in argv if a.startswith("--")}
    for key, value in cfg.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ConfigurationError(f"unknown config key {key!r}")
        if attr not in explicit:
            setattr(args, attr, value)
    return args


def _validate(args):
    for attr in ("nmax",):
        if hasattr(args, attr) and getattr(args, attr) is not None and getattr(args, attr) < 0:
            raise ConfigurationError(f"{attr} must be nonnegative")
    if hasattr(args, "m"):
        if not args.m:
            raise ConfigurationError("m list must be nonempty")
        if any(int(m) != m or m < 0 for m in args.m):
            raise ConfigurationError("m values must be nonnegative integers")
        args.m = [int(m) for m in args.m]


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config_file(parser, args, argv)
        _validate(args)
        return args.func(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IsoshiftError as exc:
        print(f"certification error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
