"""Command-line interface.

Subcommands: classify, invariants, normal-form, worst-trajectory, probe.
Matrices come either inline (--a1/--a2 as JSON row-major 2x2 arrays) or in
batch from a JSON file {"pairs": [{"A1": ..., "A2": ...}, ...]}.  Results
stream as one JSON object per line; trajectories can additionally be
written as CSV with columns t, x1, x2, u, norm.

Exit codes: 0 success, 2 invalid input, 3 cross-check failure under
--strict.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .classify import ClassifyOptions, UnstableDirection, classify, explain
from .errors import SwstabError
from .invariants import compute_invariants, with_s4_quantities
from .lyapunov import QuadraticForm
from .mat2 import Mat2
from .normal_form import normalize, verify_normal_form
from .simulate import guas_probe
from .worst_traj import WorstTrajectory, worst_trajectory

SCHEMA = 1


def _parse_matrix(text: str, name: str) -> Mat2:
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{name}: invalid JSON: {exc}") from exc
    arr = np.asarray(rows, dtype=float)
    if arr.shape != (2, 2) or not np.all(np.isfinite(arr)):
        raise ValueError(f"{name}: expected 4 finite entries in 2x2 layout")
    return Mat2.from_array(arr)


def _load_pairs(args) -> list[tuple[Mat2, Mat2]]:
    if args.file:
        with open(args.file) as fh:
            data = json.load(fh)
        pairs = []
        for i, item in enumerate(data.get("pairs", [])):
            pairs.append((_parse_matrix(json.dumps(item["A1"]), f"pairs[{i}].A1"),
                          _parse_matrix(json.dumps(item["A2"]), f"pairs[{i}].A2")))
        if not pairs:
            raise ValueError("input file contains no pairs")
        return pairs
    if not (args.a1 and args.a2):
        raise ValueError("provide --a1 and --a2, or --file")
    return [(_parse_matrix(args.a1, "--a1"), _parse_matrix(args.a2, "--a2"))]


def _round_trip(x):
    if isinstance(x, float):
        return x if math.isfinite(x) else None
    return x


def _invariants_dict(inv) -> dict:
    return {k: _round_trip(v) for k, v in {
        "gamma": inv.gamma,
        "delta1": inv.delta1,
        "delta2": inv.delta2,
        "tau1": inv.tau1,
        "tau2": inv.tau2,
        "kappa": inv.kappa,
        "big_delta": inv.big_delta,
        "det1": inv.det1,
        "det2": inv.det2,
        "tr12": inv.tr12,
        "geo_mean_det": inv.geo_mean_det,
        "t1": inv.t1,
        "t2": inv.t2,
        "r_value": inv.r_value,
    }.items()}


def _certificate_dict(cert) -> dict | None:
    if cert is None:
        return None
    if isinstance(cert, QuadraticForm):
        return {
            "type": "quadratic-lf" if cert.strict else "nonstrict-quadratic-lf",
            "P": [[cert.p11, cert.p12], [cert.p12, cert.p22]],
            "strict": cert.strict,
        }
    if isinstance(cert, UnstableDirection):
        return {
            "type": "unstable-direction",
            "sigma0": cert.sigma0,
            "direction": list(cert.direction),
            "eigenvalue": cert.eigenvalue,
        }
    if isinstance(cert, WorstTrajectory):
        return {
            "type": "worst-trajectory",
            "return_ratio": cert.return_ratio,
            "final_norm_ratio": cert.final_norm_ratio,
            "arcs": [{"matrix": a.index, "duration": a.duration,
                      "start": [float(a.start[0]), float(a.start[1])]}
                     for a in cert.arcs],
        }
    return {"type": type(cert).__name__}


def _write_csv(path: str, samples) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "x1", "x2", "u", "norm"])
        for t, x, u in samples:
            writer.writerow([repr(float(t)), repr(float(x[0])),
                             repr(float(x[1])), repr(float(u)),
                             repr(float(np.hypot(x[0], x[1])))])


def _emit(obj, out) -> None:
    json.dump(obj, out, allow_nan=False)
    out.write("\n")


def _cmd_classify(args, pairs, out) -> int:
    opts = ClassifyOptions(s3_band=args.s3_band, r_band=args.r_band)
    worst = 0
    for i, (a1, a2) in enumerate(pairs):
        try:
            v = classify(a1, a2, opts)
        except SwstabError as exc:
            _emit({"schema": SCHEMA, "index": i, "error": str(exc)}, out)
            worst = max(worst, 2)
            if args.strict:
                return 2
            continue
        record = {
            "schema": SCHEMA,
            "index": i,
            "case": v.case,
            "invariants": _invariants_dict(v.invariants),
            "certificate": _certificate_dict(v.certificate),
            "flags": [list(f) for f in v.boundary_flags],
        }
        if args.explain:
            record["explain"] = explain(v)
        _emit(record, out)
        if v.cross_check_failed and args.strict:
            return 3
    return worst


def _cmd_invariants(args, pairs, out) -> int:
    for i, (a1, a2) in enumerate(pairs):
        inv = compute_invariants(a1, a2)
        try:
            inv = with_s4_quantities(inv)
        except SwstabError:
            pass  # quantities stay absent outside S4
        _emit({"schema": SCHEMA, "index": i,
               "invariants": _invariants_dict(inv)}, out)
    return 0


def _cmd_normal_form(args, pairs, out) -> int:
    code = 0
    for i, (a1, a2) in enumerate(pairs):
        try:
            res = normalize(a1, a2)
        except SwstabError as exc:
            _emit({"schema": SCHEMA, "index": i, "error": str(exc)}, out)
            code = 2
            if args.strict:
                return 2
            continue
        record = {
            "schema": SCHEMA,
            "index": i,
            "case_tag": res.case_tag,
            "B1": res.b1.rows(),
            "B2": res.b2.rows(),
            "T": res.basis.rows(),
            "alpha1": res.alpha1,
            "alpha2": res.alpha2,
            "F": res.f,
            "swapped": res.swapped,
        }
        if res.note:
            record["note"] = res.note
        if args.check:
            record["verified"] = verify_normal_form(res, a1, a2)
        _emit(record, out)
    return code


def _cmd_worst_trajectory(args, pairs, out) -> int:
    code = 0
    for i, (a1, a2) in enumerate(pairs):
        try:
            wt = worst_trajectory(a1, a2, revolutions=args.revolutions)
        except SwstabError as exc:
            _emit({"schema": SCHEMA, "index": i, "error": str(exc)}, out)
            code = 2
            if args.strict:
                return 2
            continue
        _emit({"schema": SCHEMA, "index": i,
               **_certificate_dict(wt)}, out)
        if args.csv:
            path = args.csv if len(pairs) == 1 else f"{args.csv}.{i}"
            _write_csv(path, wt.samples(args.points_per_arc))
    return code


def _json_safe(x):
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


def _cmd_probe(args, pairs, out) -> int:
    seed = args.seed
    env_seed = os.environ.get("SWSTAB_SEED")
    if env_seed is not None:
        seed = int(env_seed)
    for i, (a1, a2) in enumerate(pairs):
        rep = guas_probe(a1, a2, trials=args.trials, horizon=args.horizon,
                         seed=seed)
        _emit({
            "schema": SCHEMA,
            "index": i,
            "trials": rep.trials,
            "horizon": rep.horizon,
            "seed": rep.seed,
            "max_random_ratio": _json_safe(rep.max_random_ratio),
            "greedy_ratio": _json_safe(rep.greedy_ratio),
            "convexified_ratio": _json_safe(rep.convexified_ratio),
            "max_ratio": _json_safe(rep.max_ratio),
            "suspected_unstable": rep.suspected_unstable,
        }, out)
    return 0


def _cmd_validate(args, pairs, out) -> int:
    del pairs
    source = open(args.input) if args.input else sys.stdin
    try:
        n = 0
        for line in source:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            if record.get("schema") != SCHEMA:
                print(f"error: line {n + 1}: unsupported schema "
                      f"{record.get('schema')!r}", file=sys.stderr)
                return 2
            n += 1
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return 2
    finally:
        if args.input:
            source.close()
    _emit({"schema": SCHEMA, "validated": n}, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swstab",
        description="Stability classification of planar two-mode switched "
                    "linear systems.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--a1", help="first matrix as JSON rows, e.g. "
                       '"[[-1,10],[0,-1]]"')
        p.add_argument("--a2", help="second matrix as JSON rows")
        p.add_argument("--file", help="batch input JSON with a 'pairs' list")
        p.add_argument("--strict", action="store_true",
                       help="stop at the first failure; escalate cross-check "
                            "failures to exit code 3")

    p = sub.add_parser("classify", help="stability class with certificate")
    add_common(p)
    p.add_argument("--s3-band", type=float, default=1e-9,
                   help="half-width of the marginal-boundary band")
    p.add_argument("--r-band", type=float, default=1e-9,
                   help="half-width of the R = 1 band")
    p.add_argument("--explain", action="store_true",
                   help="attach a human-readable margin report")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("invariants", help="invariant scalars of the pair")
    add_common(p)
    p.set_defaults(func=_cmd_invariants)

    p = sub.add_parser("normal-form", help="canonical coordinates of the pair")
    add_common(p)
    p.add_argument("--check", action="store_true",
                   help="verify the reduction invariants")
    p.set_defaults(func=_cmd_normal_form)

    p = sub.add_parser("worst-trajectory",
                       help="extremal switched trajectory (case S4)")
    add_common(p)
    p.add_argument("--revolutions", type=int, default=1)
    p.add_argument("--csv", help="write trajectory samples to this CSV path")
    p.add_argument("--points-per-arc", type=int, default=60)
    p.set_defaults(func=_cmd_worst_trajectory)

    p = sub.add_parser("probe", help="Monte-Carlo + adversarial falsification")
    add_common(p)
    p.add_argument("--trials", type=int, default=64)
    p.add_argument("--horizon", type=float, default=None)
    p.add_argument("--seed", type=int, default=0,
                   help="PRNG seed (env SWSTAB_SEED overrides)")
    p.set_defaults(func=_cmd_probe)

    p = sub.add_parser("validate",
                       help="check a stream of result records (JSON lines)")
    p.add_argument("--input", help="file to validate (default: stdin)")
    p.set_defaults(func=_cmd_validate, file=None, a1=None, a2=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.func is _cmd_validate:
        return _cmd_validate(args, [], sys.stdout)
    try:
        pairs = _load_pairs(args)
    except (ValueError, OSError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return args.func(args, pairs, sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
