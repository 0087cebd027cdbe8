"""Batch command-line interface.

Every invocation emits one self-describing record (JSON by default) that
echoes the full configuration, the tool version and the wall-clock
duration.  Exact rationals are serialized as "p/q" strings and counts as
decimal strings so records round-trip losslessly.

Exit codes: 0 success, 1 a checked invariant or bound was violated,
2 usage error, 3 an enumeration cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .box import CapExceeded, GridBox, middle_layer_size
from .chains import (chain_count_bound, check_chain_count_bound,
                     closest_ranks_in_window, sample_chain_decomposition)
from .counting import count_antichains, count_downsets, monotone_path_ramsey
from .asymptotics import ASYM_CSV_HEADER, middle_layer_table
from .containers import certified_upper_bound
from .rng import derive_seed, stream
from .supersat import CSV_HEADER, check_supersaturation, supersaturation_threshold

DEFAULT_CAP = 64


def _jsonable(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


def _emit(args, record: dict, started: float) -> None:
    record = dict(record)
    record["tool"] = "gridposet"
    record["version"] = __version__
    record["duration_ms"] = round((time.monotonic() - started) * 1000.0, 3)
    text = json.dumps(_jsonable(record), sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_lines(args, lines: list[str]) -> None:
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _box_from(args) -> GridBox:
    dims = args.D if args.D is not None else args.d + 1
    return GridBox(args.n, dims)


def _config(args, **extra) -> dict:
    cfg = {"n": args.n, "D": args.D, "d": args.d,
           "seed": getattr(args, "seed", None),
           "trials": getattr(args, "trials", None),
           "cap": args.cap, "format": args.format}
    cfg.update(extra)
    return cfg


def cmd_count(args) -> int:
    started = time.monotonic()
    box = _box_from(args)
    record = {"command": "count", "config": _config(args)}
    record["middle_layer_size"] = middle_layer_size(box)
    record["log2_lower_bound"] = Fraction(middle_layer_size(box))
    record["antichain_count"] = count_antichains(box, cap=args.cap)
    record["downset_count"] = count_downsets(box)
    record["ramsey_monotone_path"] = monotone_path_ramsey(box.dims - 1, box.n)
    if args.bound:
        report = certified_upper_bound(box)
        record["certified_log2_upper"] = report.certified_log2_upper
        record["container_family_size"] = report.family_size
    ok = record["antichain_count"] == record["downset_count"]
    record["paths_agree"] = ok
    _emit(args, record, started)
    return 0 if ok else 1


def cmd_chains(args) -> int:
    started = time.monotonic()
    box = _box_from(args)
    violations = 0
    ns = []
    in_scope = True
    for t in range(args.trials):
        cd = sample_chain_decomposition(box, derive_seed(args.seed, t))
        ok, bound = check_chain_count_bound(cd)
        if not ok:
            violations += 1
        if cd.in_theorem_scope:
            window_ok, _ = closest_ranks_in_window(cd)
            if not window_ok:
                violations += 1
        in_scope = in_scope and cd.in_theorem_scope
        ns.append(cd.n_chains)
    bound = chain_count_bound(box)
    record = {
        "command": "chains", "config": _config(args),
        "middle_layer_size": middle_layer_size(box),
        "chain_count_bound": bound,
        "chain_counts": sorted(set(ns)),
        "violations": violations,
        "in_theorem_scope": in_scope,
    }
    _emit(args, record, started)
    return 0 if violations == 0 else 1


def cmd_supersat(args) -> int:
    started = time.monotonic()
    box = _box_from(args)
    rng = stream(args.seed, 77)
    points = None
    rows = [CSV_HEADER]
    failures = 0
    from .box import iter_points
    points = iter_points(box, cap=max(args.cap, box.size))
    for t in range(args.trials):
        lo = int(supersaturation_threshold(box, args.a)) + 1
        if lo > box.size:
            size = box.size
        else:
            size = rng.randrange(lo, box.size + 1)
        X = rng.sample(points, size)
        report = check_supersaturation(box, X, args.a)
        rows.append(report.csv_row())
        if not report.satisfied:
            failures += 1
    if args.format == "csv":
        _emit_lines(args, rows)
    else:
        record = {"command": "supersat", "config": _config(args, a=args.a),
                  "rows": rows[1:], "failures": failures}
        _emit(args, record, started)
    return 0 if failures == 0 else 1


def cmd_containers(args) -> int:
    started = time.monotonic()
    box = _box_from(args)
    report = certified_upper_bound(box)
    record = {
        "command": "containers", "config": _config(args),
        "middle_layer_size": report.middle_layer,
        "family_size": report.family_size,
        "family_max_container": report.family_max_container,
        "log2_count_bound": report.log2_count_bound,
        "size_bound": report.size_bound,
        "certified_log2_upper": report.certified_log2_upper,
        "premise_status": report.premise_status,
        "exact_count": report.exact_count,
        "exact_log2": report.exact_log2,
    }
    ok = report.certified_log2_upper >= report.middle_layer
    if report.exact_log2 is not None:
        ok = ok and report.certified_log2_upper >= report.exact_log2
    record["bound_consistent"] = ok
    _emit(args, record, started)
    return 0 if ok else 1


def cmd_asym(args) -> int:
    started = time.monotonic()
    dims_list = [int(x) for x in args.D_list.split(",")]
    rows = [ASYM_CSV_HEADER]
    for row in middle_layer_table(args.n, dims_list):
        rows.append(row.csv_row())
    if args.format == "csv":
        _emit_lines(args, rows)
    else:
        record = {"command": "asym", "config": _config(args, D_list=args.D_list),
                  "rows": rows[1:]}
        _emit(args, record, started)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridposet",
        description="antichain counting and certification in grid posets")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=False, trials=None):
        p.add_argument("--n", type=int, required=True, help="box side length")
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--D", type=int, help="box dimension")
        group.add_argument("--d", type=int, help="partition dimension (D = d+1)")
        p.add_argument("--cap", type=int,
                       default=int(os.environ.get("GRIDPOSET_CAP", DEFAULT_CAP)),
                       help="enumeration cap (elements)")
        p.add_argument("--format", choices=["json", "csv", "text"], default="json")
        p.add_argument("--out", help="write the record to this path")
        if seed:
            p.add_argument("--seed", type=int, default=0)
        if trials is not None:
            p.add_argument("--trials", type=int, default=trials)

    p = sub.add_parser("count", help="exact antichain/down-set counts")
    common(p)
    p.add_argument("--bound", action="store_true",
                   help="also compute the certified container upper bound")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("chains", help="sample chain decompositions and check bounds")
    common(p, seed=True, trials=10)
    p.set_defaults(func=cmd_chains)

    p = sub.add_parser("supersat", help="randomized supersaturation audit")
    common(p, seed=True, trials=100)
    p.add_argument("--a", type=int, default=1, help="rank gap")
    p.set_defaults(func=cmd_supersat)

    p = sub.add_parser("containers", help="certified container upper bound")
    common(p)
    p.set_defaults(func=cmd_containers)

    p = sub.add_parser("asym", help="middle-layer size vs its CLT estimate")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--D-list", required=True,
                   help="comma-separated dimensions, e.g. 10,50,200")
    p.add_argument("--format", choices=["json", "csv", "text"], default="csv")
    p.add_argument("--out", help="write the table to this path")
    p.add_argument("--cap", type=int,
                   default=int(os.environ.get("GRIDPOSET_CAP", DEFAULT_CAP)))
    p.set_defaults(func=cmd_asym, D=None, d=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except CapExceeded as exc:
        sys.stderr.write(f"cap exceeded: {exc}\n")
        return 3
    except (ValueError, RuntimeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
