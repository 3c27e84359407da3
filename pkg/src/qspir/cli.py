"""``qspir`` command-line front end.

Exit codes: 0 when every checked invariant holds, 1 on an invariant
violation (the first failing assertion is named on stderr), 2 on invalid
arguments, 3 when an enumeration or register exceeds its capacity.
The worker count for independent cells comes from ``QSPIR_WORKERS``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Sequence

from .exceptions import CapacityError, InvariantViolation
from .metrics import measure_cell, rate_table, theta_trend
from .protocols import BACKENDS, MODES, QUERY_RULES, VARIANTS
from .secrecy import PROTOCOLS

SCHEMA_VERSION = 1
DEFAULT_GRID = {"n": (2, 3, 4, 5), "f": (2, 3), "blocks": (1, 2)}
VERIFY = {
    "none": (),
    "error": ("error",),
    "user": ("user",),
    "server": ("server",),
    "lemma1": ("lemma1",),
    "all": ("error", "user", "server", "lemma1"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qspir", description="Simulate and verify (N-1)-private QSPIR and the classical XOR scheme.")
    p.add_argument("--protocol", choices=PROTOCOLS, default="qspir")
    p.add_argument("--n", type=int, help="number of servers (default: grid 2..5)")
    p.add_argument("--f", type=int, help="number of files (default: grid 2, 3)")
    p.add_argument("--blocks", type=int, help="blocks per file (default: grid 1, 2)")
    p.add_argument("--k", type=int, help="query index (default: every K)")
    p.add_argument("--mode", choices=MODES, default="sample")
    p.add_argument("--backend", choices=BACKENDS, default="frame")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verify", choices=tuple(VERIFY), default="none")
    p.add_argument("--out", type=Path, help="directory for report files (default: stdout)")
    p.add_argument("--format", choices=("json", "csv", "both"), default="json")
    p.add_argument("--variant", choices=VARIANTS, default="standard", help="deliberately broken variants for negative tests")
    p.add_argument("--query-rule", choices=QUERY_RULES, default="uniform")
    p.add_argument("--report", choices=("run", "rate-table", "theta-trend"), default="run")
    return p


def _workers() -> int:
    raw = os.environ.get("QSPIR_WORKERS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"QSPIR_WORKERS must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"QSPIR_WORKERS must be a positive integer, got {raw!r}")
    return value


def _grid(args) -> list[tuple[int, int, int]]:
    ns = (args.n,) if args.n is not None else DEFAULT_GRID["n"]
    fs = (args.f,) if args.f is not None else DEFAULT_GRID["f"]
    bs = (args.blocks,) if args.blocks is not None else DEFAULT_GRID["blocks"]
    if args.protocol == "qspir3":
        if args.n not in (None, 3) or args.blocks not in (None, 1):
            raise ValueError("qspir3 requires --n 3 and --blocks 1")
        ns, bs = (3,), (1,)
    return sorted((n, f, b) for n in ns for f in fs for b in bs)


def _flatten(row: dict, prefix: str = "") -> dict:
    out = {}
    for key, value in row.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(_flatten(value, f"{name}:"))
        elif isinstance(value, list):
            out[name] = "; ".join(str(v) for v in value)
        elif value is None:
            out[name] = ""
        elif isinstance(value, bool):
            out[name] = "true" if value else "false"
        else:
            out[name] = str(value)
    return out


def to_csv(rows: Sequence[dict]) -> str:
    flat = [_flatten(r) for r in rows]
    columns = sorted({c for r in flat for c in r})
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for r in flat:
        writer.writerow({c: r.get(c, "") for c in columns})
    return buf.getvalue()


def run_suite(args: argparse.Namespace) -> tuple[dict, list[dict]]:
    """Execute the requested report; returns the JSON document and its rows."""
    arguments = {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items()) if k != "out"}
    doc = {"schema": SCHEMA_VERSION, "report": args.report, "arguments": arguments}
    if args.report == "rate-table":
        low = args.n if args.n is not None else 2
        rows = rate_table(range(low, 8) if args.n is None else [args.n], args.blocks or 1, args.seed)
        failures = [f"rate: N={r['n']}" for r in rows if not (r["quantum_matches"] and r["classical_matches"])]
    elif args.report == "theta-trend":
        rows = theta_trend(args.n or 4, args.f or 2, range(1, (args.blocks or 16) + 1))
        thetas = [r["theta_decimal"] for r in rows]
        failures = [] if all(float(b) < float(a) for a, b in zip(thetas, thetas[1:])) else ["theta_decreasing"]
    else:
        cells = _grid(args)
        ks = None if args.k is None else [args.k]

        def one(cell):
            n, f, b = cell
            return measure_cell(
                args.protocol,
                n,
                f,
                b,
                ks=ks,
                mode=args.mode,
                backend=args.backend,
                seed=args.seed,
                checks=VERIFY[args.verify],
                variant=args.variant,
                query_rule=args.query_rule,
            )

        with ThreadPoolExecutor(max_workers=_workers()) as pool:
            reports = list(pool.map(one, cells))
        rows = [r.to_dict() for r in reports]
        failures = [f for r in reports for f in r.failures]
    doc["rows"] = rows
    doc["status"] = "fail" if failures else "ok"
    doc["failures"] = failures
    return doc, rows


def _emit(doc: dict, rows: list[dict], args) -> None:
    text_json = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    text_csv = to_csv(rows)
    if args.out is None:
        sys.stdout.write(text_json if args.format != "csv" else text_csv)
        if args.format == "both":
            sys.stdout.write(text_csv)
        return
    args.out.mkdir(parents=True, exist_ok=True)
    stem = "report" if args.report == "run" else args.report
    if args.format in ("json", "both"):
        (args.out / f"{stem}.json").write_text(text_json)
    if args.format in ("csv", "both"):
        (args.out / f"{stem}.csv").write_text(text_csv)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        doc, rows = run_suite(args)
    except CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return 3
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return 1
    except (ValueError, TypeError, IndexError) as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return 2
    _emit(doc, rows, args)
    if doc["failures"]:
        print(f"invariant violated: {doc['failures'][0]}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
