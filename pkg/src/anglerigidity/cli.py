"""Command-line interface: check, construct, enumerate, tables, scan.

Exit codes for ``check``: 0 minimally angle-rigid, 1 otherwise (flexible or
overbraced), 2 error.  ``scan`` exits 3
when a discrepancy survives re-testing.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from . import combinatorics
from .colored_graph import (
    InvalidColoredGraph,
    canonical_form,
    format_colored_graph,
    parse_colored_graph,
)
from .enumeration import (
    CSV_HEADER,
    EnumerationJob,
    UnsupportedSize,
    conjecture_scan,
    count_k_color_rigid,
    summary_csv,
)
from .extensions import ConstructionSequence, ExtensionError, construct_sequence
from .rigidity import DEFAULT_BOUND, DegenerateRealization, Realization, parse_realization, report

SEED_ENV = "ANGLERIGIDITY_SEED"
EXIT_RIGID, EXIT_FLEXIBLE, EXIT_ERROR, EXIT_DISCREPANCY = 0, 1, 2, 3


class UsageError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def parse_range(text: str) -> list[int]:
    """'4..6' -> [4, 5, 6]; '5' -> [5]; '4,6' -> [4, 6]; '6..4' -> []."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _edges_text(edges) -> str:
    return " ".join(f"{u}{v}" if u < 10 and v < 10 else f"{u}-{v}" for u, v in edges)


def check_payload(g, rep) -> dict:
    per_color = combinatorics.transversal_condition_per_color(g)
    maxwell = combinatorics.maxwell_colored_check(g)
    glob = combinatorics.transversal_condition_global(g)
    out = rep.to_json()
    out["maxwell_violation"] = None if maxwell is None else [list(e) for e in maxwell]
    out["transversal_global"] = None if glob is None else [list(e) for e in glob]
    out["transversal_per_color"] = {
        str(c): None if w is None else [list(e) for e in w] for c, w in per_color.items()
    }
    out["unique_bichromatic_circuit"] = (
        combinatorics.two_color_rigid_predicate(g) if g.k == 2 else None
    )
    return out


def format_check(payload: dict) -> str:
    yes = lambda b: "yes" if b else "no"  # noqa: E731
    lines = [
        f"vertices           {payload['n']}",
        f"edges              {payload['m']}",
        f"colors             {payload['k']}",
        f"rank               {payload['rank']} / {payload['target_rank']}",
        f"realization        {payload['verdict_kind']} (mode {payload['mode']}, seed {payload['seed']})",
        f"angle-rigid        {yes(payload['infinitesimally_angle_rigid'])}",
        f"independent        {yes(payload['independent'])}",
        f"minimally rigid    {yes(payload['minimally_angle_rigid'])}",
        f"kernel dimension   {payload['kernel_dimension']}",
        f"nontrivial flexes  {payload['nontrivial_flex_dimension']}",
    ]
    stresses = payload["stress_basis"]
    lines.append(f"stress space dim   {'n/a' if stresses is None else len(stresses)}")
    for w in stresses or []:
        lines.append("  stress           " + " ".join(str(x) for x in w))
    mv = payload["maxwell_violation"]
    lines.append(f"maxwell counts     {'ok' if mv is None else 'violated on ' + _edges_text(mv)}")
    tg = payload["transversal_global"]
    lines.append(f"transversal (1)    {'none' if tg is None else _edges_text(tg)}")
    for c, w in payload["transversal_per_color"].items():
        lines.append(f"transversal (2) c{c:<2} {'none' if w is None else _edges_text(w)}")
    if payload["unique_bichromatic_circuit"] is not None:
        lines.append(f"bichromatic circuit {yes(payload['unique_bichromatic_circuit'])}")
    return "\n".join(lines) + "\n"


def cmd_check(args) -> int:
    g = parse_colored_graph(Path(args.file).read_text())
    if args.tol is not None and args.mode != "float":
        raise UsageError("--tol requires --mode float")
    p = None
    if args.realization:
        p = parse_realization(Path(args.realization).read_text())
        if args.mode == "float":
            p = Realization.floating(p.points)
    seed = args.seed if args.seed is not None else default_seed()
    rep = report(g, p, seed=seed, mode=args.mode, tol=args.tol, bound=args.bound)
    payload = check_payload(g, rep)
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        sys.stdout.write(format_check(payload))
    return EXIT_RIGID if rep.minimal else EXIT_FLEXIBLE


def cmd_construct(args) -> int:
    if args.replay:
        seq = ConstructionSequence.from_json(json.loads(Path(args.file).read_text()))
        g = seq.replay()
        if seq.final is not None and canonical_form(g) != canonical_form(seq.final):
            raise ExtensionError("replay does not reproduce the recorded final graph")
        sys.stdout.write(format_colored_graph(g))
        return 0
    g = parse_colored_graph(Path(args.file).read_text())
    print(construct_sequence(g).dumps())
    return 0


def _job(args, n: int, k: int, mode: str) -> EnumerationJob:
    seed = args.seed if args.seed is not None else default_seed()
    return EnumerationJob(n, k, graphs=args.graphs, seed=seed, jobs=args.jobs,
                          output=getattr(args, "output", None), bound=args.bound, mode=mode)


def cmd_enumerate(args) -> int:
    mode = args.mode or ("exhaustive" if args.k == 2 else "existence")
    job = _job(args, args.n, args.k, mode)
    row, _ = count_k_color_rigid(args.n, args.k, job, resume=args.resume)
    sys.stdout.write(summary_csv([row]))
    return 0


def cmd_tables(args) -> int:
    ns = parse_range(args.n)
    if args.table == 3:
        ks = parse_range(args.k) if args.k else [2, 3, 4]
    else:
        ks = parse_range(args.k) if args.k else [2]
    rows = []
    for n in ns:
        for k in ks:
            mode = "exhaustive" if args.table in (1, 2) or (args.table is None and k == 2) else "existence"
            row, _ = count_k_color_rigid(n, k, _job(args, n, k, mode))
            rows.append(row)
    sys.stdout.write(summary_csv(rows))
    return 0


def cmd_scan(args) -> int:
    job = _job(args, args.n, args.k, "exhaustive")
    found = conjecture_scan(args.n, args.k, job, escalations=args.escalations)
    for d in found:
        print(d.to_line())
    return EXIT_DISCREPANCY if found else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anglerigidity", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="rank verdicts and combinatorial conditions for one colored graph")
    p.add_argument("file")
    p.add_argument("--realization", help="points file: lines 'v x y' with rational coordinates")
    p.add_argument("--seed", type=int)
    p.add_argument("--mode", choices=("exact", "float"), default="exact")
    p.add_argument("--tol", type=float)
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("construct", help="construction sequence from a bichromatic K4")
    p.add_argument("file")
    p.add_argument("--replay", action="store_true", help="treat FILE as a sequence and print the graph")
    p.set_defaults(func=cmd_construct)

    def job_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--bound", type=int, default=DEFAULT_BOUND)
        p.add_argument("--graphs", help="graph6 file of candidate graphs")

    p = sub.add_parser("enumerate", help="count rigid colorings for one (n, k)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--mode", choices=("exhaustive", "existence"))
    p.add_argument("--output", help="NDJSON record file")
    p.add_argument("--resume", help="NDJSON record file to reuse and append to")
    job_flags(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("tables", help="CSV rows for the counting tables")
    p.add_argument("--n", required=True, help="range such as 4..6")
    p.add_argument("--k", help="range of color counts")
    p.add_argument("--table", type=int, choices=(1, 2, 3))
    job_flags(p)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("scan", help="rank verdict vs transversal property")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--escalations", type=int, default=3)
    job_flags(p)
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, InvalidColoredGraph, DegenerateRealization, ExtensionError,
            UnsupportedSize, UsageError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

