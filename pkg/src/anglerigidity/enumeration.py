"""Candidate-graph generation, coloring enumeration up to isomorphism, batch
rigidity counts and the transversal-property scan.

Colored graphs are counted up to vertex relabeling and permutation of the
color labels.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Literal, Sequence

from . import combinatorics
from .colored_graph import (
    ColoredGraph,
    Edge,
    automorphisms,
    decode_graph6,
    encode_graph6,
    norm_edge,
    uncolored_canonical_key,
)
from .combinatorics import r2_rank, two_color_rigid_predicate
from .rigidity import DEFAULT_BOUND, derive_seed, generic_rank, target_rank

MAX_BUILTIN_N = 7
CSV_HEADER = ("n", "k", "graphs", "k_color_rigid", "rigid_colored_total", "min_maps", "max_maps")

Mode = Literal["exhaustive", "existence"]


class UnsupportedSize(ValueError):
    pass


def _min_degree_ok(n: int, edges: Sequence[Edge]) -> bool:
    deg = [0] * (n + 1)
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return min(deg[1:], default=0) >= 2


def graphs_with_edges(n: int, m: int) -> list[list[Edge]]:
    """All graphs on n vertices with m edges up to isomorphism.

    Level-wise augmentation by one edge with canonical-key rejection.
    """
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    if m > len(pairs):
        return []
    level: dict[bytes, list[Edge]] = {uncolored_canonical_key(n, []): []}
    for _ in range(m):
        nxt: dict[bytes, list[Edge]] = {}
        for es in level.values():
            present = set(es)
            for e in pairs:
                if e in present:
                    continue
                grown = sorted(es + [e])
                nxt.setdefault(uncolored_canonical_key(n, grown), grown)
        level = nxt
    return list(level.values())


def generate_candidate_graphs(n: int, k: int = 2) -> list[ColoredGraph]:
    """Graphs with 2n-4+k edges and minimum degree 2, sorted by graph6.

    A vertex of degree at most one always carries a nontrivial flex, so the
    degree filter never discards a k-color-rigid graph.
    """
    if not 4 <= n <= MAX_BUILTIN_N:
        raise UnsupportedSize(f"built-in generation supports 4 <= n <= {MAX_BUILTIN_N}; use graph6 input")
    if k < 1:
        raise ValueError("k must be positive")
    m = 2 * n - 4 + k
    found = [es for es in graphs_with_edges(n, m) if _min_degree_ok(n, es)]
    return sorted((ColoredGraph.uncolored(n, es) for es in found), key=lambda g: encode_graph6(g.n, g.edges))


def read_graph6_file(path: str | os.PathLike) -> list[ColoredGraph]:
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith(">>"):
            continue
        n, edges = decode_graph6(line)
        out.append(ColoredGraph.uncolored(n, edges))
    return out


def restricted_growth_strings(m: int, k: int) -> Iterator[tuple[int, ...]]:
    """Surjective maps {0..m-1} -> {0..k-1} with first occurrences in increasing order.

    These are exactly the set partitions of the edges into k blocks, i.e.
    colorings modulo permutations of the colors.
    """
    if m == 0 or k < 1 or k > m:
        return
    c = [0] * m

    def rec(i: int, top: int) -> Iterator[tuple[int, ...]]:
        if i == m:
            if top + 1 == k:
                yield tuple(c)
            return
        # not enough positions left to introduce the missing colors
        if k - 1 - top > m - i:
            return
        for col in range(min(top + 2, k)):
            c[i] = col
            yield from rec(i + 1, max(top, col))

    yield from rec(1, 0)


def _rgs_normalize(c: Sequence[int]) -> tuple[int, ...]:
    relabel: dict[int, int] = {}
    return tuple(relabel.setdefault(x, len(relabel)) for x in c)


def _edge_permutations(g: ColoredGraph) -> list[list[int]]:
    index = {e: i for i, e in enumerate(g.edges)}
    perms = []
    for sigma in automorphisms(g):
        perm = [index[norm_edge(sigma[u - 1], sigma[v - 1])] for u, v in g.edges]
        if perm != list(range(g.m)):
            perms.append(perm)
    return perms


def enumerate_colorings(g: ColoredGraph, k: int) -> Iterator[ColoredGraph]:
    """Surjective k-colorings of g, one per isomorphism class.

    A coloring is kept iff its restricted growth string is minimal in its
    orbit under the automorphisms of g.
    """
    if k > g.m:
        return
    perms = _edge_permutations(g)
    for c in restricted_growth_strings(g.m, k):
        minimal = True
        for perm in perms:
            image = [0] * g.m
            for i, j in enumerate(perm):
                image[j] = c[i]
            if _rgs_normalize(image) < c:
                minimal = False
                break
        if minimal:
            yield g.with_colors([x + 1 for x in c])


@dataclass
class EnumerationJob:
    n: int
    k: int = 2
    graphs: str | None = None
    seed: int = 0
    jobs: int = 1
    output: str | None = None
    bound: int = DEFAULT_BOUND
    mode: Mode = "exhaustive"

    def __post_init__(self) -> None:
        if self.n < 4:
            raise ValueError("n must be at least 4")
        if self.k < 2:
            raise ValueError("k must be at least 2")

    def candidates(self) -> list[ColoredGraph]:
        if self.graphs is None:
            return generate_candidate_graphs(self.n, self.k)
        want = 2 * self.n - 4 + self.k
        gs = [g for g in read_graph6_file(self.graphs) if g.n == self.n]
        bad = [g for g in gs if g.m != want]
        if bad:
            raise ValueError(f"graph6 input has a graph with {bad[0].m} edges, expected {want}")
        return sorted(gs, key=lambda g: encode_graph6(g.n, g.edges))


@dataclass
class GraphRecord:
    graph6: str
    n: int
    k: int
    mode: Mode
    seed: int
    colorings: int = 0
    rigid: int = 0
    retried: int = 0
    predicate_disagreements: int = 0
    status: Literal["done", "pending"] = "pending"

    def __post_init__(self) -> None:
        if self.rigid > self.colorings:
            raise ValueError("rigid count exceeds colorings enumerated")

    def matches(self, job: EnumerationJob) -> bool:
        return (self.n, self.k, self.mode, self.seed) == (job.n, job.k, job.mode, job.seed)

    def to_line(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_line(cls, line: str) -> GraphRecord:
        return cls(**json.loads(line))


def rigid_verdict(g: ColoredGraph, seed: int, bound: int = DEFAULT_BOUND) -> tuple[bool, bool]:
    """(minimally angle-rigid, needed a retry).

    A negative first attempt is retried with three fresh seeds and a doubled,
    escalating coordinate bound before it is accepted.
    """
    if g.m != target_rank(g):
        return False, False
    if generic_rank(g, seed, attempts=1, bound=bound)[0] == g.m:
        return True, False
    again = generic_rank(g, derive_seed(seed, "retry"), attempts=3, bound=2 * bound, escalate=True)
    return again[0] == g.m, True


def _graph_task(args: tuple[ColoredGraph, int, int, Mode, int, int]) -> GraphRecord:
    g, k, seed, mode, bound, _ = args
    g6 = encode_graph6(g.n, g.edges)
    base = derive_seed(seed, g6, k)
    rec = GraphRecord(g6, g.n, k, mode, seed)
    # a rigid coloring needs rank R(G,p) = 2n-3, since rank R(G,c,p) <= rank R(G,p) + k - 1
    rigid_underlying = r2_rank(g.edges) == 2 * g.n - 3
    for i, h in enumerate(enumerate_colorings(g, k)):
        rec.colorings += 1
        ok = False
        if rigid_underlying:
            ok, retried = rigid_verdict(h, derive_seed(base, i), bound)
            rec.retried += retried
        if k == 2 and ok != two_color_rigid_predicate(h):
            rec.predicate_disagreements += 1
        rec.rigid += ok
        if ok and mode == "existence":
            break
    rec.status = "done"
    return rec


def _load_resume(path: Path, job: EnumerationJob) -> dict[str, GraphRecord]:
    done: dict[str, GraphRecord] = {}
    if not path.exists():
        return done
    for line in path.read_text().splitlines():
        try:
            rec = GraphRecord.from_line(line)
        except (ValueError, TypeError, KeyError):
            continue  # torn final line from an interrupted run
        if rec.status == "done" and rec.matches(job):
            done[rec.graph6] = rec
    return done


def run_job(job: EnumerationJob, resume: str | os.PathLike | None = None) -> list[GraphRecord]:
    """Per-graph records in graph6 order; finished records in ``resume`` are reused
    and new ones are appended to it as they complete."""
    graphs = job.candidates()
    sink_path = Path(resume) if resume else (Path(job.output) if job.output else None)
    done = _load_resume(sink_path, job) if resume else {}
    todo = [g for g in graphs if encode_graph6(g.n, g.edges) not in done]
    tasks = [(g, job.k, job.seed, job.mode, job.bound, i) for i, g in enumerate(todo)]
    sink = sink_path.open("a" if resume else "w") if sink_path else None
    if sink and resume and sink_path.stat().st_size:
        with sink_path.open("rb") as fh:
            fh.seek(-1, os.SEEK_END)
            if fh.read(1) != b"\n":
                sink.write("\n")
    try:
        if job.jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=job.jobs) as pool:
                results = pool.map(_graph_task, tasks, chunksize=1)
                for rec in results:
                    done[rec.graph6] = rec
                    if sink:
                        sink.write(rec.to_line() + "\n")
                        sink.flush()
        else:
            for t in tasks:
                rec = _graph_task(t)
                done[rec.graph6] = rec
                if sink:
                    sink.write(rec.to_line() + "\n")
                    sink.flush()
    finally:
        if sink:
            sink.close()
    return [done[encode_graph6(g.n, g.edges)] for g in graphs]


@dataclass(frozen=True)
class SummaryRow:
    n: int
    k: int
    graphs: int
    k_color_rigid: int
    rigid_colored_total: int | None
    min_maps: int | None
    max_maps: int | None

    def as_tuple(self) -> tuple:
        return (self.n, self.k, self.graphs, self.k_color_rigid,
                self.rigid_colored_total, self.min_maps, self.max_maps)


def summarize(n: int, k: int, records: Sequence[GraphRecord]) -> SummaryRow:
    rigid_graphs = [r for r in records if r.rigid > 0]
    exhaustive = all(r.mode == "exhaustive" for r in records)
    counts = [r.rigid for r in rigid_graphs]
    return SummaryRow(
        n, k, len(records), len(rigid_graphs),
        sum(r.rigid for r in records) if exhaustive else None,
        min(counts) if exhaustive and counts else None,
        max(counts) if exhaustive and counts else None,
    )


def count_k_color_rigid(n: int, k: int, job: EnumerationJob | None = None,
                        resume: str | None = None) -> tuple[SummaryRow, list[GraphRecord]]:
    if job is None:
        job = EnumerationJob(n, k, mode="exhaustive" if k == 2 else "existence")
    if (job.n, job.k) != (n, k):
        raise ValueError("job parameters do not match (n, k)")
    records = run_job(job, resume)
    return summarize(n, k, records), records


def per_graph_coloring_stats(n: int, k: int = 2, seed: int = 0, jobs: int = 1) -> tuple[int, int]:
    """(min, max) number of rigid k-colorings over k-color-rigid graphs."""
    row, _ = count_k_color_rigid(n, k, EnumerationJob(n, k, seed=seed, jobs=jobs))
    if row.min_maps is None or row.max_maps is None:
        raise ValueError(f"no {k}-color-rigid graphs on {n} vertices")
    return row.min_maps, row.max_maps


def summary_csv(rows: Iterable[SummaryRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow(["" if x is None else x for x in row.as_tuple()])
    return buf.getvalue()


@dataclass
class Discrepancy:
    graph6: str
    colored_edges: list[tuple[int, int, int]]
    transversal: bool
    rigid: bool
    seeds: list[int] = field(default_factory=list)

    def to_line(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def conjecture_scan(n: int, k: int, job: EnumerationJob | None = None,
                    escalations: int = 3) -> list[Discrepancy]:
    """Colored graphs where the rank verdict and the transversal property disagree.

    Each candidate disagreement is re-tested with ``escalations`` further
    seeds (and growing coordinate bounds) before it is reported.
    """
    job = job or EnumerationJob(n, k)
    out = []
    for g in job.candidates():
        g6 = encode_graph6(g.n, g.edges)
        base = derive_seed(job.seed, "scan", g6, k)
        for i, h in enumerate(enumerate_colorings(g, k)):
            # looked up at call time so the oracle can be swapped in tests
            transversal = combinatorics.has_transversal_property(h)
            s = derive_seed(base, i)
            rigid = rigid_verdict(h, s, job.bound)[0]
            seeds = [s]
            bound = job.bound
            for j in range(escalations):
                if rigid == transversal:
                    break
                bound *= 2
                s = derive_seed(base, i, "escalate", j)
                seeds.append(s)
                rigid = rigid_verdict(h, s, bound)[0]
            if rigid != transversal:
                out.append(Discrepancy(g6, h.colored_edges(), transversal, rigid, seeds))
    return out
