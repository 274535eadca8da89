"""Colored 0-/1-extensions, their reductions, construction sequences for the
two-color case, color swaps, and the color-swap determinant identity."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

from . import exactla
from .colored_graph import (
    ColoredGraph,
    Edge,
    InvalidColoredGraph,
    canonical_form,
    colored_graph_from_json,
    colored_graph_to_json,
    norm_edge,
    renumber_colors,
)
from .combinatorics import delete_vertex, two_color_rigid_predicate, unique_circuit
from .rigidity import Realization, angle_rigidity_matrix


class ExtensionError(ValueError):
    pass


@dataclass(frozen=True)
class ExtensionStep:
    """A vertex addition.

    ``attach`` is (x, y) for a 0-extension and (x, y, z) for a 1-extension,
    where xy is the removed edge; ``colors`` are the colors of the new edges
    in the same order.  The new vertex is created as ``new_vertex`` = n+1 and
    then moved to label ``position`` (later labels shift up by one), which
    undoes the downward relabeling of the matching reduction.
    """

    kind: Literal["zero", "one"]
    new_vertex: int
    attach: tuple[int, ...]
    colors: tuple[int, ...]
    removed_edge: Edge | None = None
    position: int | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "new_vertex": self.new_vertex,
               "attach": list(self.attach), "colors": list(self.colors)}
        if self.removed_edge is not None:
            out["removed_edge"] = list(self.removed_edge)
        if self.position is not None:
            out["position"] = self.position
        return out

    @classmethod
    def from_json(cls, obj: dict) -> ExtensionStep:
        removed = obj.get("removed_edge")
        return cls(obj["kind"], int(obj["new_vertex"]), tuple(obj["attach"]),
                   tuple(obj["colors"]), tuple(removed) if removed else None,
                   obj.get("position"))


def _check_colors(g: ColoredGraph, colors: Sequence[int]) -> None:
    allowed = set(g.colors)
    for c in colors:
        if c not in allowed:
            raise ExtensionError(f"color {c} is not a color of the graph {sorted(allowed)}")


def zero_extend(g: ColoredGraph, x: int, y: int, col_wx: int, col_wy: int) -> ColoredGraph:
    if x == y:
        raise ExtensionError("0-extension needs two distinct attachment vertices")
    if not (1 <= x <= g.n and 1 <= y <= g.n):
        raise ExtensionError("attachment vertex out of range")
    _check_colors(g, (col_wx, col_wy))
    w = g.n + 1
    return ColoredGraph(w, g.edges + ((x, w), (y, w)), g.colors + (col_wx, col_wy))


def one_extend_cp(
    g: ColoredGraph, xy: Edge, z: int, colors: tuple[int, int, int]
) -> ColoredGraph:
    """Remove xy, add w joined to x, y, z; colors are (c(wx), c(wy), c(wz))."""
    x, y = xy
    e = norm_edge(x, y)
    if e not in g.edges:
        raise ExtensionError(f"{e} is not an edge")
    if z in (x, y) or not 1 <= z <= g.n:
        raise ExtensionError(f"third attachment vertex {z} is invalid")
    _check_colors(g, colors)
    c_xy = g.color_of(e)
    if colors[0] != c_xy and colors[1] != c_xy:
        raise ExtensionError(f"not color-preserving: removed edge has color {c_xy}, new {colors}")
    w = g.n + 1
    keep = [(f, c) for f, c in zip(g.edges, g.colors) if f != e]
    new = [((x, w), colors[0]), ((y, w), colors[1]), ((z, w), colors[2])]
    return ColoredGraph(w, tuple(f for f, _ in keep + new), tuple(c for _, c in keep + new))


def apply_step(g: ColoredGraph, step: ExtensionStep) -> ColoredGraph:
    if step.new_vertex != g.n + 1:
        raise ExtensionError(f"step adds vertex {step.new_vertex}, expected {g.n + 1}")
    if step.kind == "zero":
        x, y = step.attach
        out = zero_extend(g, x, y, *step.colors)
    else:
        x, y, z = step.attach
        out = one_extend_cp(g, (x, y), z, tuple(step.colors))
    pos = step.new_vertex if step.position is None else step.position
    if not 1 <= pos <= step.new_vertex:
        raise ExtensionError(f"position {pos} out of range")
    if pos == step.new_vertex:
        return out
    mapping = {v: v + 1 if v >= pos else v for v in range(1, step.new_vertex)}
    mapping[step.new_vertex] = pos
    return out.relabel(mapping)


def _shift(v: int, removed: int) -> int:
    return v - 1 if v > removed else v


def zero_reduce(g: ColoredGraph, v: int) -> tuple[ColoredGraph, ExtensionStep]:
    """Delete a degree-2 vertex; labels above it shift down.

    Returns the reduced graph and the step that re-extends it.
    """
    nbrs = g.neighbors(v)
    if len(nbrs) != 2:
        raise ExtensionError(f"vertex {v} has degree {len(nbrs)}, need 2")
    x, y = nbrs
    cols = (g.color_of((v, x)), g.color_of((v, y)))
    n, _ = delete_vertex(g.n, g.edges, v)
    keep = [(e, c) for e, c in zip(g.edges, g.colors) if v not in e]
    reduced = ColoredGraph(
        n,
        tuple(norm_edge(_shift(a, v), _shift(b, v)) for (a, b), _ in keep),
        tuple(c for _, c in keep),
    )
    return reduced, ExtensionStep("zero", n + 1, (_shift(x, v), _shift(y, v)), cols, None, v)


def one_reduce_cp(
    g: ColoredGraph, v: int, xy: Edge, color: int
) -> tuple[ColoredGraph, ExtensionStep]:
    """Delete a degree-3 vertex v and add the edge xy (x, y in N(v)) with ``color``.

    ``color`` must be the color of vx or of vy.
    """
    nbrs = g.neighbors(v)
    if len(nbrs) != 3:
        raise ExtensionError(f"vertex {v} has degree {len(nbrs)}, need 3")
    x, y = xy
    if x not in nbrs or y not in nbrs or x == y:
        raise ExtensionError(f"{xy} is not a pair of neighbors of {v}")
    if g.has_edge(x, y):
        raise ExtensionError(f"{norm_edge(x, y)} is already an edge")
    (z,) = [u for u in nbrs if u not in (x, y)]
    cols = (g.color_of((v, x)), g.color_of((v, y)), g.color_of((v, z)))
    if color not in cols[:2]:
        raise ExtensionError("reduction would not be color-preserving")
    n, _ = delete_vertex(g.n, g.edges, v)
    keep = [(e, c) for e, c in zip(g.edges, g.colors) if v not in e]
    keep.append((norm_edge(x, y), color))
    reduced = ColoredGraph(
        n,
        tuple(norm_edge(_shift(a, v), _shift(b, v)) for (a, b), _ in keep),
        tuple(c for _, c in keep),
    )
    sx, sy, sz = _shift(x, v), _shift(y, v), _shift(z, v)
    return reduced, ExtensionStep("one", n + 1, (sx, sy, sz), cols, norm_edge(sx, sy), v)


K4_EDGES = tuple(itertools.combinations(range(1, 5), 2))


def k4_base_cases() -> list[ColoredGraph]:
    """Representatives of the bichromatic colorings of K4 up to symmetry and color swap."""
    seen = {}
    for bits in itertools.product((1, 2), repeat=6):
        if len(set(bits)) < 2:
            continue
        g = ColoredGraph(4, K4_EDGES, bits)
        seen.setdefault(canonical_form(g).key, g)
    return [seen[key] for key in sorted(seen)]


@dataclass
class ConstructionSequence:
    base: ColoredGraph
    steps: list[ExtensionStep] = field(default_factory=list)
    final: ColoredGraph | None = None

    def replay(self) -> ColoredGraph:
        g = self.base
        for step in self.steps:
            g = apply_step(g, step)
        return g

    def to_json(self) -> dict:
        out = {"base": colored_graph_to_json(self.base),
               "steps": [s.to_json() for s in self.steps]}
        if self.final is not None:
            out["final"] = colored_graph_to_json(self.final)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, obj: dict) -> ConstructionSequence:
        final = obj.get("final")
        return cls(
            colored_graph_from_json(obj["base"]),
            [ExtensionStep.from_json(s) for s in obj["steps"]],
            colored_graph_from_json(final) if final else None,
        )


def _in_class(g: ColoredGraph) -> bool:
    return g.k == 2 and set(g.colors) == {1, 2} and two_color_rigid_predicate(g)


def reduction_candidates(g: ColoredGraph):
    """0-reductions first, then color-preserving 1-reductions at degree-3
    vertices off the circuit before those on it; lexicographic within each."""
    for v in g.vertices:
        if g.degree(v) == 2:
            yield lambda v=v: zero_reduce(g, v)
    cert = unique_circuit(g)
    on_circuit = {u for e in cert.edges for u in e} if cert else set()
    deg3 = [v for v in g.vertices if g.degree(v) == 3]
    ordered = [v for v in deg3 if v not in on_circuit] + [v for v in deg3 if v in on_circuit]
    for v in ordered:
        for x, y in itertools.combinations(g.neighbors(v), 2):
            if g.has_edge(x, y):
                continue
            for color in sorted({g.color_of((v, x)), g.color_of((v, y))}):
                yield lambda v=v, x=x, y=y, color=color: one_reduce_cp(g, v, (x, y), color)


def construct_sequence(g: ColoredGraph) -> ConstructionSequence:
    """Build g from a bichromatic K4 by 0-extensions and color-preserving 1-extensions.

    Works backwards, keeping every intermediate graph inside the class of
    graphs with |E| = 2|V|-2 and a unique bichromatic R2-circuit.
    """
    if not _in_class(g):
        raise ExtensionError("graph does not have a unique bichromatic R2-circuit")
    steps: list[ExtensionStep] = []
    cur = g
    while cur.n > 4:
        for candidate in reduction_candidates(cur):
            reduced, step = candidate()
            if _in_class(reduced):
                cur = reduced
                steps.append(step)
                break
        else:
            raise RuntimeError(f"no admissible reduction of {cur}")
    if cur.m != 6:
        raise RuntimeError("reduction did not end at K4")
    return ConstructionSequence(cur, steps[::-1], g)


def replays_to(seq: ConstructionSequence, g: ColoredGraph) -> bool:
    return canonical_form(seq.replay()) == canonical_form(g)


def color_swap(g: ColoredGraph, e: Edge, target: int) -> ColoredGraph:
    """Recolor the single edge e to ``target``; colors are renumbered if one vanishes."""
    e = norm_edge(*e)
    current = g.color_of(e)
    if current == target:
        raise ExtensionError(f"edge {e} already has color {target}")
    if target < 1:
        raise ExtensionError("colors are positive")
    colors = tuple(target if f == e else c for f, c in zip(g.edges, g.colors))
    return renumber_colors(ColoredGraph(g.n, g.edges, colors))


@dataclass(frozen=True)
class SwapIdentity:
    det_original: Fraction
    det_swapped: Fraction
    det_deleted: Fraction
    sqlen: Fraction
    k: int

    @property
    def holds(self) -> bool:
        rhs = self.det_swapped + (-1) ** self.k * self.sqlen * self.det_deleted
        return self.det_original == rhs


def _pinned_square(
    g: ColoredGraph, colors: Sequence[int], ncolors: int, p: Realization,
    order: Sequence[int], pinned: tuple[int, int],
) -> list[list]:
    """Rows of [R(G,p) | M] in ``order`` with an explicit number of color
    columns, minus the four columns of the pinned vertices."""
    plain = ColoredGraph(g.n, g.edges, tuple(1 for _ in g.edges))
    full = angle_rigidity_matrix(plain, p)
    drop = {2 * (v - 1) + t for v in pinned for t in (0, 1)}
    out = []
    for r in order:
        left = [x for c, x in enumerate(full[r][: 2 * g.n]) if c not in drop]
        block = [0] * ncolors
        block[colors[r] - 1] = full[r][2 * g.n]
        out.append(left + block)
    return out


def swap_determinant_identity(
    g: ColoredGraph, e: Edge, p: Realization, pinned: tuple[int, int]
) -> SwapIdentity:
    """Exact determinants of the pinned square matrices for (G,c), (G,c*), (G-e,c').

    c* moves e from color k to k-1 and keeps k color columns; c' merges color
    k into k-1 and drops e.  Row e comes first and the remaining rows keep
    their relative order in all three matrices.
    """
    e = norm_edge(*e)
    k = g.k
    a, b = pinned
    if g.n < 4 or k < 3:
        raise ValueError("need n >= 4 and at least 3 colors")
    if g.m != 2 * g.n - 4 + k:
        raise ValueError(f"need |E| = 2n-4+k = {2 * g.n - 4 + k}, got {g.m}")
    if g.color_of(e) != k:
        raise ValueError(f"edge {e} must have the last color {k}")
    if a == b or a in e or b in e or not (1 <= a <= g.n and 1 <= b <= g.n):
        raise ValueError("pinned vertices must be distinct vertices avoiding e")
    i = g.edges.index(e)
    rest = [j for j in range(g.m) if j != i]
    starred = tuple(k - 1 if j == i else c for j, c in enumerate(g.colors))
    merged = tuple(k - 1 if c == k else c for c in g.colors)
    s1 = _pinned_square(g, g.colors, k, p, [i] + rest, pinned)
    s2 = _pinned_square(g, starred, k, p, [i] + rest, pinned)
    s3 = _pinned_square(g, merged, k - 1, p, rest, pinned)
    x, y = e
    sq = Fraction((p[x][0] - p[y][0]) ** 2 + (p[x][1] - p[y][1]) ** 2)
    return SwapIdentity(exactla.determinant(s1), exactla.determinant(s2), exactla.determinant(s3), sq, k)
