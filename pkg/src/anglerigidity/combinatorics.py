"""Count-matroid tools: the (2,3)-pebble game, colored Maxwell counts,
transversal conditions and the unique-circuit predicate for two colors."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .colored_graph import ColoredGraph, Edge, chi, norm_edge


class PebbleGame:
    """(2,3)-pebble game on a fixed vertex set; single use."""

    def __init__(self, vertices: Iterable[int]) -> None:
        self.pebbles = {v: 2 for v in vertices}
        self.out: dict[int, list[int]] = {v: [] for v in self.pebbles}
        self.accepted: list[Edge] = []

    def _gather(self, start: int, blocked: int) -> bool:
        parent = {start: None, blocked: None}
        stack = [start]
        while stack:
            x = stack.pop()
            for w in self.out[x]:
                if w in parent:
                    continue
                parent[w] = x
                if self.pebbles[w] > 0:
                    # reverse the path start -> ... -> w
                    self.pebbles[w] -= 1
                    self.pebbles[start] += 1
                    y = w
                    while y != start:
                        px = parent[y]
                        self.out[px].remove(y)
                        self.out[y].append(px)
                        y = px
                    return True
                stack.append(w)
        return False

    def add(self, u: int, v: int) -> bool:
        """Try to accept edge uv; True iff the accepted set stays (2,3)-sparse."""
        if u == v:
            return False
        while self.pebbles[u] < 2:
            if not self._gather(u, v):
                return False
        while self.pebbles[v] < 2:
            if not self._gather(v, u):
                return False
        self.out[u].append(v)
        self.pebbles[u] -= 1
        self.accepted.append(norm_edge(u, v))
        return True


def _vertices(edges: Sequence[Edge]) -> set[int]:
    return {v for e in edges for v in e}


def r2_rank(edges: Iterable[Edge]) -> int:
    """Rank in the generic planar rigidity matroid."""
    edges = list(edges)
    game = PebbleGame(_vertices(edges))
    return sum(game.add(u, v) for u, v in edges)


def is_independent(edges: Iterable[Edge]) -> bool:
    edges = list(edges)
    return r2_rank(edges) == len(edges)


def is_laman(n: int, edges: Iterable[Edge]) -> bool:
    """Minimally rigid on n vertices: 2n-3 edges and (2,3)-sparse."""
    edges = list(edges)
    return n >= 2 and len(edges) == 2 * n - 3 and is_independent(edges)


def is_basis(n: int, edges: Iterable[Edge]) -> bool:
    return is_laman(n, edges)


def maxwell_colored_check(g: ColoredGraph) -> tuple[Edge, ...] | None:
    """First subgraph violating |E(H)| <= 2|V(H)| + chi(H) - 4, or None.

    Only induced subgraphs need checking: adding an edge on the same vertex
    set never increases the slack.
    """
    for size in range(2, g.n + 1):
        for xs in itertools.combinations(g.vertices, size):
            xset = set(xs)
            h = [e for e in g.edges if e[0] in xset and e[1] in xset]
            if not h:
                continue
            spanned = len(_vertices(h))
            if len(h) > 2 * spanned + chi(g, h) - 4:
                return tuple(h)
    return None


def transversal_condition_global(g: ColoredGraph) -> tuple[Edge, ...] | None:
    """F = {e_1..e_k}, c(e_i) = i, with (E - F) + e_i a basis for every i."""
    classes = g.color_classes()
    edges = set(g.edges)
    for f in itertools.product(*classes.values()):
        rest = edges - set(f)
        if all(is_basis(g.n, rest | {e}) for e in f):
            return tuple(f)
    return None


def transversal_witness(g: ColoredGraph, color: int) -> tuple[Edge, ...] | None:
    """F_i: one edge of each other color with E - F_i a basis, or None."""
    classes = g.color_classes()
    others = [cls for c, cls in classes.items() if c != color]
    edges = set(g.edges)
    if len(edges) - len(others) != 2 * g.n - 3:
        return None
    for f in itertools.product(*others):
        if is_basis(g.n, edges - set(f)):
            return tuple(f)
    return None


def transversal_condition_per_color(g: ColoredGraph) -> dict[int, tuple[Edge, ...] | None]:
    return {c: transversal_witness(g, c) for c in g.color_classes()}


def has_transversal_property(g: ColoredGraph) -> bool:
    return all(transversal_witness(g, c) is not None for c in g.color_classes())


@dataclass(frozen=True)
class CircuitCertificate:
    edges: tuple[Edge, ...]
    colors: frozenset[int]
    stress_support: tuple[Edge, ...] | None = None


def circuit_edges(n: int, edges: Sequence[Edge]) -> tuple[Edge, ...] | None:
    """The unique R2-circuit of a spanning graph with corank exactly one."""
    edges = list(edges)
    if r2_rank(edges) != 2 * n - 3 or len(edges) != 2 * n - 2:
        return None
    return tuple(e for e in edges if is_independent([f for f in edges if f != e]))


def unique_circuit(g: ColoredGraph, cross_check_seed: int | None = None) -> CircuitCertificate | None:
    """Certificate for |E| = 2|V|-2 graphs containing exactly one R2-circuit.

    With ``cross_check_seed`` the circuit is compared with the support of the
    equilibrium stress at a random realization.
    """
    if g.m != 2 * g.n - 2:
        raise ValueError(f"need |E| = 2|V|-2 = {2 * g.n - 2}, got {g.m}")
    c = circuit_edges(g.n, g.edges)
    if c is None:
        return None
    lookup = dict(zip(g.edges, g.colors))
    support = None
    if cross_check_seed is not None:
        support = stress_support(g, cross_check_seed)
        if support != c:
            raise AssertionError(f"circuit {c} disagrees with stress support {support}")
    return CircuitCertificate(c, frozenset(lookup[e] for e in c), support)


def stress_support(g: ColoredGraph, seed: int) -> tuple[Edge, ...] | None:
    """Support of the unique bar-joint stress at a random realization (None if not unique)."""
    from . import exactla
    from .rigidity import bar_joint_matrix, random_realization

    p = random_realization(g, seed)
    basis = exactla.cokernel_basis(bar_joint_matrix(g, p))
    if len(basis) != 1:
        return None
    return tuple(e for e, w in zip(g.edges, basis[0]) if w != 0)


def two_color_rigid_predicate(g: ColoredGraph) -> bool:
    """|E| = 2|V|-2 with a unique R2-circuit that carries both colors."""
    if g.k != 2:
        raise ValueError(f"predicate needs exactly 2 colors, got {g.k}")
    if g.m != 2 * g.n - 2:
        return False
    cert = unique_circuit(g)
    return cert is not None and cert.colors == {1, 2}


def delete_vertex(n: int, edges: Iterable[Edge], v: int) -> tuple[int, list[Edge]]:
    """Remove v and shift the labels above it down by one."""
    shift = lambda x: x - 1 if x > v else x  # noqa: E731
    return n - 1, [norm_edge(shift(a), shift(b)) for a, b in edges if v not in (a, b)]


def laman_one_reduction_pair(n: int, edges: Sequence[Edge], v: int) -> tuple[int, int]:
    """A non-adjacent pair {x, y} in N(v) with G - v + xy Laman."""
    edges = [norm_edge(*e) for e in edges]
    if not is_laman(n, edges):
        raise ValueError("graph is not Laman")
    nbrs = sorted({a if b == v else b for a, b in edges if v in (a, b)})
    if len(nbrs) != 3:
        raise ValueError(f"vertex {v} has degree {len(nbrs)}, need 3")
    present = set(edges)
    for x, y in itertools.combinations(nbrs, 2):
        if (x, y) in present:
            continue
        m, reduced = delete_vertex(n, edges, v)
        shift = lambda z: z - 1 if z > v else z  # noqa: E731
        if is_laman(m, reduced + [norm_edge(shift(x), shift(y))]):
            return x, y
    raise RuntimeError(f"no Laman 1-reduction at vertex {v}")
