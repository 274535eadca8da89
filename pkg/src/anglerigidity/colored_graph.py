"""Edge-colored graphs, their canonical forms, and angle sets.

Vertices are labeled ``1..n``.  An edge is a sorted pair ``(u, v)`` with
``u < v``.  Colors are positive integers and a valid coloring uses exactly the
colors ``1..k``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

Edge = tuple[int, int]


class InvalidColoredGraph(ValueError):
    pass


class CyclicAngleSet(ValueError):
    pass


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class ColoredGraph:
    """A simple graph on vertices 1..n with a color attached to every edge.

    Edges are stored sorted; ``colors[i]`` is the color of ``edges[i]``.  The
    constructor only normalizes; call :func:`validate` (or use
    :meth:`from_edges`) to check the invariants.
    """

    n: int
    edges: tuple[Edge, ...]
    colors: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.edges) != len(self.colors):
            raise InvalidColoredGraph("edges and colors differ in length")
        pairs = sorted(
            (norm_edge(int(u), int(v)), int(c)) for (u, v), c in zip(self.edges, self.colors)
        )
        object.__setattr__(self, "edges", tuple(e for e, _ in pairs))
        object.__setattr__(self, "colors", tuple(c for _, c in pairs))

    @classmethod
    def from_edges(cls, n: int, colored_edges: Iterable[Sequence[int]]) -> ColoredGraph:
        """Build and validate from ``(u, v, color)`` triples (color defaults to 1)."""
        edges, colors = [], []
        for item in colored_edges:
            u, v, *rest = item
            edges.append((u, v))
            colors.append(rest[0] if rest else 1)
        g = cls(n, tuple(edges), tuple(colors))
        problem = validate(g)
        if problem is not None:
            raise InvalidColoredGraph(problem)
        return g

    @classmethod
    def uncolored(cls, n: int, edges: Iterable[Edge]) -> ColoredGraph:
        edges = tuple(edges)
        return cls.from_edges(n, [(u, v, 1) for u, v in edges])

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def k(self) -> int:
        return len(set(self.colors))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def color_of(self, e: Edge) -> int:
        e = norm_edge(*e)
        try:
            return self.colors[self.edges.index(e)]
        except ValueError:
            raise KeyError(f"{e} is not an edge") from None

    def color_classes(self) -> dict[int, list[Edge]]:
        classes: dict[int, list[Edge]] = {}
        for e, c in zip(self.edges, self.colors):
            classes.setdefault(c, []).append(e)
        return dict(sorted(classes.items()))

    def neighbors(self, v: int) -> list[int]:
        return sorted({b if a == v else a for a, b in self.edges if v in (a, b)})

    def degree(self, v: int) -> int:
        return sum(v in e for e in self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self.edges

    def colored_edges(self) -> list[tuple[int, int, int]]:
        return [(u, v, c) for (u, v), c in zip(self.edges, self.colors)]

    def with_colors(self, colors: Sequence[int]) -> ColoredGraph:
        """Same edges (in stored order) with a new coloring."""
        return ColoredGraph(self.n, self.edges, tuple(colors))

    def relabel(self, mapping: Mapping[int, int], n: int | None = None) -> ColoredGraph:
        return ColoredGraph(
            self.n if n is None else n,
            tuple((mapping[u], mapping[v]) for u, v in self.edges),
            self.colors,
        )

    def recolor(self, mapping: Mapping[int, int]) -> ColoredGraph:
        return ColoredGraph(self.n, self.edges, tuple(mapping[c] for c in self.colors))


def validate(g: ColoredGraph) -> str | None:
    """Return None if ``g`` satisfies every invariant, else a description."""
    if g.n < 0:
        return f"negative vertex count {g.n}"
    seen = set()
    for u, v in g.edges:
        if u == v:
            return f"loop at vertex {u}"
        if not (1 <= u <= g.n and 1 <= v <= g.n):
            return f"edge ({u},{v}) has a vertex outside 1..{g.n}"
        if (u, v) in seen:
            return f"duplicate edge ({u},{v})"
        seen.add((u, v))
    used = set(g.colors)
    if any(c < 1 for c in used):
        return f"non-positive color in {sorted(used)}"
    if used and used != set(range(1, max(used) + 1)):
        missing = sorted(set(range(1, max(used) + 1)) - used)
        return f"color gap: colors {missing} unused"
    return None


def renumber_colors(g: ColoredGraph) -> ColoredGraph:
    """Map the used colors onto 1..k preserving their order."""
    mapping = {c: i for i, c in enumerate(sorted(set(g.colors)), start=1)}
    return g.recolor(mapping)


def chi(g: ColoredGraph, subset: Iterable[Edge]) -> int:
    """Number of distinct colors among the given edges."""
    lookup = dict(zip(g.edges, g.colors))
    found = set()
    for e in subset:
        e = norm_edge(*e)
        if e not in lookup:
            raise KeyError(f"{e} is not an edge")
        found.add(lookup[e])
    return len(found)


def subgraph_color_restrict(g: ColoredGraph, color: int) -> ColoredGraph:
    """The monochromatic subgraph (V, E_color)."""
    if color not in g.colors:
        raise KeyError(f"unknown color {color}")
    edges = tuple(e for e, c in zip(g.edges, g.colors) if c == color)
    return ColoredGraph(g.n, edges, (1,) * len(edges))


# ---------------------------------------------------------------------------
# canonical labeling


def _label_matrix(g: ColoredGraph, color_map: Mapping[int, int] | None = None) -> list[list[int]]:
    mat = [[0] * g.n for _ in range(g.n)]
    for (u, v), c in zip(g.edges, g.colors):
        lab = color_map[c] if color_map is not None else c
        mat[u - 1][v - 1] = mat[v - 1][u - 1] = lab
    return mat


def _refine(mat: list[list[int]], cells: list[list[int]]) -> list[list[int]]:
    n = len(mat)
    while True:
        index = {}
        for ci, cell in enumerate(cells):
            for v in cell:
                index[v] = ci
        new: list[list[int]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new.append(cell)
                continue
            sig = {
                v: tuple(sorted((index[w], mat[v][w]) for w in range(n) if mat[v][w]))
                for v in cell
            }
            keys = sorted(set(sig.values()))
            if len(keys) > 1:
                changed = True
            for key in keys:
                new.append([v for v in cell if sig[v] == key])
        cells = new
        if not changed:
            return cells


def _twin_representatives(mat: list[list[int]], cell: list[int]) -> list[int]:
    # swapping twins is an automorphism fixing the partition, so one branch per twin class
    n = len(mat)
    reps: list[int] = []
    for v in cell:
        if not any(
            all(mat[v][w] == mat[r][w] for w in range(n) if w != v and w != r) for r in reps
        ):
            reps.append(v)
    return reps


def canonical_labeling(mat: list[list[int]]) -> tuple[tuple[int, ...], list[int]]:
    """Minimum upper-triangle code over individualization-refinement leaves.

    ``mat`` is a symmetric matrix of edge labels (0 = no edge), 0-based.
    Returns the code and the vertex order realizing it.
    """
    n = len(mat)
    best: list = [None, None]

    def leaf(cells: list[list[int]]) -> None:
        order = [c[0] for c in cells]
        code = tuple(mat[order[i]][order[j]] for i in range(n) for j in range(i + 1, n))
        if best[0] is None or code < best[0]:
            best[0], best[1] = code, order

    def search(cells: list[list[int]]) -> None:
        cells = _refine(mat, cells)
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            leaf(cells)
            return
        cell = cells[target]
        for v in _twin_representatives(mat, cell):
            rest = [w for w in cell if w != v]
            search(cells[:target] + [[v], rest] + cells[target + 1 :])

    if n == 0:
        return (), []
    search([list(range(n))])
    return best[0], best[1]


@dataclass(frozen=True)
class CanonicalForm:
    """Isomorphism-class key; vertex/color relabelings map ``g`` onto the canonical graph."""

    key: bytes
    vertex_map: Mapping[int, int] = field(compare=False, hash=False)
    color_map: Mapping[int, int] = field(compare=False, hash=False)


def _encode_key(n: int, k: int, code: Sequence[int]) -> bytes:
    return bytes([n, k]) + bytes(code)


def canonical_form(g: ColoredGraph) -> CanonicalForm:
    """Canonical form under vertex permutations composed with color permutations."""
    colors = sorted(set(g.colors))
    best = None
    for perm in itertools.permutations(range(1, len(colors) + 1)):
        cmap = dict(zip(colors, perm))
        code, order = canonical_labeling(_label_matrix(g, cmap))
        if best is None or code < best[0]:
            best = (code, order, cmap)
    assert best is not None
    code, order, cmap = best
    vmap = {old + 1: new + 1 for new, old in enumerate(order)}
    return CanonicalForm(_encode_key(g.n, len(colors), code), vmap, cmap)


def canonical_graph(g: ColoredGraph) -> ColoredGraph:
    form = canonical_form(g)
    return g.relabel(form.vertex_map).recolor(form.color_map)


def uncolored_canonical_key(n: int, edges: Iterable[Edge]) -> bytes:
    g = ColoredGraph(n, tuple(edges), (1,) * len(tuple(edges)))
    code, _ = canonical_labeling(_label_matrix(g))
    return _encode_key(n, 1, code)


def automorphisms(g: ColoredGraph, respect_colors: bool = False) -> list[tuple[int, ...]]:
    """All vertex permutations preserving edges (and colors if asked).

    Each permutation ``p`` is a tuple with ``p[v-1]`` the image of ``v``.
    """
    mat = _label_matrix(g) if respect_colors else [
        [1 if x else 0 for x in row] for row in _label_matrix(g)
    ]
    n = g.n
    cells = _refine(mat, [list(range(n))])
    cell_of = {v: i for i, c in enumerate(cells) for v in c}
    image = [-1] * n
    used = [False] * n
    out: list[tuple[int, ...]] = []

    def extend(v: int) -> None:
        if v == n:
            out.append(tuple(x + 1 for x in image))
            return
        for w in cells[cell_of[v]]:
            if used[w]:
                continue
            if all(mat[v][u] == mat[w][image[u]] for u in range(v)):
                image[v] = w
                used[w] = True
                extend(v + 1)
                used[w] = False
        image[v] = -1

    extend(0)
    return out


# ---------------------------------------------------------------------------
# angle sets


@dataclass(frozen=True)
class AngleSet:
    """Pairs of edges whose angle is fixed.

    ``edges`` is the vertex set of the angle graph; it contains every edge that
    appears in an angle and may also hold isolated edges.  ``n`` is the number
    of vertices of the ambient graph.
    """

    angles: tuple[tuple[Edge, Edge], ...]
    edges: tuple[Edge, ...] = ()
    n: int = 0

    def __post_init__(self) -> None:
        angles = tuple((norm_edge(*a), norm_edge(*b)) for a, b in self.angles)
        for a, b in angles:
            if a == b:
                raise ValueError(f"angle pairs the edge {a} with itself")
        support = set(norm_edge(*e) for e in self.edges)
        for a, b in angles:
            support.update((a, b))
        n = max([self.n] + [v for e in support for v in e])
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "edges", tuple(sorted(support)))
        object.__setattr__(self, "n", n)

    def vertex_support(self) -> set[int]:
        return {v for a, b in self.angles for v in (*a, *b)}

    def edge_support(self) -> set[Edge]:
        return {e for pair in self.angles for e in pair}

    def direction_graph(self) -> tuple[set[int], set[Edge]]:
        return self.vertex_support(), self.edge_support()

    def angle_graph(self) -> tuple[tuple[Edge, ...], tuple[tuple[Edge, Edge], ...]]:
        return self.edges, self.angles

    @property
    def acyclic(self) -> bool:
        return not g2_has_cycle(self)


class _DisjointSet:
    def __init__(self, items: Iterable) -> None:
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def g2_has_cycle(a: AngleSet) -> bool:
    """True iff the angle graph (parallel angles count as a 2-cycle) has a cycle."""
    ds = _DisjointSet(a.edges)
    return any(not ds.union(x, y) for x, y in a.angles)


def to_angle_set(g: ColoredGraph) -> AngleSet:
    """One star per color class, centered at the class's least edge.

    Angles are stored as ``(leaf, center)``.
    """
    angles = []
    for _, cls in g.color_classes().items():
        center = min(cls)
        angles.extend((leaf, center) for leaf in sorted(cls) if leaf != center)
    return AngleSet(tuple(angles), g.edges, g.n)


def from_angle_set(a: AngleSet) -> ColoredGraph:
    """Colored graph whose color classes are the components of the angle graph."""
    if g2_has_cycle(a):
        raise CyclicAngleSet("angle graph has a cycle")
    ds = _DisjointSet(a.edges)
    for x, y in a.angles:
        ds.union(x, y)
    roots = sorted({ds.find(e) for e in a.edges})
    color = {r: i for i, r in enumerate(roots, start=1)}
    edges = tuple(a.edges)
    return ColoredGraph(a.n, edges, tuple(color[ds.find(e)] for e in edges))


# ---------------------------------------------------------------------------
# text formats


def format_colored_graph(g: ColoredGraph) -> str:
    lines = [f"{g.n} {g.k}"]
    lines += [f"{u} {v} {c}" for u, v, c in g.colored_edges()]
    return "\n".join(lines) + "\n"


def parse_colored_graph(text: str) -> ColoredGraph:
    """Parse the ``n k`` / ``u v c`` format; ``#`` starts a comment."""
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise InvalidColoredGraph("empty colored-graph file")
    try:
        header = [int(x) for x in rows[0]]
        body = [[int(x) for x in r] for r in rows[1:]]
    except ValueError as exc:
        raise InvalidColoredGraph(f"non-integer token: {exc}") from None
    if len(header) != 2:
        raise InvalidColoredGraph("header must be 'n k'")
    n, k = header
    for r in body:
        if len(r) != 3:
            raise InvalidColoredGraph(f"edge line needs 'u v c', got {r}")
    g = ColoredGraph.from_edges(n, body)
    if g.k != k:
        raise InvalidColoredGraph(f"header says k={k} but {g.k} colors are used")
    return g


def colored_graph_to_json(g: ColoredGraph) -> dict:
    return {"n": g.n, "k": g.k, "edges": [list(t) for t in g.colored_edges()]}


def colored_graph_from_json(obj: Mapping) -> ColoredGraph:
    g = ColoredGraph.from_edges(int(obj["n"]), obj["edges"])
    if "k" in obj and g.k != int(obj["k"]):
        raise InvalidColoredGraph(f"k={obj['k']} disagrees with the {g.k} colors used")
    return g


def read_colored_graphs(text: str) -> Iterator[ColoredGraph]:
    """Either one ``n k`` file or an NDJSON stream of colored graphs."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        for line in text.splitlines():
            if line.strip():
                yield colored_graph_from_json(json.loads(line))
    else:
        yield parse_colored_graph(text)


def decode_graph6(s: str) -> tuple[int, list[Edge]]:
    """Decode a graph6 string into ``(n, edges)`` with 1-based vertices."""
    s = s.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<") :]
    data = [ord(ch) - 63 for ch in s]
    if not data or any(x < 0 or x > 63 for x in data):
        raise ValueError(f"not a graph6 string: {s!r}")
    if data[0] < 63:
        n, pos = data[0], 1
    elif len(data) > 1 and data[1] < 63:
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        pos = 4
    else:
        n = 0
        for x in data[2:8]:
            n = (n << 6) | x
        pos = 8
    bits = []
    for x in data[pos:]:
        bits.extend((x >> (5 - i)) & 1 for i in range(6))
    need = n * (n - 1) // 2
    if len(bits) < need:
        raise ValueError(f"graph6 string too short for n={n}")
    edges = []
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                edges.append((i + 1, j + 1))
            idx += 1
    return n, sorted(edges)


def encode_graph6(n: int, edges: Iterable[Edge]) -> str:
    es = {norm_edge(*e) for e in edges}
    bits = [1 if (i + 1, j + 1) in es else 0 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    if n < 63:
        head = [n]
    elif n < 258048:
        head = [63, (n >> 12) & 63, (n >> 6) & 63, n & 63]
    else:
        head = [63, 63] + [(n >> (6 * (5 - i))) & 63 for i in range(6)]
    body = [int("".join(map(str, bits[i : i + 6])), 2) for i in range(0, len(bits), 6)]
    return "".join(chr(x + 63) for x in head + body)
