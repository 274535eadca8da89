"""Angle-rigidity matrices, trivial flexes, stresses and rank verdicts."""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import exactla
from .colored_graph import ColoredGraph, Edge, norm_edge, subgraph_color_restrict
from .exactla import FieldMode, Scalar

DEFAULT_BOUND = 10**6
DEFAULT_ATTEMPTS = 3

Point = tuple[Scalar, Scalar]


class DegenerateRealization(ValueError):
    pass


class NotAStress(ValueError):
    pass


def derive_seed(*parts: object) -> int:
    """Stable 63-bit seed from arbitrary parts (independent of PYTHONHASHSEED)."""
    digest = hashlib.sha256("/".join(map(str, parts)).encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


@dataclass(frozen=True)
class Realization:
    """Points indexed by vertex: ``points[v - 1]`` is the position of ``v``."""

    points: tuple[Point, ...]
    mode: FieldMode = "exact"

    def __getitem__(self, v: int) -> Point:
        return self.points[v - 1]

    def __len__(self) -> int:
        return len(self.points)

    @classmethod
    def exact(cls, points: Iterable[Sequence]) -> Realization:
        return cls(tuple((Fraction(x), Fraction(y)) for x, y in points), "exact")

    @classmethod
    def floating(cls, points: Iterable[Sequence]) -> Realization:
        return cls(tuple((float(x), float(y)) for x, y in points), "float")

    def rotated(self) -> Realization:
        """Rotation by 90 degrees anticlockwise."""
        return Realization(tuple((-y, x) for x, y in self.points), self.mode)

    def check(self, g: ColoredGraph) -> None:
        if len(self.points) != g.n:
            raise DegenerateRealization(f"realization has {len(self.points)} points, graph {g.n}")
        for u, v in g.edges:
            if self[u] == self[v]:
                raise DegenerateRealization(f"edge ({u},{v}) has coincident endpoints")


def random_realization(g: ColoredGraph, seed: int, bound: int = DEFAULT_BOUND) -> Realization:
    """Integer points in [-bound, bound]^2 with all 2n coordinates distinct."""
    if bound < g.n * g.n:
        raise ValueError(f"bound {bound} below n^2 = {g.n * g.n}")
    rng = random.Random(seed)
    coords = rng.sample(range(-bound, bound + 1), 2 * g.n)
    return Realization(tuple((coords[2 * i], coords[2 * i + 1]) for i in range(g.n)), "exact")


def _sqdist(p: Point, q: Point) -> Scalar:
    dx, dy = p[0] - q[0], p[1] - q[1]
    return dx * dx + dy * dy


def bar_joint_matrix(g: ColoredGraph, p: Realization) -> list[list[Scalar]]:
    """The |E| x 2|V| rigidity matrix R(G, p)."""
    p.check(g)
    zero = 0.0 if p.mode == "float" else 0
    rows = []
    for u, v in g.edges:
        row = [zero] * (2 * g.n)
        dx, dy = p[u][0] - p[v][0], p[u][1] - p[v][1]
        row[2 * (u - 1)], row[2 * (u - 1) + 1] = dx, dy
        row[2 * (v - 1)], row[2 * (v - 1) + 1] = -dx, -dy
        rows.append(row)
    return rows


def num_color_columns(g: ColoredGraph) -> int:
    return max(g.colors, default=0)


def angle_rigidity_matrix(g: ColoredGraph, p: Realization) -> list[list[Scalar]]:
    """[R(G,p) | M(G,c,p)] with M holding -|p_u - p_v|^2 in the edge's color column."""
    left = bar_joint_matrix(g, p)
    k = num_color_columns(g)
    zero = 0.0 if p.mode == "float" else 0
    out = []
    for row, (u, v), c in zip(left, g.edges, g.colors):
        block = [zero] * k
        block[c - 1] = -_sqdist(p[u], p[v])
        out.append(row + block)
    return out


def target_rank(g: ColoredGraph) -> int:
    return 2 * g.n + g.k - 4


def trivial_flex_vectors(g: ColoredGraph, p: Realization) -> list[list[Scalar]]:
    """Translations, rotation and scaling as kernel vectors of the angle-rigidity matrix.

    Order: x-translation, y-translation, (p-perp, 0), (p, 1).
    """
    if len(set(p.points)) < 2:
        raise DegenerateRealization("all points coincide")
    k = num_color_columns(g)
    ex, ey, rot, scale = [], [], [], []
    for x, y in p.points:
        ex += [1, 0]
        ey += [0, 1]
        rot += [-y, x]
        scale += [x, y]
    return [ex + [0] * k, ey + [0] * k, rot + [0] * k, scale + [1] * k]


@dataclass
class RigidityReport:
    n: int
    m: int
    k: int
    rank: int
    target_rank: int
    infinitesimally_rigid: bool
    independent: bool
    minimal: bool
    kernel_dimension: int
    nontrivial_flex_dimension: int
    stress_basis: list[list[Fraction]] | None
    realization: Realization
    seed: int | None
    mode: FieldMode
    generic: bool = field(default=False)

    def to_json(self) -> dict:
        def num(x) -> str | float:
            if isinstance(x, float):
                return x
            x = Fraction(x)
            return f"{x.numerator}/{x.denominator}"

        return {
            "n": self.n,
            "m": self.m,
            "k": self.k,
            "rank": self.rank,
            "target_rank": self.target_rank,
            "infinitesimally_angle_rigid": self.infinitesimally_rigid,
            "independent": self.independent,
            "minimally_angle_rigid": self.minimal,
            "kernel_dimension": self.kernel_dimension,
            "nontrivial_flex_dimension": self.nontrivial_flex_dimension,
            "stress_basis": None
            if self.stress_basis is None
            else [[num(x) for x in w] for w in self.stress_basis],
            "realization": [[num(x), num(y)] for x, y in self.realization.points],
            "seed": self.seed,
            "mode": self.mode,
            "verdict_kind": "generic (probabilistic)" if self.generic else "fixed realization",
        }


def _evaluate(g: ColoredGraph, p: Realization, mode: FieldMode, tol: float | None) -> int:
    mat = angle_rigidity_matrix(g, p)
    if mode == "float":
        return exactla.rank(mat, "float", tol)
    return exactla.rank(mat)


def report(
    g: ColoredGraph,
    p: Realization | None = None,
    *,
    seed: int | None = None,
    mode: FieldMode = "exact",
    tol: float | None = None,
    attempts: int = DEFAULT_ATTEMPTS,
    bound: int = DEFAULT_BOUND,
) -> RigidityReport:
    """Rank verdicts at ``p``, or the best of ``attempts`` random realizations."""
    if g.n < 2:
        raise ValueError("need at least two vertices")
    if p is not None:
        if mode == "exact" and p.mode == "float":
            raise ValueError("float realization cannot be evaluated exactly")
        best_p, best_seed = p, seed
        best_rank = _evaluate(g, p, mode, tol)
        generic = False
    else:
        seed = 0 if seed is None else seed
        ceiling = min(g.m, target_rank(g))
        best_rank, best_p, best_seed = -1, None, None
        for i in range(attempts):
            s = derive_seed(seed, i)
            q = random_realization(g, s, bound)
            if mode == "float":
                q = Realization.floating(q.points)
            r = _evaluate(g, q, mode, tol)
            if r > best_rank:
                best_rank, best_p, best_seed = r, q, s
            if r >= ceiling:
                break
        generic = True
    assert best_p is not None
    cols = 2 * g.n + num_color_columns(g)
    stresses = None
    if mode == "exact":
        stresses = exactla.cokernel_basis(angle_rigidity_matrix(g, best_p))
    tr = target_rank(g)
    rigid = best_rank == tr
    return RigidityReport(
        n=g.n,
        m=g.m,
        k=g.k,
        rank=best_rank,
        target_rank=tr,
        infinitesimally_rigid=rigid,
        independent=best_rank == g.m,
        minimal=rigid and g.m == tr,
        kernel_dimension=cols - best_rank,
        nontrivial_flex_dimension=tr - best_rank,
        stress_basis=stresses,
        realization=best_p,
        seed=best_seed,
        mode=mode,
        generic=generic,
    )


def generic_rank(
    g: ColoredGraph,
    seed: int,
    *,
    attempts: int = DEFAULT_ATTEMPTS,
    bound: int = DEFAULT_BOUND,
    escalate: bool = False,
) -> tuple[int, int]:
    """Maximum exact rank over random integer realizations; returns (rank, seed).

    Full row rank is certified by a mod-p computation when possible.  With
    ``escalate`` the coordinate bound doubles on every retry.
    """
    ceiling = min(g.m, target_rank(g))
    best, best_seed = -1, seed
    b = bound
    for i in range(attempts):
        s = derive_seed(seed, i)
        mat = angle_rigidity_matrix(g, random_realization(g, s, b))
        if ceiling == g.m and exactla.rank_mod_p(mat) == g.m:
            return g.m, s
        r = exactla.rank_exact(mat)
        if r > best:
            best, best_seed = r, s
        if r >= ceiling:
            break
        if escalate:
            b *= 2
    return best, best_seed


def is_minimally_rigid(g: ColoredGraph, seed: int, **kw) -> bool:
    """Generic minimal angle-rigidity: |E| = 2|V|+|c|-4 and full rank somewhere."""
    if g.m != target_rank(g):
        return False
    return generic_rank(g, seed, **kw)[0] == g.m


def is_stress(g: ColoredGraph, p: Realization, omega: Sequence[Scalar]) -> bool:
    if len(omega) != g.m:
        return False
    return all(x == 0 for x in exactla.vecmat(omega, bar_joint_matrix(g, p)))


def stress_sum(
    g: ColoredGraph, p: Realization, omega: Sequence[Scalar], subset: Iterable[Edge]
) -> Scalar:
    """Sum of omega_e * |p_u - p_v|^2 over the given edges."""
    if not is_stress(g, p, omega):
        raise NotAStress("omega is not an equilibrium stress of (G, p)")
    index = {e: i for i, e in enumerate(g.edges)}
    total: Scalar = 0
    for e in subset:
        u, v = norm_edge(*e)
        total += omega[index[(u, v)]] * _sqdist(p[u], p[v])
    return total


def lift_monochromatic_stress(
    g: ColoredGraph, color: int, omega_i: Sequence[Scalar], p: Realization
) -> list[Scalar]:
    """Zero-pad a stress of the color-``color`` subframework to a stress of R(G,c,p).

    ``omega_i`` is indexed like the sorted edges of that color class.
    """
    sub = subgraph_color_restrict(g, color)
    if not is_stress(sub, p, omega_i):
        raise NotAStress(f"not an equilibrium stress of the color-{color} subframework")
    values = dict(zip(sub.edges, omega_i))
    lifted = [values.get(e, 0) if c == color else 0 for e, c in zip(g.edges, g.colors)]
    residual = exactla.vecmat(lifted, angle_rigidity_matrix(g, p))
    if any(x != 0 for x in residual):
        raise ArithmeticError("lifted stress left the cokernel")
    return lifted


def format_realization(p: Realization) -> str:
    lines = []
    for v, (x, y) in enumerate(p.points, start=1):
        fx, fy = Fraction(x), Fraction(y)
        lines.append(f"{v} {fx.numerator}/{fx.denominator} {fy.numerator}/{fy.denominator}")
    return "\n".join(lines) + "\n"


def parse_realization(text: str) -> Realization:
    pts: dict[int, tuple[Fraction, Fraction]] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        v, x, y = line.split()
        pts[int(v)] = (Fraction(x), Fraction(y))
    n = max(pts, default=0)
    if sorted(pts) != list(range(1, n + 1)):
        raise ValueError("realization must list vertices 1..n exactly once")
    return Realization(tuple(pts[v] for v in range(1, n + 1)), "exact")
