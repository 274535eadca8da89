"""Differentials of angles in the coordinates x_i, y_i and the factorization
through the rigidity matrix of the rotated framework.

Coordinates are sampled as independent integers; genericity, not realness,
is what the rank arguments need.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import exactla
from .colored_graph import AngleSet, ColoredGraph, CyclicAngleSet, Edge, g2_has_cycle, to_angle_set
from .rigidity import (
    DEFAULT_BOUND,
    Realization,
    angle_rigidity_matrix,
    bar_joint_matrix,
    derive_seed,
    num_color_columns,
    random_realization,
)


@dataclass(frozen=True)
class ComplexifiedRealization:
    xs: tuple[int, ...]
    ys: tuple[int, ...]

    def X(self, i: int, j: int) -> int:
        return self.xs[i - 1] - self.xs[j - 1]

    def Y(self, i: int, j: int) -> int:
        return self.ys[i - 1] - self.ys[j - 1]

    def S(self, e: Edge) -> int:
        i, j = e
        return self.X(i, j) * self.Y(i, j)

    def as_realization(self) -> Realization:
        return Realization(tuple(zip(self.xs, self.ys)), "exact")


def sample_complexified(
    g: ColoredGraph | AngleSet | int, seed: int, bound: int = DEFAULT_BOUND
) -> ComplexifiedRealization:
    """Pairwise distinct integer x's and y's, so every X_ij and Y_ij is nonzero."""
    n = g if isinstance(g, int) else g.n
    rng = random.Random(seed)
    xs = rng.sample(range(-bound, bound + 1), n)
    ys = rng.sample(range(-bound, bound + 1), n)
    return ComplexifiedRealization(tuple(xs), tuple(ys))


def _differential_rows(a: AngleSet, q: ComplexifiedRealization) -> list[list[int]]:
    rows = []
    for (i, j), (k, l) in a.angles:
        row = [0] * (2 * a.n)
        s_ij, s_kl = q.S((i, j)), q.S((k, l))
        row[2 * (i - 1)] += s_kl * q.Y(i, j)
        row[2 * (i - 1) + 1] += s_kl * q.X(j, i)
        row[2 * (j - 1)] += s_kl * q.Y(j, i)
        row[2 * (j - 1) + 1] += s_kl * q.X(i, j)
        row[2 * (k - 1)] += s_ij * q.Y(l, k)
        row[2 * (k - 1) + 1] += s_ij * q.X(k, l)
        row[2 * (l - 1)] += s_ij * q.Y(k, l)
        row[2 * (l - 1) + 1] += s_ij * q.X(l, k)
        rows.append(row)
    return rows


def differential_matrix(a: AngleSet, q: ComplexifiedRealization) -> list[list[int]]:
    """M(A): one row per angle, columns dx_1, dy_1, ..., dx_n, dy_n."""
    if g2_has_cycle(a):
        raise CyclicAngleSet("differential matrix needs an acyclic angle set")
    return _differential_rows(a, q)


def star_block_matrix(a: AngleSet, q: ComplexifiedRealization) -> list[list[int]]:
    """T: row for angle (e, f) has -S_f in column e and S_e in column f.

    Columns follow ``a.edges``.  For a star stored as (leaf, center) this is
    the block with -S_center on the diagonal and S_leaf in the center column.
    """
    col = {e: i for i, e in enumerate(a.edges)}
    rows = []
    for e, f in a.angles:
        row = [0] * len(a.edges)
        row[col[e]] = -q.S(f)
        row[col[f]] = q.S(e)
        rows.append(row)
    return rows


def rotated_rigidity_matrix(g: ColoredGraph, q: ComplexifiedRealization) -> list[list[int]]:
    return bar_joint_matrix(g, q.as_realization().rotated())


def j_matrix(g: ColoredGraph, q: ComplexifiedRealization) -> list[list[int]]:
    """R(G, c, p-perp) with each color entry replaced by S_ij."""
    left = rotated_rigidity_matrix(g, q)
    k = num_color_columns(g)
    out = []
    for row, e, c in zip(left, g.edges, g.colors):
        block = [0] * k
        block[c - 1] = q.S(e)
        out.append(row + block)
    return out


def factorization_holds(t, r, m) -> bool:
    if not t:
        # no angles: both sides are empty
        return not m
    return exactla.matmul(t, r) == [list(row) for row in m]


def factorization_check(g: ColoredGraph, seed: int) -> bool:
    """M(A) == T * R(G, p-perp) exactly for the star angle set of ``g``."""
    a = to_angle_set(g)
    q = sample_complexified(g, seed)
    return factorization_holds(
        star_block_matrix(a, q), rotated_rigidity_matrix(g, q), differential_matrix(a, q)
    )


def matroid_rank_equivalence(g: ColoredGraph, seed: int) -> tuple[int, int, bool]:
    """(rank M(A), rank R(G,c,p), full-rank verdicts agree) on independent samples."""
    a = to_angle_set(g)
    if len(a.angles) != g.m - g.k:
        raise ValueError("angle set size must be |E| - |c|")
    q = sample_complexified(g, seed)
    rank_m = exactla.rank(differential_matrix(a, q))
    p = random_realization(g, derive_seed(seed, "real"))
    rank_r = exactla.rank(angle_rigidity_matrix(g, p))
    return rank_m, rank_r, (rank_m == len(a.angles)) == (rank_r == g.m)


def left_nullities(g: ColoredGraph, seed: int) -> tuple[int, int]:
    """(left nullity of M(A), left nullity of J) at the same sample."""
    a = to_angle_set(g)
    q = sample_complexified(g, seed)
    m = differential_matrix(a, q)
    j = j_matrix(g, q)
    return len(m) - exactla.rank(m), len(j) - exactla.rank(j)


def cycle_dependence_check(a: AngleSet, q: ComplexifiedRealization) -> bool:
    """For an angle set whose angle graph has a cycle: True iff rank M(A) < |A|."""
    if not g2_has_cycle(a):
        raise ValueError("angle set is acyclic")
    return exactla.rank(_differential_rows(a, q)) < len(a.angles)
