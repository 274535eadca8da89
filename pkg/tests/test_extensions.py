import itertools
import json
import random

import pytest
import sympy

from anglerigidity import exactla
from anglerigidity.colored_graph import ColoredGraph, canonical_form
from anglerigidity.combinatorics import two_color_rigid_predicate
from anglerigidity.extensions import (
    ConstructionSequence,
    ExtensionError,
    ExtensionStep,
    SwapIdentity,
    _pinned_square,
    apply_step,
    color_swap,
    construct_sequence,
    k4_base_cases,
    one_extend_cp,
    one_reduce_cp,
    replays_to,
    swap_determinant_identity,
    zero_extend,
    zero_reduce,
)
from anglerigidity.rigidity import angle_rigidity_matrix, generic_rank, random_realization

from .conftest import load_graph

K4 = list(itertools.combinations(range(1, 5), 2))


def exact_rank(g: ColoredGraph, seed: int) -> int:
    return generic_rank(g, seed)[0]


def random_zero_extension(g: ColoredGraph, rng: random.Random) -> ColoredGraph:
    x, y = rng.sample(range(1, g.n + 1), 2)
    return zero_extend(g, x, y, rng.randint(1, g.k), rng.randint(1, g.k))


def random_one_extension(g: ColoredGraph, rng: random.Random) -> ColoredGraph:
    x, y = rng.choice(g.edges)
    z = rng.choice([v for v in g.vertices if v not in (x, y)])
    c = g.color_of((x, y))
    cols = [c, rng.randint(1, g.k)]
    rng.shuffle(cols)
    return one_extend_cp(g, (x, y), z, (cols[0], cols[1], rng.randint(1, g.k)))


def random_swap_instance(rng: random.Random):
    """A qualifying instance (k >= 3, |E| = 2n-4+k) whose merged determinant is nonzero."""
    while True:
        n = rng.randint(4, 6)
        k = rng.randint(3, 4)
        m = 2 * n - 4 + k
        pairs = list(itertools.combinations(range(1, n + 1), 2))
        if m > len(pairs):
            continue
        edges = rng.sample(pairs, m)
        colors = list(range(1, k + 1)) + [rng.randint(1, k) for _ in range(m - k)]
        rng.shuffle(colors)
        g = ColoredGraph(n, tuple(edges), tuple(colors))
        e = rng.choice([f for f, c in zip(g.edges, g.colors) if c == k])
        rest = [v for v in g.vertices if v not in e]
        pinned = tuple(rng.sample(rest, 2))
        p = random_realization(g, rng.randint(0, 10**9), bound=200)
        ident = swap_determinant_identity(g, e, p, pinned)
        if ident.det_deleted != 0:
            return g, e, p, pinned, ident


def test_zero_extension_adds_rank_two():
    rng = random.Random(1)
    for base in k4_base_cases():
        g = base
        for _ in range(3):
            h = random_zero_extension(g, rng)
            assert exact_rank(h, rng.randint(0, 10**6)) == exact_rank(g, rng.randint(0, 10**6)) + 2
            g = h


def test_extensions_preserve_independence():
    rng = random.Random(2)
    bases = k4_base_cases()
    for move in (random_zero_extension, random_one_extension):
        for _ in range(100):
            g = rng.choice(bases)
            for _ in range(rng.randint(0, 2)):
                g = move(g, rng)
            h = move(g, rng)
            assert (h.n, h.m) == (g.n + 1, g.m + 2)
            assert exact_rank(h, rng.randint(0, 10**6)) == h.m


def test_one_extension_needs_color_preservation():
    g = load_graph("k4_bichromatic_1.txt")
    e = g.edges[0]
    other = 2 if g.color_of(e) == 1 else 1
    with pytest.raises(ExtensionError):
        one_extend_cp(g, e, 3, (other, other, 1))
    with pytest.raises(ExtensionError):
        one_extend_cp(g, (1, 5), 3, (1, 1, 1))
    with pytest.raises(ExtensionError):
        zero_extend(g, 1, 1, 1, 1)
    with pytest.raises(ExtensionError):
        zero_extend(g, 1, 2, 1, 3)


def test_zero_reduce_round_trip():
    rng = random.Random(3)
    for base in k4_base_cases():
        h = random_zero_extension(base, rng)
        reduced, step = zero_reduce(h, h.n)
        assert reduced == base
        assert apply_step(reduced, step) == h


def test_one_reduce_round_trip():
    rng = random.Random(4)
    for base in k4_base_cases():
        h = random_one_extension(base, rng)
        w = h.n
        (x, y) = next(e for e in base.edges if e not in h.edges)
        reduced, step = one_reduce_cp(h, w, (x, y), base.color_of((x, y)))
        assert canonical_form(reduced) == canonical_form(base)
        assert apply_step(reduced, step) == h


def test_reductions_reject_bad_input():
    g = load_graph("five_vertex_k4_plus_ear.txt")
    with pytest.raises(ExtensionError):
        zero_reduce(g, 1)
    wheel = load_graph("five_vertex_wheel.txt")
    hub = max(wheel.vertices, key=wheel.degree)
    rim = [v for v in wheel.vertices if v != hub][0]
    a, b, c = wheel.neighbors(rim)
    pair = next((u, v) for u, v in itertools.combinations((a, b, c), 2) if wheel.has_edge(u, v))
    with pytest.raises(ExtensionError):
        one_reduce_cp(wheel, rim, pair, 1)


def test_step_json_round_trip():
    step = ExtensionStep("one", 6, (1, 2, 3), (1, 2, 2), (1, 2), 4)
    assert ExtensionStep.from_json(json.loads(json.dumps(step.to_json()))) == step


def test_k4_base_cases():
    bases = k4_base_cases()
    assert len(bases) == 5
    assert len({canonical_form(g) for g in bases}) == 5
    for g in bases:
        assert g.k == 2
        assert exactla.rank(angle_rigidity_matrix(g, random_realization(g, 7))) == 6


def test_construct_sequence_examples():
    ear = load_graph("five_vertex_k4_plus_ear.txt")
    seq = construct_sequence(ear)
    assert len(seq.steps) == 1 and seq.steps[0].kind == "zero"
    assert replays_to(seq, ear)
    k4 = load_graph("k4_bichromatic_3.txt")
    seq = construct_sequence(k4)
    assert seq.steps == [] and seq.base == k4
    wheel = load_graph("five_vertex_wheel.txt")
    seq = construct_sequence(wheel)
    assert seq.replay() == wheel
    again = ConstructionSequence.from_json(json.loads(seq.dumps()))
    assert again.replay() == wheel and again.final == wheel


def test_construct_sequence_rejects_outside_class():
    mono = ColoredGraph.from_edges(5, [(u, v, 1) for u, v in K4] + [(4, 5, 2), (3, 5, 2)])
    with pytest.raises(ExtensionError):
        construct_sequence(mono)
    with pytest.raises(ExtensionError):
        construct_sequence(ColoredGraph.uncolored(4, K4))


def test_construct_sequence_on_random_extensions():
    rng = random.Random(5)
    made = 0
    while made < 20:
        g = rng.choice(k4_base_cases())
        for _ in range(rng.randint(1, 3)):
            g = rng.choice((random_zero_extension, random_one_extension))(g, rng)
        if not two_color_rigid_predicate(g):
            continue
        seq = construct_sequence(g)
        assert seq.replay() == g
        assert all(s.kind in ("zero", "one") for s in seq.steps)
        made += 1


def test_color_swap():
    g = load_graph("maxwell_counterexample_right.txt")
    before = dict(zip(g.edges, g.colors))
    h = color_swap(g, (3, 4), 1)
    after = dict(zip(h.edges, h.colors))
    assert h.k == 3 and after[(3, 4)] == 1
    assert all(after[e] == c for e, c in before.items() if e != (3, 4))
    with pytest.raises(ExtensionError):
        color_swap(g, (3, 4), 2)


def test_color_swap_renumbers_vanished_color():
    g = ColoredGraph.from_edges(4, [(1, 2, 1), (2, 3, 2), (3, 4, 3), (1, 4, 3)])
    h = color_swap(g, (2, 3), 3)
    assert dict(zip(h.edges, h.colors)) == {(1, 2): 1, (2, 3): 2, (3, 4): 2, (1, 4): 2}
    lone = ColoredGraph.from_edges(3, [(1, 2, 1), (2, 3, 1), (1, 3, 2)])
    assert color_swap(lone, (1, 3), 1).colors == (1, 1, 1)


def test_swap_identity_counterexample():
    g = load_graph("maxwell_counterexample_right.txt")
    k = g.k
    e = next(f for f, c in zip(g.edges, g.colors) if c == k)
    pinned = tuple(v for v in g.vertices if v not in e)[:2]
    p = random_realization(g, 11, bound=100)
    ident = swap_determinant_identity(g, e, p, pinned)
    assert ident.holds


def test_swap_identity_determinants_match_sympy():
    rng = random.Random(6)
    g, e, p, pinned, ident = random_swap_instance(rng)
    i = g.edges.index(e)
    rest = [j for j in range(g.m) if j != i]
    s1 = _pinned_square(g, g.colors, g.k, p, [i] + rest, pinned)
    assert ident.det_original == sympy.Matrix(s1).det()
    assert len(s1) == len(s1[0]) == 2 * g.n - 4 + g.k


def test_swap_identity_random_and_corruption():
    rng = random.Random(7)
    for _ in range(20):
        g, e, p, pinned, ident = random_swap_instance(rng)
        assert ident.holds
        flipped = SwapIdentity(ident.det_original, ident.det_swapped, ident.det_deleted, ident.sqlen, ident.k + 1)
        assert not flipped.holds


def test_swap_identity_validation():
    g = load_graph("maxwell_counterexample_right.txt")
    p = random_realization(g, 1)
    e = next(f for f, c in zip(g.edges, g.colors) if c != g.k)
    with pytest.raises(ValueError):
        swap_determinant_identity(g, e, p, (1, 2))
    with pytest.raises(ValueError):
        swap_determinant_identity(load_graph("k4_bichromatic_1.txt"), (1, 2), p, (3, 4))
