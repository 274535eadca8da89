import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from anglerigidity import exactla
from anglerigidity.exactla import FieldModeError


def small_matrices(max_rows=6, max_cols=6, lo=-4, hi=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(st.fractions(min_value=lo, max_value=hi, max_denominator=5), min_size=c, max_size=c),
                min_size=r,
                max_size=r,
            )
        )
    )


def sympy_rank(m):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in m]).rank()


def test_identity_rank():
    assert exactla.rank([[1, 0], [0, 1]]) == 2


def test_all_ones_rank():
    assert exactla.rank([[1] * 3 for _ in range(3)]) == 1


def test_triangle_one_color_rank():
    # rows of [R(K3,p) | M] at (0,0), (4,0), (1,3), eliminated by hand
    m = [
        [-4, 0, 4, 0, 0, 0, -16],
        [-1, -3, 0, 0, 1, 3, -10],
        [0, 0, 3, -3, -3, 3, -18],
    ]
    assert exactla.rank(m) == 3


def test_tol_only_with_float():
    with pytest.raises(FieldModeError):
        exactla.rank([[1]], "exact", 1e-9)


@given(small_matrices())
def test_rank_matches_sympy(m):
    assert exactla.rank_exact(m) == sympy_rank(m)


@given(small_matrices())
def test_rank_transpose(m):
    assert exactla.rank(m) == exactla.rank(exactla.transpose(m))


@given(small_matrices(), st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_rank_unchanged_by_row_combination(m, coeffs):
    extra = [sum(c * row[j] for c, row in zip(coeffs, m)) for j in range(len(m[0]))]
    assert exactla.rank(m + [extra]) == exactla.rank(m)


@given(st.integers(1, 6).flatmap(lambda n: st.lists(
    st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=n, max_size=n),
    min_size=n, max_size=n)))
def test_determinant_matches_sympy_and_rank(m):
    d = exactla.determinant(m)
    expected = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in m]).det()
    assert d == Fraction(int(sympy.fraction(expected)[0]), int(sympy.fraction(expected)[1]))
    assert (d == 0) == (exactla.rank(m) < len(m))


def test_determinant_examples():
    assert exactla.determinant([[1, 0], [0, 1]]) == 1
    assert exactla.determinant([[1, 1], [1, 1]]) == 0
    assert exactla.determinant([[2, 0], [0, 3]]) == 6
    with pytest.raises(ValueError):
        exactla.determinant([[1, 2]])


@given(small_matrices())
def test_kernel_and_cokernel(m):
    r = exactla.rank(m)
    ker = exactla.kernel_basis(m)
    coker = exactla.cokernel_basis(m)
    assert len(ker) == len(m[0]) - r
    assert len(coker) == len(m) - r
    for v in ker:
        assert all(x == 0 for x in exactla.matvec(m, v))
    for w in coker:
        assert all(x == 0 for x in exactla.vecmat(w, m))
    if ker:
        assert exactla.rank(ker) == len(ker)


def test_kernel_examples():
    assert exactla.kernel_basis([[1, 0], [0, 1]]) == []
    (v,) = exactla.kernel_basis([[1, 1]])
    assert v[0] == -v[1] != 0


def test_basis_needs_exact_mode():
    with pytest.raises(FieldModeError):
        exactla.kernel_basis([[1, 1]], "float")
    with pytest.raises(FieldModeError):
        exactla.cokernel_basis([[1, 1]], "float")


def test_float_rank_agrees_on_well_conditioned():
    rng = random.Random(11)
    for _ in range(100):
        r, c = rng.randint(1, 8), rng.randint(1, 8)
        k = rng.randint(1, min(r, c))
        a = [[rng.randint(-9, 9) for _ in range(k)] for _ in range(r)]
        b = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(k)]
        m = exactla.matmul(a, b)
        floats = [[float(x) for x in row] for row in m]
        assert exactla.rank(floats, "float", 1e-9) == exactla.rank(m)


def test_float_rank_tolerance():
    m = [[1.0, 0.0], [0.0, 1e-12]]
    assert exactla.rank_float(m, 1e-9) == 1
    assert exactla.rank_float(m, 1e-15) == 2


@given(small_matrices(lo=-50, hi=50))
def test_mod_p_rank_is_lower_bound(m):
    ints = [[int(x) for x in row] for row in m]
    assert exactla.rank_mod_p(ints) <= exactla.rank_exact(ints)


def test_mod_p_rank_detects_multiple_of_p():
    p = exactla.MODULUS
    assert exactla.rank_mod_p([[p, 0], [0, 1]]) == 1
    assert exactla.rank_exact([[p, 0], [0, 1]]) == 2
