"""Dense linear algebra over the rationals (exact) and over floats (tolerance).

Matrices are plain row-major lists of lists.  Exact routines accept ``int`` or
``fractions.Fraction`` entries and never round; the float routines accept
anything convertible to ``float``.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Literal, Sequence

import numpy as np

Scalar = int | Fraction | float
Matrix = Sequence[Sequence[Scalar]]
FieldMode = Literal["exact", "float"]

DEFAULT_TOL = 1e-9
# largest prime below 2**31, so products of residues fit in int64
MODULUS = 2147483629


class FieldModeError(ValueError):
    """Raised when an operation is requested in a field mode it does not support."""


def shape(m: Matrix) -> tuple[int, int]:
    rows = len(m)
    return rows, (len(m[0]) if rows else 0)


def transpose(m: Matrix) -> list[list[Scalar]]:
    rows, cols = shape(m)
    return [[m[i][j] for i in range(rows)] for j in range(cols)]


def matmul(a: Matrix, b: Matrix) -> list[list[Scalar]]:
    _, inner = shape(a)
    if inner != len(b):
        raise ValueError(f"shape mismatch: {shape(a)} x {shape(b)}")
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(m: Matrix, v: Sequence[Scalar]) -> list[Scalar]:
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def vecmat(v: Sequence[Scalar], m: Matrix) -> list[Scalar]:
    return matvec(transpose(m), v)


def _integer_rows(m: Matrix) -> tuple[list[list[int]], Fraction]:
    """Scale each row to integers; return the rows and the product of scale factors."""
    out = []
    scale = Fraction(1)
    for row in m:
        fr = [Fraction(x) for x in row]
        d = lcm(*(x.denominator for x in fr)) if fr else 1
        out.append([int(x * d) for x in fr])
        scale *= d
    return out, scale


def _bareiss(rows: list[list[int]]) -> tuple[int, int, list[list[int]]]:
    """Fraction-free elimination in place; returns (rank, row-swap sign, rows)."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    r = 0
    prev = 1
    sign = 1
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
            sign = -sign
        piv_row = rows[r]
        piv = piv_row[c]
        for i in range(r + 1, m):
            row = rows[i]
            f = row[c]
            # rows with f == 0 still need the piv / prev rescaling
            for j in range(c + 1, n):
                row[j] = (piv * row[j] - f * piv_row[j]) // prev
            row[c] = 0
        prev = piv
        r += 1
    return r, sign, rows


def rank_exact(m: Matrix) -> int:
    rows, _ = _integer_rows(m)
    if not rows or not rows[0]:
        return 0
    return _bareiss(rows)[0]


def rank_float(m: Matrix, tol: float = DEFAULT_TOL) -> int:
    """Rank by partial-pivoting elimination; pivots below ``tol`` times the
    largest entry magnitude are treated as zero."""
    a = np.array(m, dtype=float)
    if a.size == 0:
        return 0
    rows, cols = a.shape
    threshold = tol * float(np.max(np.abs(a)))
    if threshold == 0.0:
        return 0
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(a[r:, c])))
        if abs(a[p, c]) <= threshold:
            continue
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r + 1 :, c:] -= np.outer(a[r + 1 :, c] / a[r, c], a[r, c:])
        r += 1
    return r


def rank_mod_p(m: Matrix, p: int = MODULUS) -> int:
    """Rank of an integer matrix over GF(p).

    This never exceeds the rational rank, so a full result certifies full
    rational rank.
    """
    a = np.array([[int(x) % p for x in row] for row in m], dtype=np.int64)
    if a.size == 0:
        return 0
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        f = a[r + 1 :, c].copy()
        if f.any():
            a[r + 1 :] = (a[r + 1 :] - (f[:, None] * a[r]) % p) % p
        r += 1
    return r


def rank(m: Matrix, mode: FieldMode = "exact", tol: float | None = None) -> int:
    if mode == "exact":
        if tol is not None:
            raise FieldModeError("tolerance is only meaningful in float mode")
        return rank_exact(m)
    if mode == "float":
        return rank_float(m, DEFAULT_TOL if tol is None else tol)
    raise FieldModeError(f"unknown field mode {mode!r}")


def full_row_rank_fast(m: Sequence[Sequence[int]]) -> bool:
    """Exact test of rank == rows for integer matrices (mod-p certificate first)."""
    rows = len(m)
    if rows == 0:
        return True
    if rank_mod_p(m) == rows:
        return True
    return rank_exact(m) == rows


def determinant(m: Matrix) -> Fraction:
    rows, cols = shape(m)
    if rows != cols:
        raise ValueError(f"determinant of non-square {rows}x{cols} matrix")
    if rows == 0:
        return Fraction(1)
    ints, scale = _integer_rows(m)
    r, sign, red = _bareiss(ints)
    if r < rows:
        return Fraction(0)
    return Fraction(sign * red[-1][-1]) / scale


def rref(m: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals and the pivot columns."""
    a = [[Fraction(x) for x in row] for row in m]
    rows, cols = shape(a)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def kernel_basis(m: Matrix, mode: FieldMode = "exact") -> list[list[Fraction]]:
    """Basis of {v : m v = 0}, one vector per free column."""
    if mode != "exact":
        raise FieldModeError("basis extraction is only supported in exact mode")
    _, cols = shape(m)
    red, pivots = rref(m)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def cokernel_basis(m: Matrix, mode: FieldMode = "exact") -> list[list[Fraction]]:
    """Basis of the left null space {w : w^T m = 0}."""
    if mode != "exact":
        raise FieldModeError("basis extraction is only supported in exact mode")
    rows, cols = shape(m)
    if cols == 0:
        return [[Fraction(int(i == j)) for j in range(rows)] for i in range(rows)]
    return kernel_basis(transpose(m))


def format_matrix(m: Matrix) -> str:
    """Plain-text dump, one row per line, entries separated by spaces."""
    return "\n".join(" ".join(str(x) for x in row) for row in m)
