"""Exact linear algebra over Q (via python-flint) and over GF(q).

Rational matrices are flint ``fmpq_mat``/``fmpz_mat`` objects.  Integer input
(numpy integer arrays, nested lists of ints) is kept on the faster ``fmpz_mat``
path; anything with a ``Fraction`` goes through ``fmpq_mat``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import flint
import numpy as np

from .field import FiniteField

RationalMatrix = flint.fmpq_mat


class DimensionError(ValueError):
    pass


def _rows(M) -> list[list]:
    if isinstance(M, (flint.fmpz_mat, flint.fmpq_mat)):
        return [list(r) for r in M.tolist()]
    if isinstance(M, np.ndarray):
        if M.ndim != 2:
            raise DimensionError(f"expected a 2-d array, got shape {M.shape}")
        return M.tolist()
    rows = [list(r) for r in M]
    if rows and len({len(r) for r in rows}) != 1:
        raise DimensionError("ragged matrix")
    return rows


def _shape(M) -> tuple[int, int]:
    if isinstance(M, (flint.fmpz_mat, flint.fmpq_mat)):
        return M.nrows(), M.ncols()
    if isinstance(M, np.ndarray):
        return M.shape
    rows = _rows(M)
    return len(rows), (len(rows[0]) if rows else 0)


def _is_integral(M) -> bool:
    if isinstance(M, flint.fmpz_mat):
        return True
    if isinstance(M, flint.fmpq_mat):
        return False
    if isinstance(M, np.ndarray):
        return np.issubdtype(M.dtype, np.integer) or M.dtype == bool
    return all(isinstance(x, (int, np.integer)) for r in _rows(M) for x in r)


def to_fmpz(M) -> flint.fmpz_mat:
    if isinstance(M, flint.fmpz_mat):
        return M
    r, c = _shape(M)
    if isinstance(M, np.ndarray):
        return flint.fmpz_mat(r, c, [int(x) for x in M.ravel()])
    return flint.fmpz_mat(r, c, [int(x) for row in _rows(M) for x in row])


def to_fmpq(M) -> flint.fmpq_mat:
    if isinstance(M, flint.fmpq_mat):
        return M
    if isinstance(M, flint.fmpz_mat):
        return flint.fmpq_mat(M)
    r, c = _shape(M)
    vals = []
    for row in _rows(M):
        for x in row:
            f = Fraction(x)
            vals.append(flint.fmpq(f.numerator, f.denominator))
    return flint.fmpq_mat(r, c, vals)


def rref(M) -> flint.fmpq_mat:
    """Reduced row echelon form over Q."""
    R, _ = to_fmpq(M).rref()
    return R


def rank(M) -> int:
    r, c = _shape(M)
    if r == 0 or c == 0:
        return 0
    if _is_integral(M):
        return to_fmpz(M).rank()
    return to_fmpq(M).rank()


def kernel_basis(M):
    """Matrix whose columns form a basis of {k : M k = 0}.

    Integer input yields an ``fmpz_mat`` basis of integer vectors, rational
    input an ``fmpq_mat``.  The result has shape (cols(M), nullity).
    """
    r, c = _shape(M)
    if c == 0:
        return flint.fmpz_mat(0, 0)
    if r == 0:
        return flint.fmpz_mat(c, c, [int(i == j) for i in range(c) for j in range(c)])
    if _is_integral(M):
        X, nul = to_fmpz(M).nullspace()
        return flint.fmpz_mat(c, nul, [X[i, j] for i in range(c) for j in range(nul)])
    # clear denominators row by row; kernel is unchanged
    rows = []
    for row in _rows(M):
        fr = [Fraction(x) for x in row]
        den = 1
        for x in fr:
            den = den * x.denominator // np.gcd(den, x.denominator)
        rows.append([int(x * den) for x in fr])
    return kernel_basis(rows)


def in_column_space(M, v: Sequence) -> bool:
    """True iff v is a Q-linear combination of the columns of M."""
    r, c = _shape(M)
    v = list(v)
    if len(v) != r:
        raise DimensionError(f"vector of length {len(v)} against {r} rows")
    rows = _rows(M) if c else [[] for _ in range(r)]
    aug = [list(row) + [x] for row, x in zip(rows, v)]
    return rank(aug) == rank(M) if c else all(Fraction(x) == 0 for x in v)


def matvec(M, v: Sequence) -> list:
    """Exact product of an integer/rational matrix with a vector."""
    rows = _rows(M)
    if rows and len(rows[0]) != len(v):
        raise DimensionError("matrix-vector size mismatch")
    return [sum((Fraction(a) * Fraction(b) for a, b in zip(row, v)), Fraction(0)) for row in rows]


def columns(K) -> list[list[Fraction]]:
    """Columns of a flint matrix as lists of Fractions."""
    out = []
    for j in range(K.ncols()):
        col = []
        for i in range(K.nrows()):
            x = K[i, j]
            if isinstance(x, flint.fmpq):
                col.append(Fraction(int(x.p), int(x.q)))
            else:
                col.append(Fraction(int(x)))
        out.append(col)
    return out


# ---------------------------------------------------------------------------
# GF(q)


def gf_rref(field: FiniteField, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(q); zero rows are dropped."""
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim == 1:
        A = A[None, :]
    nrows, ncols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = field.mul_table[field.inv_table[A[r, c]], A[r]]
        for i in range(nrows):
            if i != r and A[i, c]:
                factor = field.neg[A[i, c]]
                A[i] = field.add_table[A[i], field.mul_table[factor, A[r]]]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def gf_rank(field: FiniteField, M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(gf_rref(field, M)[1])


def gf_kernel(field: FiniteField, M, ncols: int | None = None) -> np.ndarray:
    """Rows spanning {y : M y = 0} over GF(q)."""
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        n = ncols if ncols is not None else (M.shape[1] if M.ndim == 2 else 0)
        return np.eye(n, dtype=np.int64)
    R, pivots = gf_rref(field, M)
    n = R.shape[1]
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for b, f in enumerate(free):
        basis[b, f] = 1
        for row, pc in enumerate(pivots):
            basis[b, pc] = field.neg[R[row, f]]
    return basis
