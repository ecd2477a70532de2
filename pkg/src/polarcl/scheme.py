"""The association scheme on generators.

Two generators are in relation R_i when they meet in a (d-i-1)-space
(R_0 is equality, R_d disjointness).  The eigenvalue matrix P has a closed
form; the eigenspaces V_0..V_d are computed exactly from the adjacency
matrices when needed.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

import flint
import numpy as np

from .algebra import HalfInt, binom2, gaussian_binomial, kernel_basis, q_adic_valuation, q_pow
from .algebra.linalg import to_fmpz
from .geometry import Family, PolarSpace, PolarSpaceKind

INFINITY = math.inf
"""Valuation of a zero eigenvalue."""


class SchemeError(ValueError):
    pass


def _e(e) -> HalfInt:
    return HalfInt.of(e)


def p_eigenvalue(d: int, e, q: int, j: int, i: int) -> int:
    """Eigenvalue of A_i on V_j, from the closed-form alternating sum."""
    e = _e(e).as_fraction()
    total = 0
    for s in range(max(0, j - i), min(j, d - i) + 1):
        exponent = e * (i + s - j) + binom2(j - s) + binom2(i + s - j)
        term = (gaussian_binomial(j, s, q) * gaussian_binomial(d - j, d - i - s, q)
                * q_pow(q, exponent))
        total += -term if (j + s) % 2 else term
    return total


@lru_cache(maxsize=256)
def eigenvalue_matrix(d: int, e, q: int) -> tuple[tuple[int, ...], ...]:
    """P with P[j][i] the eigenvalue of A_i on V_j."""
    return tuple(tuple(p_eigenvalue(d, e, q, j, i) for i in range(d + 1)) for j in range(d + 1))


def multiplicities(d: int, e, q: int) -> tuple[int, ...]:
    """dim V_j, from the orthogonality relations of P."""
    P = eigenvalue_matrix(d, e, q)
    n = sum(P[0])
    out = []
    for j in range(d + 1):
        norm = sum(Fraction(P[j][i] ** 2, P[0][i]) for i in range(d + 1))
        m = n / norm
        if m.denominator != 1:
            raise SchemeError(f"non-integral multiplicity {m} for j={j}")
        out.append(int(m))
    return tuple(out)


# ---------------------------------------------------------------------------
# coincidences P_1i = P_ji


def predicted_coincidences(d: int, e) -> list[tuple[int, int]]:
    """Pairs (j, i), j >= 2, i >= 1, predicted to satisfy P_1i = P_ji.

    Hyperbolic quadrics: (d-1, i) for even i.  Parameter e = 1 with d odd:
    the single pair (d, d).  No other coincidences are predicted.
    """
    e = _e(e)
    if e == 0 and d - 1 >= 2:
        return [(d - 1, i) for i in range(2, d + 1, 2)]
    if e == 1 and d % 2 == 1:
        return [(d, d)]
    return []


def scan_coincidences(d: int, e, q: int) -> list[tuple[int, int]]:
    """Brute-force list of (j, i) with j >= 2, i >= 1 and P_1i = P_ji."""
    P = eigenvalue_matrix(d, e, q)
    return [(j, i) for j in range(2, d + 1) for i in range(1, d + 1) if P[1][i] == P[j][i]]


def verify_coincidences(d: int, e, q: int) -> list[tuple[int, int]]:
    """Coincidences found by scanning P; compare with ``predicted_coincidences``."""
    return scan_coincidences(d, e, q)


# ---------------------------------------------------------------------------
# q-adic valuations


def phi_valuation(d: int, e, q: int, i: int, j: int):
    """Exponent of q in P_ji (a Fraction; ``INFINITY`` when P_ji = 0)."""
    if i < 1:
        raise SchemeError("phi is defined for i >= 1")
    value = p_eigenvalue(d, e, q, j, i)
    if value == 0:
        return INFINITY
    v = q_adic_valuation(value, q)
    return int(v) if v.denominator == 1 else v


def phi_at_one(e, i: int):
    v = binom2(i - 1) + _e(e).as_fraction() * (i - 1)
    return int(v) if v.denominator == 1 else v


def closed_form_in_range(d: int, e, i: int, j: int) -> bool:
    e = _e(e).as_fraction()
    return i >= 2 and j >= 2 and 0 <= j - Fraction(i, 2) - e / 2 <= d - i


def closed_form_phi(d: int, e, i: int, j: int):
    """Closed-form value of phi_i(j) from the valuation table, or None out of range."""
    if not closed_form_in_range(d, e, i, j):
        return None
    twice = _e(e).twice
    even = i % 2 == 0
    if twice == 0:
        if even:
            v = Fraction(i * (i - 2), 4)
        else:
            return INFINITY if 2 * j == d else Fraction((i - 1) ** 2, 4)
    elif twice == 1:
        v = Fraction(i * (i - 1), 4)
    elif twice == 2:
        if d % 4 == 0 and 2 * i == d and 2 * j == d + 2:
            return INFINITY
        v = Fraction(i * i, 4) if even else Fraction(i * i - 1, 4)
    elif twice == 3:
        v = Fraction((i - 1) * (i + 2), 4)
    elif twice == 4:
        if even:
            v = Fraction(i * i, 4) + Fraction(i, 2) - 1
        else:
            if d % 4 == 2 and 2 * i == d and 2 * j == d + 4:
                return INFINITY
            v = Fraction((i - 1) * (i + 3), 4)
    else:
        raise SchemeError(f"no table row for e={e}")
    return int(v) if v.denominator == 1 else v


def phi_lower_form(e, i: int, j: int):
    """f_ji(0): the valuation below the table's range (j - i/2 - e/2 < 0)."""
    v = binom2(i) + (j - i) * (j - _e(e).as_fraction())
    return int(v) if v.denominator == 1 else v


def phi_upper_form(d: int, e, i: int, j: int):
    """f_ji(d-i): the valuation above the table's range."""
    e = _e(e).as_fraction()
    v = (j - e - d + 1) * (j - d + i - 1) + binom2(i - 1) + e * (i - 1)
    return int(v) if v.denominator == 1 else v


# ---------------------------------------------------------------------------
# exact spectra


def exact_spectrum(M) -> dict[int, int]:
    """Eigenvalues with multiplicities of an integer matrix whose spectrum is integral.

    Factors the characteristic polynomial over Z; a non-linear factor raises.
    """
    cp = to_fmpz(M).charpoly()
    _, factors = cp.factor()
    spec: dict[int, int] = {}
    for poly, mult in factors:
        if poly.degree() != 1:
            raise SchemeError(f"irreducible factor of degree {poly.degree()} in charpoly")
        a, b = int(poly[1]), int(poly[0])
        if b % a:
            raise SchemeError("non-integral eigenvalue")
        spec[-b // a] = spec.get(-b // a, 0) + mult
    return spec


def _shifted(A: np.ndarray, lam) -> np.ndarray:
    M = A.astype(np.int64)
    M[np.diag_indices_from(M)] -= int(lam)
    return M


# ---------------------------------------------------------------------------
# the scheme of a space


class SchemeData:
    """Adjacency matrices, P and (lazily) eigenspaces of a built space."""

    def __init__(self, space: PolarSpace):
        self.space = space
        self.d, self.e, self.q = space.d, space.e, space.q
        self.relations = space.relation_matrix
        self.P = eigenvalue_matrix(self.d, self.e, self.q)
        self.multiplicities = multiplicities(self.d, self.e, self.q)
        if sum(self.P[0]) != space.num_generators:
            raise SchemeError("valencies do not add up to the generator count")
        self._eigenspaces: dict[int, flint.fmpz_mat] = {}
        self._cache: dict = {}

    @property
    def size(self) -> int:
        return self.space.num_generators

    def adjacency(self, i: int) -> np.ndarray:
        """A_i as a 0/1 uint8 matrix."""
        if not 0 <= i <= self.d:
            raise SchemeError(f"relation index {i} out of range 0..{self.d}")
        return (self.relations == i).astype(np.uint8)

    def eigenvalue(self, j: int, i: int) -> int:
        return self.P[j][i]

    def eigenspace(self, j: int) -> flint.fmpz_mat:
        """Integer basis (as columns) of V_j."""
        if j not in self._eigenspaces:
            col1 = [row[1] for row in self.P]
            if col1.count(col1[j]) == 1:
                M = _shifted(self.adjacency(1), col1[j])
            else:
                M = np.vstack([_shifted(self.adjacency(i), self.P[j][i])
                               for i in range(1, self.d + 1)])
            K = kernel_basis(M)
            if K.ncols() != self.multiplicities[j]:
                raise SchemeError(f"dim V_{j} = {K.ncols()}, expected {self.multiplicities[j]}")
            self._eigenspaces[j] = K
        return self._eigenspaces[j]

    def eigenspace_dims(self, compute: bool = False) -> list[int]:
        if compute:
            return [self.eigenspace(j).ncols() for j in range(self.d + 1)]
        return list(self.multiplicities)

    def spectrum(self, i: int) -> dict[int, int]:
        return exact_spectrum(self.adjacency(i))

    def predicted_spectrum(self, i: int) -> dict[int, int]:
        spec: dict[int, int] = {}
        for j in range(self.d + 1):
            spec[self.P[j][i]] = spec.get(self.P[j][i], 0) + self.multiplicities[j]
        return spec

    def v01_residual(self, chi: Sequence[int]) -> np.ndarray:
        """(A_1 - P_01 I)(A_1 - P_11 I) chi; zero exactly when chi lies in V_0 + V_1."""
        v = np.array([int(c) for c in chi], dtype=object)
        n = len(v)
        biggest = max((abs(c) for c in v), default=0)
        # |result| <= (n + |P_01|)(n + |P_11|) max|chi|, all bounded by n
        dtype = np.int64 if biggest * 4 * n * n < 2**62 else object
        A1 = self._a1(dtype)
        v = v.astype(dtype)
        w = A1.dot(v) - self.P[1][1] * v
        return A1.dot(w) - self.P[0][1] * w

    def _a1(self, dtype):
        key = ("a1", dtype)
        if key not in self._cache:
            self._cache[key] = self.adjacency(1).astype(dtype)
        return self._cache[key]

    def export_pmatrix_csv(self) -> str:
        return pmatrix_csv(self.P)

    def export_eigenspace_json(self, compute: bool = False) -> str:
        return json.dumps({"space": self.space.descriptor(),
                           "dimensions": self.eigenspace_dims(compute)})


def build_scheme(space: PolarSpace) -> SchemeData:
    return SchemeData(space)


def pmatrix_csv(P) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["j"] + [f"i={i}" for i in range(len(P))])
    for j, row in enumerate(P):
        writer.writerow([j] + list(row))
    return buf.getvalue()


# ---------------------------------------------------------------------------
# eigenvector shift


@dataclass
class ShiftResult:
    vector: list[Fraction]
    eigenvalue: int
    is_eigenvector: bool
    eigenspaces: list[int]          # j with P_ji equal to the eigenvalue


def eigenvector_shift(chi: Sequence[int], alpha, beta, i: int, scheme: SchemeData) -> ShiftResult:
    """chi + beta/(P - P_0i) j, with P = alpha - beta, tested against A_i exactly."""
    lam = Fraction(alpha) - Fraction(beta)
    p0 = scheme.P[0][i]
    if lam == p0:
        raise SchemeError("alpha - beta equals the valency; the shift is undefined")
    shift = Fraction(beta) / (lam - p0)
    v = [Fraction(int(c)) + shift for c in chi]
    A = scheme.adjacency(i).astype(object)
    Av = A.dot(np.array(v, dtype=object))
    ok = all(a == lam * b for a, b in zip(Av, v))
    js = [j for j in range(scheme.d + 1) if scheme.P[j][i] == lam]
    return ShiftResult(v, int(lam) if lam.denominator == 1 else lam, ok, js)


# ---------------------------------------------------------------------------
# one class of a hyperbolic quadric of even rank


class OneClassScheme:
    """Scheme restricted to one class of generators of Q+(2d-1,q), d even.

    Two generators lie in the same class iff their relation index is even,
    i.e. iff they meet in a subspace of vector dimension congruent to d.
    """

    def __init__(self, parent: SchemeData, cls: int = 0, reference: int = 0):
        kind = parent.space.kind
        if kind.family is not Family.HYPERBOLIC:
            raise SchemeError("one-class restriction needs a hyperbolic quadric")
        self.parent = parent
        self.reference = reference
        labels = (parent.relations[reference] % 2).astype(np.uint8)
        self.class_labels = labels
        self.cls = cls
        self.members = [int(k) for k in np.nonzero(labels == cls)[0]]
        self.half_rank = parent.d // 2

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def even_rank(self) -> bool:
        return self.parent.d % 2 == 0

    def adjacency(self, i: int) -> np.ndarray:
        """A'_i = A_{2i} restricted to the class."""
        idx = self.members
        return self.parent.adjacency(2 * i)[np.ix_(idx, idx)]

    def valency(self, i: int) -> int:
        return self.parent.P[0][2 * i]

    def eigenvalue_on_v1(self, i: int) -> int:
        return self.parent.P[1][2 * i]

    def v1_prime(self) -> flint.fmpz_mat:
        """Eigenspace of A'_1 for the eigenvalue P_{1,2}."""
        return kernel_basis(_shifted(self.adjacency(1), self.eigenvalue_on_v1(1)))

    def restricted_v1_v_dm1(self) -> int:
        """Dimension of (V_1 + V_{d-1}) restricted (projected) to the class."""
        V1 = self.parent.eigenspace(1)
        Vd = self.parent.eigenspace(self.parent.d - 1)
        rows = [[int(V1[r, c]) for c in range(V1.ncols())] + [int(Vd[r, c]) for c in range(Vd.ncols())]
                for r in self.members]
        return to_fmpz(rows).rank() if rows else 0


def restrict_one_class(scheme: SchemeData, cls: int = 0) -> OneClassScheme:
    kind = scheme.space.kind
    if kind.family is not Family.HYPERBOLIC or kind.d % 2:
        raise SchemeError("one-class restriction needs Q+(2d-1,q) with d even")
    return OneClassScheme(scheme, cls)
