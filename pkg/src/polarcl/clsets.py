"""Cameron-Liebler decision procedures and the properties they imply.

A generator set L with characteristic vector chi and parameter
x = |L| / prod_{i=0}^{d-2}(q^{i+e}+1) is

* a Cameron-Liebler (CL) set when every generator pi is disjoint from exactly
  (x - chi(pi)) q^{C(d-1,2)+e(d-1)} members of L, and
* degree one when chi lies in the row space of the point-generator incidence
  matrix A, equivalently in V_0 + V_1.

Type of a space (used for the implications between the two notions):
type I spaces have both notions equivalent, type II is Q+(2d-1,q) with d
even (one class is studied instead) and type III spaces (W(4n+1,q),
Q(4n+2,q)) have degree one strictly stronger than CL.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .algebra import binom2, gaussian_binomial, kernel_basis, q_pow
from .geometry import Family, PolarSpace, PolarSpaceKind
from .scheme import OneClassScheme, SchemeData, build_scheme

MAX_WITNESSES = 16


class CLError(ValueError):
    pass


class ConsistencyError(AssertionError):
    """Two independent exact computations disagreed."""


# ---------------------------------------------------------------------------
# generator sets


class GeneratorSet:
    """Set of generators of a fixed space, stored as sorted indices."""

    __slots__ = ("space", "indices", "_mask")

    def __init__(self, space: PolarSpace, indices: Iterable[int] = ()):
        idx = sorted({int(i) for i in indices})
        if idx and (idx[0] < 0 or idx[-1] >= space.num_generators):
            raise CLError(f"generator index out of range 0..{space.num_generators - 1}")
        self.space = space
        self.indices: tuple[int, ...] = tuple(idx)
        self._mask = None

    @classmethod
    def full(cls, space: PolarSpace) -> "GeneratorSet":
        return cls(space, range(space.num_generators))

    @property
    def size(self) -> int:
        return len(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, g: int) -> bool:
        return bool(self.mask[g])

    def __eq__(self, other) -> bool:
        return (isinstance(other, GeneratorSet) and other.space is self.space
                and other.indices == self.indices)

    def __hash__(self) -> int:
        return hash((id(self.space), self.indices))

    def __repr__(self) -> str:
        return f"GeneratorSet({self.space.label}, size={self.size})"

    @property
    def mask(self) -> np.ndarray:
        if self._mask is None:
            m = np.zeros(self.space.num_generators, dtype=bool)
            m[list(self.indices)] = True
            m.setflags(write=False)
            self._mask = m
        return self._mask

    @property
    def chi(self) -> np.ndarray:
        return self.mask.astype(np.int64)

    def to_json(self) -> dict:
        return {"space": self.space.descriptor(), "indices": list(self.indices)}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict, space: PolarSpace | None = None) -> "GeneratorSet":
        from .geometry import load_space

        kind = PolarSpaceKind.from_descriptor(data["space"])
        if space is None:
            space = load_space(kind)
        elif space.kind != kind:
            raise CLError(f"set belongs to {kind.label}, not {space.label}")
        indices = data["indices"]
        if any(not isinstance(i, int) for i in indices):
            raise CLError("indices must be integers")
        return cls(space, indices)


def _same_space(a: GeneratorSet, b: GeneratorSet):
    if a.space is not b.space:
        raise CLError("generator sets live in different spaces")


def complement(L: GeneratorSet) -> GeneratorSet:
    return GeneratorSet(L.space, np.nonzero(~L.mask)[0])


def union(L: GeneratorSet, M: GeneratorSet) -> GeneratorSet:
    """Union of two disjoint sets (parameters add)."""
    _same_space(L, M)
    if set(L.indices) & set(M.indices):
        raise CLError("union needs disjoint sets")
    return GeneratorSet(L.space, L.indices + M.indices)


def difference(outer: GeneratorSet, inner: GeneratorSet) -> GeneratorSet:
    """outer minus inner for inner contained in outer (parameters subtract)."""
    _same_space(outer, inner)
    if not set(inner.indices) <= set(outer.indices):
        raise CLError("difference needs the second set inside the first")
    return GeneratorSet(outer.space, set(outer.indices) - set(inner.indices))


def restrict_to_embedded(L: GeneratorSet, sub: PolarSpace) -> GeneratorSet:
    """Members of L that are generators of an embedded space of the same rank."""
    if sub.parent is not L.space:
        raise CLError("space is not embedded in the set's space")
    if sub.d != L.space.d or sub.parent_generator_index is None:
        raise CLError("restriction needs a generator-preserving embedding of equal rank")
    return GeneratorSet(sub, [k for k, g in enumerate(sub.parent_generator_index) if L.mask[g]])


# ---------------------------------------------------------------------------
# parameters and reference counts


def pencil_size(kind_or_space) -> int:
    """prod_{i=0}^{d-2}(q^{i+e}+1): generators through a point."""
    d, e, q = kind_or_space.d, kind_or_space.e, kind_or_space.q
    out = 1
    for i in range(d - 1):
        out *= q_pow(q, e.as_fraction() + i) + 1
    return out


def parameter(L: GeneratorSet) -> Fraction:
    return Fraction(L.size, pencil_size(L.space))


def max_parameter(space) -> int:
    return q_pow(space.q, space.e.as_fraction() + space.d - 1) + 1


def disjoint_factor(space) -> int:
    """q^{C(d-1,2) + e(d-1)}."""
    d, e = space.d, space.e.as_fraction()
    return q_pow(space.q, binom2(d - 1) + e * (d - 1))


def cl_counts(space, x, i: int) -> tuple[Fraction, Fraction]:
    """(alpha, beta): members meeting pi in a (d-i-1)-space, pi in L / pi not in L."""
    d, e, q = space.d, space.e.as_fraction(), space.q
    if not 1 <= i <= d:
        raise CLError(f"index i={i} out of range 1..{d}")
    x = Fraction(x)
    scale = q_pow(q, binom2(i - 1) + (i - 1) * e)
    alpha = ((x - 1) * gaussian_binomial(d - 1, i - 1, q)
             + q_pow(q, i + e - 1) * gaussian_binomial(d - 1, i, q)) * scale
    beta = x * gaussian_binomial(d - 1, i - 1, q) * scale
    return alpha, beta


def converse_admissible(kind: PolarSpaceKind, i: int) -> bool:
    """Whether the counts for index i alone characterise degree one sets."""
    if kind.family is Family.HYPERBOLIC:
        return i % 2 == 1
    if kind.family in (Family.PARABOLIC, Family.SYMPLECTIC) and kind.d % 2 == 1:
        return i != kind.d
    return True


# ---------------------------------------------------------------------------
# checks


@dataclass
class Witness:
    generator: int
    expected: Fraction
    actual: int

    def to_json(self) -> dict:
        return {"generator": self.generator, "expected": str(self.expected), "actual": self.actual}


def _witnesses(expected: Sequence[Fraction], actual: np.ndarray) -> list[Witness]:
    out = []
    for g, (e, a) in enumerate(zip(expected, actual)):
        if e != int(a):
            out.append(Witness(g, e, int(a)))
            if len(out) == MAX_WITNESSES:
                break
    return out


def relation_counts(L: GeneratorSet, i: int) -> np.ndarray:
    """For every generator, the number of members of L in relation R_i with it."""
    R = L.space.relation_matrix
    return (R[:, L.mask] == i).sum(axis=1)


@dataclass
class CheckResult:
    passed: bool
    witnesses: list[Witness] = field(default_factory=list)


def is_cl_disjointness(L: GeneratorSet) -> CheckResult:
    x = parameter(L)
    factor = disjoint_factor(L.space)
    actual = relation_counts(L, L.space.d)
    chi = L.chi
    expected = [(x - int(c)) * factor for c in chi]
    wit = _witnesses(expected, actual)
    return CheckResult(not wit and x.denominator == 1, wit)


def _exact_array(rows: list[list[int]], n_cols: int, bound: int) -> np.ndarray:
    """int64 when |entries| * bound provably fits, else Python ints (object)."""
    biggest = max((abs(v) for r in rows for v in r), default=0)
    dtype = np.int64 if biggest * bound < 2**62 else object
    return np.array(rows, dtype=dtype).reshape(len(rows), n_cols)


@lru_cache(maxsize=64)
def _kernel_rows(space: PolarSpace, columns: tuple[int, ...] | None = None) -> np.ndarray:
    """Integer basis of ker(A) (A restricted to ``columns``), one vector per row."""
    A = space.incidence if columns is None else space.incidence[:, list(columns)]
    K = kernel_basis(A)
    rows = [[int(K[r, c]) for r in range(K.nrows())] for c in range(K.ncols())]
    return _exact_array(rows, A.shape[1], A.shape[1])


@lru_cache(maxsize=32)
def _scheme(space: PolarSpace) -> SchemeData:
    return build_scheme(space)


def in_row_space(L: GeneratorSet) -> bool:
    """chi in im(A^T), tested as chi orthogonal to ker(A)."""
    K = _kernel_rows(L.space)
    if K.shape[0] == 0:
        return True
    return not K[:, L.mask].sum(axis=1).any()


def in_v0_v1(L: GeneratorSet) -> bool:
    """chi in V_0 + V_1, tested with the annihilating product of A_1."""
    return not _scheme(L.space).v01_residual(L.chi).any()


def is_degree_one(L: GeneratorSet) -> bool:
    a, b = in_row_space(L), in_v0_v1(L)
    if a != b:
        raise ConsistencyError(f"row-space and eigenspace tests disagree on {L}")
    return a


@dataclass
class ProfileResult:
    i: int
    passed: bool
    alpha: Fraction
    beta: Fraction
    converse_admissible: bool
    witnesses: list[Witness] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"i": self.i, "passed": self.passed, "alpha": str(self.alpha),
                "beta": str(self.beta), "converse_admissible": self.converse_admissible,
                "witnesses": [w.to_json() for w in self.witnesses]}


def intersection_profile(L: GeneratorSet, i: int) -> ProfileResult:
    space = L.space
    alpha, beta = cl_counts(space, parameter(L), i)
    actual = relation_counts(L, i)
    expected = [alpha if c else beta for c in L.chi]
    wit = _witnesses(expected, actual)
    return ProfileResult(i, not wit, alpha, beta, converse_admissible(space.kind, i), wit)


@dataclass
class CLReport:
    space: dict
    size: int
    x: Fraction
    x_integral: bool
    is_cl: bool
    is_degree_one: bool
    witnesses: dict[str, list[Witness]]
    profile: list[ProfileResult]

    def to_json(self) -> dict:
        return {
            "space": self.space,
            "size": self.size,
            "x": str(self.x),
            "x_integral": self.x_integral,
            "is_cl": self.is_cl,
            "is_degree_one": self.is_degree_one,
            "witnesses": {k: [w.to_json() for w in v] for k, v in self.witnesses.items()},
            "profile": [p.to_json() for p in self.profile],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def check(L: GeneratorSet) -> CLReport:
    """Full report: parameter, CL test, degree-one test and intersection-count profile."""
    x = parameter(L)
    cl = is_cl_disjointness(L)
    deg = is_degree_one(L)
    profile = [intersection_profile(L, i) for i in range(1, L.space.d + 1)]
    witnesses = {"disjointness": cl.witnesses}
    for p in profile:
        if p.witnesses:
            witnesses[f"profile_i{p.i}"] = p.witnesses
    return CLReport(L.space.descriptor(), L.size, x, x.denominator == 1, cl.passed, deg,
                    witnesses, profile)


# ---------------------------------------------------------------------------
# one class of Q+(2d-1,q)


def one_class_pencil_size(space) -> int:
    """Generators of one class through a point: prod_{i=1}^{d-2}(q^i+1)."""
    out = 1
    for i in range(1, space.d - 1):
        out *= space.q**i + 1
    return out


def one_class_parameter(L: GeneratorSet) -> Fraction:
    return Fraction(L.size, one_class_pencil_size(L.space))


def one_class_formula(space, x, i: int) -> tuple[Fraction, Fraction]:
    d, q = space.d, space.q
    if not 1 <= i <= d // 2:
        raise CLError(f"one-class index i={i} out of range 1..{d // 2}")
    x = Fraction(x)
    scale = q ** ((2 * i - 1) * (i - 1))
    alpha = ((x - 1) * gaussian_binomial(d - 1, 2 * i - 1, q)
             + q ** (2 * i - 1) * gaussian_binomial(d - 1, 2 * i, q)) * scale
    beta = x * gaussian_binomial(d - 1, 2 * i - 1, q) * scale
    return alpha, beta


def one_class_profile(L: GeneratorSet, oc: OneClassScheme, i: int) -> ProfileResult:
    """Counts of members meeting pi in a (d-2i-1)-space, for pi in the class."""
    space = L.space
    if oc.parent.space is not space:
        raise CLError("class belongs to a different space")
    members = set(oc.members)
    if not set(L.indices) <= members:
        raise CLError("set is not contained in the class")
    alpha, beta = one_class_formula(space, one_class_parameter(L), i)
    counts = relation_counts(L, 2 * i)[oc.members]
    expected = [alpha if L.mask[g] else beta for g in oc.members]
    wit = []
    for g, e, a in zip(oc.members, expected, counts):
        if e != int(a):
            wit.append(Witness(g, e, int(a)))
            if len(wit) == MAX_WITNESSES:
                break
    return ProfileResult(i, not wit, alpha, beta, True, wit)


def one_class_is_cl(L: GeneratorSet, oc: OneClassScheme) -> bool:
    return all(one_class_profile(L, oc, i).passed for i in range(1, oc.half_rank + 1))


# ---------------------------------------------------------------------------
# spreads


def is_spread(space: PolarSpace, S: Iterable[int]) -> bool:
    covered, total = 0, 0
    for g in S:
        m = space.generator_masks[g]
        if covered & m:
            return False
        covered |= m
        total += 1
    return covered == (1 << space.num_points) - 1


def spread_intersection_check(L: GeneratorSet, S: Iterable[int]) -> bool:
    """|L meet S| = x for a spread S."""
    S = list(S)
    if not is_spread(L.space, S):
        raise CLError("not a spread")
    return sum(1 for g in S if L.mask[g]) == parameter(L)


# ---------------------------------------------------------------------------
# rank three, e = 1: W(5,q) and Q(6,q)


def s1_formula(q: int, x) -> Fraction:
    return q**3 + Fraction(x) * (q * q + q + 1)


def d2_formula(q: int, x) -> Fraction:
    return (Fraction(x) - 2) * q * q * (q - 1)


def s2_formula(q: int, x) -> Fraction:
    x = Fraction(x)
    return x * (q * q + 1) * (q + 1) - 2 * (x - 1) * q**3 + d2_formula(q, x)


@dataclass
class PairCounts:
    x: Fraction
    s1: Fraction
    s2: Fraction
    d2: Fraction
    s1_ok: bool
    skew_pairs: int
    s2_ok: bool
    d2_ok: bool
    mismatches: list[tuple[int, int, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.s1_ok and self.s2_ok and self.d2_ok


def s1_s2_d2(L: GeneratorSet, max_pairs: int | None = None) -> PairCounts:
    """Compare exhaustive meet/skew counts with the rank-three formulas.

    s1: members meeting a member (itself included); for every skew pair of
    members, s2 members meet both and d2 members are skew to both.
    """
    space = L.space
    if space.d != 3 or space.e != 1:
        raise CLError("s1/s2/d2 are defined for W(5,q) and Q(6,q)")
    q, x = space.q, parameter(L)
    s1, s2, d2 = s1_formula(q, x), s2_formula(q, x), d2_formula(q, x)
    idx = list(L.indices)
    skew = space.relation_matrix[np.ix_(idx, idx)] == space.d
    meets = ~skew
    s1_ok = bool((meets.sum(axis=1) == s1).all())
    pairs = 0
    mismatches = []
    s2_ok = d2_ok = True
    a_idx, b_idx = np.nonzero(np.triu(skew, 1))
    for a, b in zip(a_idx, b_idx):
        if max_pairs is not None and pairs >= max_pairs:
            break
        pairs += 1
        both_meet = int((meets[a] & meets[b]).sum())
        both_skew = int((skew[a] & skew[b]).sum())
        if both_meet != s2 or both_skew != d2:
            s2_ok &= both_meet == s2
            d2_ok &= both_skew == d2
            if len(mismatches) < MAX_WITNESSES:
                mismatches.append((idx[a], idx[b], both_meet, both_skew))
    return PairCounts(x, s1, s2, d2, s1_ok, pairs, s2_ok, d2_ok, mismatches)


def skew_bound(q: int, x, c: int) -> bool:
    """(c+1) s1 - C(c+1,2) s2 > x (q^2+1)(q+1)."""
    if c < 0:
        raise CLError("c must be non-negative")
    lhs = (c + 1) * s1_formula(q, x) - binom2(c + 1) * s2_formula(q, x)
    return lhs > Fraction(x) * (q * q + 1) * (q + 1)


def skew_bound_sides(q: int, x, c: int) -> tuple[Fraction, Fraction]:
    lhs = (c + 1) * s1_formula(q, x) - binom2(c + 1) * s2_formula(q, x)
    return lhs, Fraction(x) * (q * q + 1) * (q + 1)


def _icbrt(n: int) -> int:
    lo, hi = 0, 1
    while hi**3 <= n:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid**3 <= n:
            lo = mid
        else:
            hi = mid
    return lo


def _cbrt_bounds(n: int, bits: int) -> tuple[Fraction, Fraction]:
    scale = 1 << bits
    r = _icbrt(n * scale**3)
    lo = Fraction(r, scale)
    hi = lo if r**3 == n * scale**3 else Fraction(r + 1, scale)
    return lo, hi


def disjoint_threshold_bounds(q: int, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Rational enclosure of cbrt(2q^2) - cbrt(4q)/3 + 1/6."""
    a_lo, a_hi = _cbrt_bounds(2 * q * q, bits)
    b_lo, b_hi = _cbrt_bounds(4 * q, bits)
    sixth = Fraction(1, 6)
    return a_lo - b_hi / 3 + sixth, a_hi - b_lo / 3 + sixth


def in_disjoint_range(q: int, x) -> bool:
    """Exact test of 2 <= x <= cbrt(2q^2) - cbrt(4q)/3 + 1/6."""
    x = Fraction(x)
    if x < 2:
        return False
    bits = 32
    while True:
        lo, hi = disjoint_threshold_bounds(q, bits)
        if x <= lo:
            return True
        if x > hi:
            return False
        if lo == hi:
            return x <= lo
        # an irrational threshold never equals x, so refinement terminates
        bits *= 2


def one_class_degree_one(L: GeneratorSet, oc: OneClassScheme) -> bool:
    """chi (on the class) lies in the row space of the point-by-class incidence matrix."""
    members = tuple(oc.members)
    if not set(L.indices) <= set(members):
        raise CLError("set is not contained in the class")
    K = _kernel_rows(L.space, members)
    if K.shape[0] == 0:
        return True
    chi = L.mask[list(members)]
    return not K[:, chi].sum(axis=1).any()
