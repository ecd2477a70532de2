"""Finite classical polar spaces: forms, points, generators and incidence.

Coordinates and forms are fixed per family so that the point and generator
orderings are reproducible:

* ``W(2d-1,q)``   B(x,y) = sum_{i<d} x_i y_{2d-1-i} - x_{2d-1-i} y_i
* ``Q+(2d-1,q)``  Q(x) = sum_{i<d} x_i x_{2d-1-i}
* ``Q(2d,q)``     Q(x) = x_d^2 + sum_{i<d} x_i x_{2d-i}
* ``Q-(2d+1,q)``  Q(x) = sum_{i<d} x_i x_{2d+1-i} + x_d^2 + x_d x_{d+1} + c x_{d+1}^2
                  with c the smallest element making t^2 + t + c irreducible
* ``H(n,q)``      h(x,y) = sum_i x_i y_i^r,  r = sqrt(q)

Points are normalised vectors (first non-zero coordinate 1) sorted
lexicographically on their element codes.  Generators are sorted
lexicographically on their flattened RREF matrices.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .algebra import FiniteField, HalfInt, gf, gf_kernel, gf_rank, gf_rref, q_pow
from .algebra.field import SUPPORTED_ORDERS

DEFAULT_GENERATOR_CAP = 100_000


class CapacityError(RuntimeError):
    """Instance too large for exhaustive enumeration."""


class SpaceError(ValueError):
    pass


class Family(Enum):
    HYPERBOLIC = "Q+"
    PARABOLIC = "Q"
    ELLIPTIC = "Q-"
    SYMPLECTIC = "W"
    HERMITIAN_ODD = "H_odd"
    HERMITIAN_EVEN = "H_even"

    @property
    def symbol(self) -> str:
        return "H" if self in (Family.HERMITIAN_ODD, Family.HERMITIAN_EVEN) else self.value

    @property
    def is_hermitian(self) -> bool:
        return self in (Family.HERMITIAN_ODD, Family.HERMITIAN_EVEN)

    @property
    def is_quadric(self) -> bool:
        return self in (Family.HYPERBOLIC, Family.PARABOLIC, Family.ELLIPTIC)


_E_TWICE = {
    Family.HYPERBOLIC: 0,
    Family.HERMITIAN_ODD: 1,
    Family.SYMPLECTIC: 2,
    Family.PARABOLIC: 2,
    Family.HERMITIAN_EVEN: 3,
    Family.ELLIPTIC: 4,
}


@dataclass(frozen=True)
class PolarSpaceKind:
    family: Family
    d: int
    q: int

    def __post_init__(self):
        if self.d < 2:
            raise SpaceError(f"rank must be at least 2, got {self.d}")
        if self.q not in SUPPORTED_ORDERS:
            raise SpaceError(f"unsupported field size {self.q}")
        if self.family.is_hermitian and int(round(self.q ** 0.5)) ** 2 != self.q:
            raise SpaceError(f"hermitian spaces need a square q, got {self.q}")

    @property
    def e(self) -> HalfInt:
        return HalfInt(_E_TWICE[self.family])

    @property
    def n(self) -> int:
        """Projective dimension of the ambient space."""
        d = self.d
        return {
            Family.HYPERBOLIC: 2 * d - 1,
            Family.HERMITIAN_ODD: 2 * d - 1,
            Family.SYMPLECTIC: 2 * d - 1,
            Family.PARABOLIC: 2 * d,
            Family.HERMITIAN_EVEN: 2 * d,
            Family.ELLIPTIC: 2 * d + 1,
        }[self.family]

    @property
    def shorthand(self) -> str:
        return f"{self.family.symbol}:{self.n}:{self.q}"

    @property
    def label(self) -> str:
        return f"{self.family.symbol}({self.n},{self.q})"

    def __str__(self) -> str:
        return self.label

    def descriptor(self) -> dict:
        return {"kind": self.family.symbol, "d": self.d, "q": self.q, "n": self.n}

    @property
    def num_generators(self) -> int:
        return _generator_count(self.d, self.e, self.q)

    @property
    def num_points(self) -> int:
        d, q = self.d, self.q
        return (q_pow(q, self.e.as_fraction() + d - 1) + 1) * (q**d - 1) // (q - 1)

    @classmethod
    def from_symbol(cls, symbol: str, n: int, q: int) -> "PolarSpaceKind":
        symbol = symbol.strip()
        if symbol == "W":
            if n % 2 == 0:
                raise SpaceError("W(n,q) needs odd n")
            return cls(Family.SYMPLECTIC, (n + 1) // 2, q)
        if symbol == "Q+":
            if n % 2 == 0:
                raise SpaceError("Q+(n,q) needs odd n")
            return cls(Family.HYPERBOLIC, (n + 1) // 2, q)
        if symbol == "Q-":
            if n % 2 == 0:
                raise SpaceError("Q-(n,q) needs odd n")
            return cls(Family.ELLIPTIC, (n - 1) // 2, q)
        if symbol == "Q":
            if n % 2:
                raise SpaceError("Q(n,q) needs even n")
            return cls(Family.PARABOLIC, n // 2, q)
        if symbol == "H":
            if n % 2:
                return cls(Family.HERMITIAN_ODD, (n + 1) // 2, q)
            return cls(Family.HERMITIAN_EVEN, n // 2, q)
        raise SpaceError(f"unknown polar space kind {symbol!r}")

    @classmethod
    def from_descriptor(cls, desc: dict) -> "PolarSpaceKind":
        try:
            symbol, q = desc["kind"], int(desc["q"])
        except KeyError as exc:
            raise SpaceError(f"descriptor missing {exc}") from None
        if "n" in desc:
            kind = cls.from_symbol(symbol, int(desc["n"]), q)
            if "d" in desc and int(desc["d"]) != kind.d:
                raise SpaceError(f"descriptor rank {desc['d']} inconsistent with n={desc['n']}")
            return kind
        if symbol == "H":
            raise SpaceError("hermitian descriptors need 'n' (H(2d-1,q) and H(2d,q) share d)")
        d = int(desc["d"])
        n = {"W": 2 * d - 1, "Q+": 2 * d - 1, "Q": 2 * d, "Q-": 2 * d + 1}.get(symbol)
        if n is None:
            raise SpaceError(f"unknown polar space kind {symbol!r}")
        return cls.from_symbol(symbol, n, q)

    @classmethod
    def parse(cls, text: str) -> "PolarSpaceKind":
        """Parse the shorthand ``K:n:q`` or a JSON descriptor."""
        text = text.strip()
        if text.startswith("{"):
            return cls.from_descriptor(json.loads(text))
        parts = text.split(":")
        if len(parts) != 3:
            raise SpaceError(f"expected K:n:q, got {text!r}")
        try:
            n, q = int(parts[1]), int(parts[2])
        except ValueError:
            raise SpaceError(f"expected integers in {text!r}") from None
        return cls.from_symbol(parts[0], n, q)


def _generator_count(d: int, e: HalfInt, q: int) -> int:
    total = 1
    for i in range(d):
        total *= q_pow(q, e.as_fraction() + i) + 1
    return total


def classify_type(kind: PolarSpaceKind) -> str:
    """Type I, II or III of the space (see module docs of ``clsets``)."""
    fam, d = kind.family, kind.d
    if fam is Family.HYPERBOLIC:
        return "II" if d % 2 == 0 else "I"
    if fam in (Family.PARABOLIC, Family.SYMPLECTIC):
        return "III" if d % 2 == 1 else "I"
    return "I"


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True, order=True)
class Subspace:
    """Projective subspace stored as its canonical RREF matrix over GF(q)."""

    rows: tuple[tuple[int, ...], ...]

    @classmethod
    def span(cls, field: FiniteField, vectors) -> "Subspace":
        M = np.asarray(vectors, dtype=np.int64)
        if M.ndim == 1:
            M = M[None, :]
        R, _ = gf_rref(field, M)
        return cls(tuple(tuple(int(x) for x in r) for r in R))

    @property
    def dim(self) -> int:
        return len(self.rows) - 1

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64)

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(x for r in self.rows for x in r)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, rows={list(map(list, self.rows))})"


def intersection_dim(field: FiniteField, a: Subspace, b: Subspace) -> int:
    """Projective dimension of the meet; -1 when disjoint."""
    if not a.rows or not b.rows:
        return -1
    joined = gf_rank(field, np.vstack([a.matrix, b.matrix]))
    return len(a.rows) + len(b.rows) - joined - 1


# ---------------------------------------------------------------------------
# forms


class Form:
    """Reflexive form of a polar space, evaluated on arrays of vectors.

    ``gram`` is the matrix of the (polar) sesquilinear form,
    B(x, y) = sum x_a G_ab y_b^sigma with sigma the Frobenius x -> x^sqrt(q)
    for hermitian forms and the identity otherwise.  Quadrics also keep the
    upper-triangular coefficient matrix ``quad`` of Q.
    """

    def __init__(self, field: FiniteField, gram: np.ndarray, quad: np.ndarray | None = None,
                 hermitian: bool = False):
        self.field = field
        self.gram = np.asarray(gram, dtype=np.int64)
        self.quad = None if quad is None else np.asarray(quad, dtype=np.int64)
        self.hermitian = hermitian

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def _sigma(self, Y):
        return self.field.conj_table[Y] if self.hermitian else Y

    def bilinear(self, X, Y) -> np.ndarray:
        """Matrix [B(x, y)] for rows x of X and y of Y."""
        F = self.field
        XG = F.matmul(np.atleast_2d(X), self.gram)
        return F.matmul(XG, self._sigma(np.atleast_2d(Y)).T)

    def is_isotropic(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.int64))
        F = self.field
        if self.quad is not None:
            acc = np.zeros(len(X), dtype=np.int64)
            for a, b in zip(*np.nonzero(self.quad)):
                term = F.mul_table[self.quad[a, b], F.mul_table[X[:, a], X[:, b]]]
                acc = F.add_table[acc, term]
            return acc == 0
        if self.hermitian:
            XG = F.matmul(X, self.gram)
            return F.vsum(F.mul_table[XG, self._sigma(X)]) == 0
        return np.ones(len(X), dtype=bool)


def _elliptic_constant(field: FiniteField) -> int:
    for c in range(1, field.q):
        if all(field.add(field.add(field.mul(t, t), t), c) != 0 for t in field.elements):
            return c
    raise SpaceError(f"no irreducible t^2+t+c over {field}")


def make_form(kind: PolarSpaceKind, field: FiniteField) -> Form:
    fam, d = kind.family, kind.d
    m = kind.n + 1
    one, mone = 1, field.negate(1)
    G = np.zeros((m, m), dtype=np.int64)
    if fam is Family.SYMPLECTIC:
        for i in range(d):
            G[i, m - 1 - i] = one
            G[m - 1 - i, i] = mone
        return Form(field, G)
    if fam.is_hermitian:
        return Form(field, np.eye(m, dtype=np.int64), hermitian=True)
    Qm = np.zeros((m, m), dtype=np.int64)
    for i in range(d):
        Qm[i, m - 1 - i] = one
    if fam is Family.PARABOLIC:
        Qm[d, d] = one
    elif fam is Family.ELLIPTIC:
        Qm[d, d] = one
        Qm[d, d + 1] = one
        Qm[d + 1, d + 1] = _elliptic_constant(field)
    # polar form B(x,y) = Q(x+y) - Q(x) - Q(y)
    for a in range(m):
        for b in range(m):
            if a == b:
                G[a, a] = field.add(Qm[a, a], Qm[a, a])
            elif a < b:
                G[a, b] = Qm[a, b]
                G[b, a] = Qm[a, b]
    return Form(field, G, quad=Qm)


def normalised_vectors(field: FiniteField, length: int) -> np.ndarray:
    """All vectors with first non-zero entry 1, lexicographically sorted."""
    out = []
    for lead in range(length):
        tail = length - lead - 1
        for rest in itertools.product(range(field.q), repeat=tail):
            out.append((0,) * lead + (1,) + rest)
    out.sort()
    return np.array(out, dtype=np.int64)


def normalise(field: FiniteField, v) -> tuple[int, ...]:
    v = [int(x) for x in v]
    for x in v:
        if x:
            inv = field.inv(x)
            return tuple(field.mul(inv, y) for y in v)
    raise SpaceError("zero vector has no projective point")


def _bits_to_int(row: np.ndarray) -> int:
    return int.from_bytes(np.packbits(row.astype(np.uint8), bitorder="little").tobytes(), "little")


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# ---------------------------------------------------------------------------
# the space itself


class PolarSpace:
    """Fully enumerated polar space (immutable after construction).

    ``points`` are the isotropic points (as normalised vectors),
    ``generators`` the maximal totally isotropic subspaces and ``incidence``
    the 0/1 point-by-generator matrix A.  Spaces obtained by embedding
    (hyperplane sections, nucleus images) carry ``parent`` and
    ``parent_generator_index`` when their generators are generators of the
    parent.
    """

    def __init__(self, kind: PolarSpaceKind, field: FiniteField, form: Form,
                 point_vectors: np.ndarray, perp_masks: list[int],
                 generator_vectors: list[np.ndarray], *, parent: "PolarSpace | None" = None,
                 parent_point_index: Sequence[int] | None = None):
        self.kind = kind
        self.field = field
        self.form = form
        self.d = kind.d
        self.e = kind.e
        self.q = kind.q
        self.points = point_vectors
        self.points.setflags(write=False)
        self.perp_masks = list(perp_masks)
        self.parent = parent
        self.parent_point_index = None if parent_point_index is None else list(parent_point_index)

        self._point_lookup = {tuple(int(x) for x in v): i for i, v in enumerate(point_vectors)}
        gens = sorted(Subspace.span(field, g) for g in generator_vectors)
        if len(set(gens)) != len(gens):
            raise SpaceError("duplicate generator produced by enumeration")
        self.generators: list[Subspace] = gens
        self._generator_lookup = {g: i for i, g in enumerate(gens)}
        self.generator_masks = [self.subspace_mask(g, strict=True) for g in gens]

        A = np.zeros((len(point_vectors), len(gens)), dtype=np.uint8)
        for j, m in enumerate(self.generator_masks):
            A[list(iter_bits(m)), j] = 1
        A.setflags(write=False)
        self.incidence = A

        self.parent_generator_index = None
        if parent is not None and parent.d == self.d:
            idx = [parent._generator_lookup.get(g) for g in gens]
            if all(i is not None for i in idx):
                self.parent_generator_index = idx

    # -- basic facts ---------------------------------------------------------

    def __repr__(self) -> str:
        return (f"PolarSpace({self.kind.label}, points={self.num_points}, "
                f"generators={self.num_generators})")

    @property
    def label(self) -> str:
        return self.kind.label

    @property
    def num_points(self) -> int:
        return len(self.points)

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    @property
    def type(self) -> str:
        return classify_type(self.kind)

    @property
    def ambient_dim(self) -> int:
        return self.points.shape[1] - 1

    def point_index(self, v) -> int:
        key = normalise(self.field, v)
        try:
            return self._point_lookup[key]
        except KeyError:
            raise SpaceError(f"{key} is not a point of {self.label}") from None

    def generator_index(self, g: Subspace) -> int:
        try:
            return self._generator_lookup[g]
        except KeyError:
            raise SpaceError(f"{g} is not a generator of {self.label}") from None

    def subspace_mask(self, s: Subspace, strict: bool = False) -> int:
        """Bitset of the points of the space lying in s.

        With ``strict`` every point of s must belong to the space.
        """
        vecs = span_vectors(self.field, s.matrix)
        mask = 0
        for v in vecs[1:]:
            i = self._point_lookup.get(normalise(self.field, v))
            if i is None:
                if strict:
                    raise SpaceError(f"{s} is not totally isotropic in {self.label}")
                continue
            mask |= 1 << i
        return mask

    def points_of(self, mask: int) -> list[int]:
        return list(iter_bits(mask))

    def collinear(self, i: int, j: int) -> bool:
        return bool(self.perp_masks[i] >> j & 1)

    # -- pairwise generator data --------------------------------------------

    @cached_property
    def intersection_counts(self) -> np.ndarray:
        """Number of common points of each pair of generators."""
        A = self.incidence.astype(np.int64)
        C = A.T @ A
        C.setflags(write=False)
        return C

    @cached_property
    def intersection_dims(self) -> np.ndarray:
        """Projective dimension of each pairwise meet (-1 = disjoint)."""
        q = self.q
        lut = {(q ** (k + 1) - 1) // (q - 1): k for k in range(self.d)}
        lut[0] = -1
        C = self.intersection_counts
        D = np.full(C.shape, -2, dtype=np.int8)
        for c, k in lut.items():
            D[C == c] = k
        if (D == -2).any():
            raise SpaceError("intersection sizes are not subspace sizes")
        D.setflags(write=False)
        return D

    @cached_property
    def relation_matrix(self) -> np.ndarray:
        """R[a, b] = i iff dim(g_a meet g_b) = d - i - 1."""
        R = (self.d - 1 - self.intersection_dims).astype(np.uint8)
        R.setflags(write=False)
        return R

    def generators_through(self, point: int) -> list[int]:
        return [int(j) for j in np.nonzero(self.incidence[point])[0]]

    # -- export --------------------------------------------------------------

    def descriptor(self) -> dict:
        return self.kind.descriptor()

    def export(self) -> dict:
        return {
            "space": self.descriptor(),
            "points": [[list(map(int, v))] for v in self.points],
            "generators": [[list(r) for r in g.rows] for g in self.generators],
        }


def span_vectors(field: FiniteField, basis) -> np.ndarray:
    """All q^k vectors of the span of the rows of ``basis`` (zero first)."""
    basis = np.atleast_2d(np.asarray(basis, dtype=np.int64))
    vecs = np.zeros((1, basis.shape[1]), dtype=np.int64)
    for b in basis:
        layers = [vecs]
        for t in range(1, field.q):
            layers.append(field.add_table[vecs, field.mul_table[t, b][None, :]])
        vecs = np.vstack(layers)
    return vecs


def _perp_masks(form: Form, vectors: np.ndarray) -> list[int]:
    B = form.bilinear(vectors, vectors) == 0
    return [_bits_to_int(row) for row in B]


def _vector_codes(field: FiniteField, X: np.ndarray) -> np.ndarray:
    weights = field.q ** np.arange(X.shape[-1], dtype=np.int64)
    return X @ weights


def enumerate_isotropic(field: FiniteField, point_vectors: np.ndarray, perp_masks: list[int],
                        depth: int, allowed: int | None = None) -> list[np.ndarray]:
    """Bases of all totally isotropic subspaces of vector dimension ``depth``.

    Depth-first extension of flags.  A flag P_1 < P_2 < ... (point indices)
    is kept only if every point of span(P_1..P_k) outside span(P_1..P_{k-1})
    has index >= P_k; this accepts each subspace exactly once (its greedy
    lexicographically minimal basis) without a global hash of candidates.
    """
    n_pts, length = point_vectors.shape
    if allowed is None:
        allowed = (1 << n_pts) - 1
    code_to_point = np.full(field.q ** length, -1, dtype=np.int64)
    codes = _vector_codes(field, point_vectors)
    for t in range(1, field.q):
        scaled = field.mul_table[t, point_vectors]
        code_to_point[_vector_codes(field, scaled)] = np.arange(n_pts)
    assert (code_to_point[codes] == np.arange(n_pts)).all()

    out: list[np.ndarray] = []

    def extend(path: list[int], vecs: np.ndarray, mask: int, perp: int):
        if len(path) == depth:
            out.append(point_vectors[path])
            return
        last = path[-1] if path else -1
        cand = perp & ~mask & allowed & ~((1 << (last + 1)) - 1)
        for p in iter_bits(cand):
            pv = point_vectors[p]
            shifted = field.add_table[vecs, pv[None, :]]
            idx = code_to_point[_vector_codes(field, shifted)]
            if idx.min() < p:
                continue
            layers = [vecs, shifted]
            for t in range(2, field.q):
                layers.append(field.add_table[vecs, field.mul_table[t, pv][None, :]])
            new_mask = mask
            for i in idx.tolist():
                new_mask |= 1 << i
            extend(path + [p], np.vstack(layers), new_mask, perp & perp_masks[p])

    start = np.zeros((1, length), dtype=np.int64)
    extend([], start, 0, allowed)
    return out


def build_space(kind: PolarSpaceKind | str, cap: int = DEFAULT_GENERATOR_CAP) -> PolarSpace:
    """Enumerate the polar space of the given kind."""
    if isinstance(kind, str):
        kind = PolarSpaceKind.parse(kind)
    expected = kind.num_generators
    if expected > cap:
        raise CapacityError(f"{kind.label} has {expected} generators (cap {cap})")
    field = gf(kind.q)
    form = make_form(kind, field)
    vecs = normalised_vectors(field, kind.n + 1)
    pts = vecs[form.is_isotropic(vecs)]
    masks = _perp_masks(form, pts)
    gens = enumerate_isotropic(field, pts, masks, kind.d)
    if len(gens) != expected:
        raise SpaceError(f"{kind.label}: enumerated {len(gens)} generators, expected {expected}")
    return PolarSpace(kind, field, form, pts, masks, gens)


def load_space(spec: str | PolarSpaceKind) -> PolarSpace:
    """Cached ``build_space``; shorthand and kind give the same object."""
    kind = PolarSpaceKind.parse(spec) if isinstance(spec, str) else spec
    return _cached_space(kind)


@lru_cache(maxsize=32)
def _cached_space(kind: PolarSpaceKind) -> PolarSpace:
    return build_space(kind)


def isotropic_subspaces(space: PolarSpace, vector_dim: int) -> list[Subspace]:
    """All totally isotropic subspaces of projective dimension vector_dim - 1."""
    bases = enumerate_isotropic(space.field, space.points, space.perp_masks, vector_dim)
    return sorted(Subspace.span(space.field, b) for b in bases)


def perp(space: PolarSpace, s: Subspace) -> Subspace:
    """Image of s under the polarity of the form."""
    F = space.field
    M = F.matmul(s.matrix, space.form.gram)
    K = gf_kernel(F, M)
    if space.form.hermitian:
        K = F.conj_table[K]
    return Subspace.span(F, K) if len(K) else Subspace(())


# ---------------------------------------------------------------------------
# embeddings


def embedded_space(parent: PolarSpace, point_indices: Iterable[int], family: Family,
                   d: int) -> PolarSpace:
    """Polar space on a subset of the parent's points, using the parent's form.

    Used for hyperplane sections (and their images under the nucleus
    projection): the collinearity of the sub-geometry is the parent's.
    """
    idx = sorted(set(point_indices))
    pts = parent.points[idx].copy()
    pos = {p: k for k, p in enumerate(idx)}
    masks = []
    for p in idx:
        m = 0
        for r in iter_bits(parent.perp_masks[p]):
            k = pos.get(r)
            if k is not None:
                m |= 1 << k
        masks.append(m)
    kind = PolarSpaceKind(family, d, parent.q)
    gens = enumerate_isotropic(parent.field, pts, masks, d)
    if len(gens) != kind.num_generators:
        raise SpaceError(f"embedded {kind.label}: found {len(gens)} generators, "
                         f"expected {kind.num_generators}")
    return PolarSpace(kind, parent.field, parent.form, pts, masks, gens,
                      parent=parent, parent_point_index=idx)


@dataclass
class Section:
    """Hyperplane section of a parabolic quadric."""

    hyperplane: tuple[int, ...]
    kind: str                      # "hyperbolic" | "elliptic" | "cone"
    point_indices: list[int]
    space: PolarSpace | None

    @property
    def generator_indices(self) -> list[int]:
        """Parent generator indices (hyperbolic sections only)."""
        if self.space is None or self.space.parent_generator_index is None:
            return []
        return list(self.space.parent_generator_index)


def _section_points(space: PolarSpace, h) -> list[int]:
    F = space.field
    h = np.asarray(h, dtype=np.int64)
    vals = F.vsum(F.mul_table[space.points, h[None, :]])
    return [int(i) for i in np.nonzero(vals == 0)[0]]


def classify_section(space: PolarSpace, h) -> str:
    if space.kind.family is not Family.PARABOLIC:
        raise SpaceError("hyperplane sections are defined here for parabolic quadrics only")
    q, d = space.q, space.d
    count = len(_section_points(space, h))
    hyperbolic = (q**d - 1) * (q ** (d - 1) + 1) // (q - 1)
    elliptic = (q**d + 1) * (q ** (d - 1) - 1) // (q - 1)
    cone = (q ** (2 * d - 1) - 1) // (q - 1)
    return {hyperbolic: "hyperbolic", elliptic: "elliptic", cone: "cone"}[count]


def hyperplane_section(space: PolarSpace, h) -> Section:
    """Section of Q(2d,q) by the hyperplane {x : h.x = 0}."""
    h = normalise(space.field, h)
    kind = classify_section(space, h)
    idx = _section_points(space, h)
    sub = None
    if kind == "hyperbolic":
        sub = embedded_space(space, idx, Family.HYPERBOLIC, space.d)
    elif kind == "elliptic":
        sub = embedded_space(space, idx, Family.ELLIPTIC, space.d - 1)
    return Section(h, kind, idx, sub)


def hyperplanes(space: PolarSpace, kind: str | None = None) -> Iterator[tuple[int, ...]]:
    """Hyperplanes (as normalised dual vectors, lexicographic) of a given section kind."""
    for h in normalised_vectors(space.field, space.ambient_dim + 1):
        h = tuple(int(x) for x in h)
        if kind is None or classify_section(space, h) == kind:
            yield h


@dataclass
class NucleusProjection:
    source: PolarSpace               # Q(2d,q), q even
    target: PolarSpace               # W(2d-1,q)
    generator_map: list[int]         # source generator index -> target index
    point_map: list[int]             # source point index -> target point index

    def map_generators(self, indices: Iterable[int]) -> list[int]:
        return sorted(self.generator_map[i] for i in indices)

    def image_space(self, sub: PolarSpace) -> PolarSpace:
        """Image in W(2d-1,q) of a space embedded in the source quadric."""
        if sub.parent is not self.source:
            raise SpaceError("space is not embedded in the projected quadric")
        pts = [self.point_map[i] for i in sub.parent_point_index]
        return embedded_space(self.target, pts, sub.kind.family, sub.d)


def _drop(v, k):
    return [int(x) for i, x in enumerate(v) if i != k]


def nucleus_projection(space: PolarSpace, target: PolarSpace | None = None) -> NucleusProjection:
    """Project Q(2d,q), q even, from its nucleus onto W(2d-1,q)."""
    if space.kind.family is not Family.PARABOLIC:
        raise SpaceError("nucleus projection needs a parabolic quadric")
    if space.q % 2:
        raise SpaceError("a parabolic quadric has a nucleus only for even q")
    d = space.d
    if target is None:
        target = load_space(PolarSpaceKind(Family.SYMPLECTIC, d, space.q))
    F = space.field
    # nucleus is e_d for the standard parabolic form; drop that coordinate
    point_map = [target.point_index(_drop(v, d)) for v in space.points]
    gen_map = []
    for g in space.generators:
        rows = [_drop(r, d) for r in g.rows]
        gen_map.append(target.generator_index(Subspace.span(F, rows)))
    if len(set(gen_map)) != target.num_generators or len(gen_map) != target.num_generators:
        raise SpaceError("nucleus projection is not a bijection on generators")
    return NucleusProjection(space, target, gen_map, point_map)
