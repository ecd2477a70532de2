"""Named example families of (degree one) Cameron-Liebler sets.

Searches here (partial ovoids, disjoint quadrics, spreads) are deterministic
backtracking in index order, so the first solution found is always the same.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any

from .clsets import GeneratorSet, union
from .geometry import (
    Family,
    PolarSpace,
    PolarSpaceKind,
    Section,
    hyperplane_section,
    hyperplanes,
    iter_bits,
    load_space,
    nucleus_projection,
)

DEFAULT_BUDGET = 10.0


class ConstructionError(ValueError):
    pass


def _point(space: PolarSpace, P) -> int:
    if isinstance(P, (int,)) and not isinstance(P, bool):
        if not 0 <= P < space.num_points:
            raise ConstructionError(f"point index {P} out of range")
        return P
    return space.point_index(P)


def point_pencil(space: PolarSpace, P) -> GeneratorSet:
    """All generators through the point P (index or coordinate vector)."""
    try:
        p = _point(space, P)
    except ValueError as exc:
        raise ConstructionError(str(exc)) from None
    return GeneratorSet(space, space.generators_through(p))


def _near_set(space: PolarSpace, g: int) -> GeneratorSet:
    return GeneratorSet(space, [int(k) for k, r in enumerate(space.relation_matrix[g]) if r <= 1])


def base_generator_set(space: PolarSpace, g: int) -> GeneratorSet:
    """Rank 3: the plane g with every plane meeting it in at least a line."""
    if space.d != 3:
        raise ConstructionError("base-plane sets are defined in rank 3")
    return _near_set(space, g)


def base_solid_set(space: PolarSpace, g: int) -> GeneratorSet:
    """Rank 4 analogue: g with every generator meeting it in at least a plane."""
    if space.d != 4:
        raise ConstructionError("base-solid sets are defined in rank 4")
    return _near_set(space, g)


# ---------------------------------------------------------------------------
# embedded hyperbolic quadrics


def _parabolic_host(space: PolarSpace):
    """(Q(2d,q), projection or None) used to find hyperbolic sections."""
    fam = space.kind.family
    if fam is Family.PARABOLIC:
        return space, None
    if fam is Family.SYMPLECTIC:
        if space.q % 2:
            raise ConstructionError(
                f"no hyperbolic quadric is embedded in {space.label} with q odd")
        Q = load_space(PolarSpaceKind(Family.PARABOLIC, space.d, space.q))
        return Q, nucleus_projection(Q, target=space)
    raise ConstructionError(f"embedded hyperbolic quadrics need Q(2d,q) or W(2d-1,q), not {space.label}")


def _as_embedded(space: PolarSpace, projection, section: Section) -> PolarSpace:
    if projection is None:
        return section.space
    return projection.image_space(section.space)


def _section_generators(Q: PolarSpace, h) -> frozenset[int]:
    pts = 0
    for p in _section_point_list(Q, h):
        pts |= 1 << p
    return frozenset(g for g, m in enumerate(Q.generator_masks) if m & ~pts == 0)


def _section_point_list(Q: PolarSpace, h) -> list[int]:
    F = Q.field
    vals = F.vsum(F.mul_table[Q.points, list(h)])
    return [int(i) for i, v in enumerate(vals) if v == 0]


def embedded_hyperbolic_spaces(space: PolarSpace, count: int = 1,
                               budget: float = DEFAULT_BUDGET) -> list[PolarSpace]:
    """``count`` embedded Q+(2d-1,q) with pairwise disjoint generator sets.

    Hyperplanes are tried in lexicographic order; only the chosen sections
    are enumerated as polar spaces.
    """
    Q, proj = _parabolic_host(space)
    deadline = time.process_time() + budget
    candidates = list(hyperplanes(Q, "hyperbolic"))
    gens: dict[int, frozenset[int]] = {}
    chosen: list[int] = []

    def generators(k: int) -> frozenset[int]:
        if k not in gens:
            gens[k] = _section_generators(Q, candidates[k])
        return gens[k]

    def extend(start: int) -> bool:
        if len(chosen) == count:
            return True
        for k in range(start, len(candidates)):
            if time.process_time() > deadline:
                return False
            if all(not (generators(k) & generators(c)) for c in chosen):
                chosen.append(k)
                if extend(k + 1):
                    return True
                chosen.pop()
        return False

    if not extend(0):
        raise ConstructionError(f"no {count} embedded hyperbolic quadrics with disjoint "
                                f"generator sets found in {space.label}")
    return [_as_embedded(space, proj, hyperplane_section(Q, candidates[k])) for k in chosen]


def embedded_hyperbolic(space: PolarSpace, which: int = 0) -> GeneratorSet:
    """Both classes of an embedded Q+(2d-1,q), as generators of ``space``."""
    sub = embedded_hyperbolic_space(space, which)
    return GeneratorSet(space, sub.parent_generator_index)


def embedded_hyperbolic_space(space: PolarSpace, which: int = 0) -> PolarSpace:
    Q, proj = _parabolic_host(space)
    for k, h in enumerate(hyperplanes(Q, "hyperbolic")):
        if k == which:
            return _as_embedded(space, proj, hyperplane_section(Q, h))
    raise ConstructionError(f"only {k + 1} hyperbolic sections exist")


def generator_classes(sub: PolarSpace) -> list[int]:
    """Class label (0/1) of each generator of a hyperbolic quadric."""
    if sub.kind.family is not Family.HYPERBOLIC:
        raise ConstructionError("classes are defined for hyperbolic quadrics")
    return [int(r) % 2 for r in sub.relation_matrix[0]]


def hyperbolic_class(space: PolarSpace, cls: int = 0, which: int = 0) -> GeneratorSet:
    """One class of generators of an embedded Q+(4n+1,q)."""
    if cls not in (0, 1):
        raise ConstructionError("class selector must be 0 or 1")
    sub = embedded_hyperbolic_space(space, which)
    labels = generator_classes(sub)
    return GeneratorSet(space, [g for g, c in zip(sub.parent_generator_index, labels) if c == cls])


# ---------------------------------------------------------------------------
# pencils with non-collinear vertices


def partial_ovoid(space: PolarSpace, size: int, avoid: int = 0,
                  budget: float = DEFAULT_BUDGET) -> list[int] | None:
    """Lexicographically first set of ``size`` pairwise non-collinear points.

    Points in the bitset ``avoid`` are excluded.  Returns None when no such
    set exists or the budget runs out.
    """
    deadline = time.process_time() + budget
    allowed_all = ((1 << space.num_points) - 1) & ~avoid
    chosen: list[int] = []

    def extend(allowed: int) -> bool:
        if len(chosen) == size:
            return True
        if bin(allowed).count("1") < size - len(chosen):
            return False
        for p in iter_bits(allowed):
            if time.process_time() > deadline:
                return False
            chosen.append(p)
            rest = allowed & ~space.perp_masks[p] & ~((1 << (p + 1)) - 1)
            if extend(rest):
                return True
            chosen.pop()
        return False

    return list(chosen) if extend(allowed_all) else None


def _pencils(space: PolarSpace, vertices: list[int]) -> GeneratorSet:
    out = GeneratorSet(space)
    for p in vertices:
        out = union(out, point_pencil(space, p))
    return out


def disjoint_pencil_family(space: PolarSpace, x: int, avoid: int = 0,
                           budget: float = DEFAULT_BUDGET) -> GeneratorSet:
    """Union of x point-pencils with pairwise non-collinear vertices."""
    if x < 0:
        raise ConstructionError("x must be non-negative")
    vertices = partial_ovoid(space, x, avoid, budget)
    if vertices is None:
        raise ConstructionError(f"no partial ovoid of size {x} found in {space.label}")
    return _pencils(space, vertices)


def classification_witness(space: PolarSpace, x: int, alpha: int,
                           budget: float = DEFAULT_BUDGET) -> GeneratorSet:
    """alpha disjoint embedded Q+(5,q) plus x - 2 alpha pencils, vertices off the quadrics."""
    fam = space.kind.family
    if space.d != 3 or fam not in (Family.PARABOLIC, Family.SYMPLECTIC):
        raise ConstructionError("classification witnesses live in W(5,q) or Q(6,q)")
    if alpha < 0 or 2 * alpha > x:
        raise ConstructionError(f"need 0 <= 2*alpha <= x, got x={x}, alpha={alpha}")
    out = GeneratorSet(space)
    avoid = 0
    if alpha:
        for sub in embedded_hyperbolic_spaces(space, alpha, budget):
            out = union(out, GeneratorSet(space, sub.parent_generator_index))
            for p in sub.parent_point_index:
                avoid |= 1 << p
    return union(out, disjoint_pencil_family(space, x - 2 * alpha, avoid, budget))


# ---------------------------------------------------------------------------
# spreads


def spread_search(space: PolarSpace, budget: float = DEFAULT_BUDGET) -> list[int] | None:
    """First spread found by exact-cover backtracking, or None (absent or timed out).

    Always branches on the lowest uncovered point, trying the generators
    through it in index order.
    """
    deadline = time.process_time() + budget
    full = (1 << space.num_points) - 1
    masks = space.generator_masks
    through = [space.generators_through(p) for p in range(space.num_points)]
    chosen: list[int] = []
    timed_out = False

    def extend(covered: int) -> bool:
        nonlocal timed_out
        if covered == full:
            return True
        if time.process_time() > deadline:
            timed_out = True
            return False
        free = full & ~covered
        p = (free & -free).bit_length() - 1
        for g in through[p]:
            if masks[g] & covered:
                continue
            chosen.append(g)
            if extend(covered | masks[g]):
                return True
            chosen.pop()
            if timed_out:
                return False
        return False

    if not extend(0):
        return None
    chosen.sort()
    return chosen


# ---------------------------------------------------------------------------
# JSON construction specs


@dataclass
class ConstructionSpec:
    name: str
    params: dict[str, Any] = field(default_factory=dict)

    NAMES = ("point_pencil", "base_generator", "hyperbolic_class", "embedded_hyperbolic",
             "union_witness", "spread", "partial_ovoid")

    def __post_init__(self):
        if self.name not in self.NAMES:
            raise ConstructionError(f"unknown construction {self.name!r}; choose from {self.NAMES}")

    @classmethod
    def from_json(cls, data: dict) -> "ConstructionSpec":
        return cls(data["name"], dict(data.get("params", {})))

    def to_json(self) -> dict:
        return {"name": self.name, "params": self.params}


def build_construction(space: PolarSpace, spec: ConstructionSpec,
                       budget: float = DEFAULT_BUDGET) -> GeneratorSet:
    p = spec.params
    if spec.name == "point_pencil":
        return point_pencil(space, p.get("point", 0))
    if spec.name == "base_generator":
        g = int(p.get("generator", 0))
        return base_solid_set(space, g) if space.d == 4 else base_generator_set(space, g)
    if spec.name == "hyperbolic_class":
        return hyperbolic_class(space, int(p.get("class", 0)), int(p.get("which", 0)))
    if spec.name == "embedded_hyperbolic":
        return embedded_hyperbolic(space, int(p.get("which", 0)))
    if spec.name == "union_witness":
        return classification_witness(space, int(p["x"]), int(p.get("alpha", 0)), budget)
    if spec.name == "spread":
        S = spread_search(space, budget)
        if S is None:
            raise ConstructionError(f"no spread found in {space.label} within {budget}s")
        return GeneratorSet(space, S)
    if spec.name == "partial_ovoid":
        return disjoint_pencil_family(space, int(p.get("x", p.get("size", 1))), budget=budget)
    raise ConstructionError(spec.name)


def dumps_spec(spec: ConstructionSpec) -> str:
    return json.dumps(spec.to_json())
