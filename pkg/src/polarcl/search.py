"""Exhaustive and bounded searches over generator sets.

``exhaustive_degree_one`` walks subsets in lexicographic order (include
before exclude) and prunes with the exact intersection counts every degree
one set must satisfy: for each generator pi and relation R_i, the number of
members related to pi is alpha_i (pi a member) or beta_i (pi not a member).
A partial choice is dropped as soon as some count already exceeds its
target or can no longer reach it.  Complete candidates are confirmed with the
exact degree-one test.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .clsets import (
    GeneratorSet,
    in_row_space,
    is_degree_one,
    one_class_degree_one,
    one_class_formula,
    one_class_pencil_size,
    cl_counts,
    pencil_size,
)
from .constructions import point_pencil
from .geometry import Family, PolarSpace, PolarSpaceKind, load_space
from .scheme import OneClassScheme, build_scheme

MAX_UNIVERSE = 64
MAX_TARGET_SIZE = 8
MODES = ("exhaustive_degree_one", "max_disjoint", "classify_x1")


class SearchCapacityError(RuntimeError):
    pass


class SearchError(ValueError):
    pass


# ---------------------------------------------------------------------------
# the pruned subset walk


class _Problem:
    """Universe of generators, its relation matrix and the count targets."""

    def __init__(self, space: PolarSpace, universe: list[int], target: int,
                 alpha: np.ndarray, beta: np.ndarray, constrained: np.ndarray, confirm):
        self.space = space
        self.universe = universe
        self.n = len(universe)
        self.target = target
        self.R = space.relation_matrix[np.ix_(universe, universe)].astype(np.int64)
        self.alpha, self.beta = alpha, beta
        self.hi = np.maximum(alpha, beta)
        self.lo = np.minimum(alpha, beta)
        self.constrained = constrained
        self.confirm = confirm


def _targets(values: dict[int, tuple[Fraction, Fraction]], width: int):
    alpha = np.zeros(width, dtype=np.int64)
    beta = np.zeros(width, dtype=np.int64)
    constrained = np.zeros(width, dtype=bool)
    for r, (a, b) in values.items():
        if a.denominator != 1 or b.denominator != 1:
            return None
        alpha[r], beta[r], constrained[r] = int(a), int(b), True
    return alpha, beta, constrained


def _guard(n: int, size: int):
    if n > MAX_UNIVERSE and size > MAX_TARGET_SIZE:
        raise SearchCapacityError(
            f"exhaustive search over {n} generators for sets of size {size} exceeds the guard "
            f"({MAX_UNIVERSE} generators or target size {MAX_TARGET_SIZE})")


def _full_problem(space: PolarSpace, x: int) -> _Problem | None:
    size = x * pencil_size(space)
    _guard(space.num_generators, size)
    vals = {0: (Fraction(1), Fraction(0))}
    for i in range(1, space.d + 1):
        vals[i] = cl_counts(space, x, i)
    t = _targets(vals, space.d + 1)
    if t is None:
        return None
    return _Problem(space, list(range(space.num_generators)), size, *t,
                    confirm=lambda L: is_degree_one(L))


def _one_class_problem(oc: OneClassScheme, x: int) -> _Problem | None:
    space = oc.parent.space
    size = x * one_class_pencil_size(space)
    _guard(oc.size, size)
    vals = {0: (Fraction(1), Fraction(0))}
    for i in range(1, space.d // 2 + 1):
        vals[2 * i] = one_class_formula(space, x, i)
    t = _targets(vals, space.d + 1)
    if t is None:
        return None
    return _Problem(space, oc.members, size, *t,
                    confirm=lambda L: one_class_degree_one(L, oc))


@dataclass
class SearchState:
    """Resumable position of the walk: the decision prefix to visit next."""

    decisions: list[int] = field(default_factory=list)
    done: bool = False
    nodes: int = 0
    found: int = 0

    def to_json(self) -> dict:
        return {"decisions": list(self.decisions), "done": self.done,
                "nodes": self.nodes, "found": self.found}

    @classmethod
    def from_json(cls, data: dict | None) -> "SearchState":
        if not data:
            return cls()
        return cls(list(data.get("decisions", [])), bool(data.get("done", False)),
                   int(data.get("nodes", 0)), int(data.get("found", 0)))


class _Walker:
    def __init__(self, prob: _Problem, state: SearchState):
        self.p = prob
        self.state = state
        n, w = prob.n, len(prob.alpha)
        self.rows = np.arange(n)
        self.count = np.zeros((n, w), dtype=np.int64)
        self.remaining = np.zeros((n, w), dtype=np.int64)
        for i in range(w):
            self.remaining[:, i] = (prob.R == i).sum(axis=1)
        self.chosen = np.zeros(n, dtype=np.int8)     # 1 member, 0 not, -1 undecided
        self.chosen[:] = -1
        self.size = 0
        self.applied: list[int] = []

    def _apply(self, k: int, bit: int):
        col = self.p.R[:, k]
        self.remaining[self.rows, col] -= 1
        if bit:
            self.count[self.rows, col] += 1
            self.size += 1
        self.chosen[k] = bit
        self.applied.append(bit)

    def _unapply(self):
        k = len(self.applied) - 1
        bit = self.applied.pop()
        col = self.p.R[:, k]
        self.remaining[self.rows, col] += 1
        if bit:
            self.count[self.rows, col] -= 1
            self.size -= 1
        self.chosen[k] = -1

    def _feasible(self) -> bool:
        p = self.p
        n_left = p.n - len(self.applied)
        if self.size > p.target or self.size + n_left < p.target:
            return False
        cons = p.constrained
        C = self.count[:, cons]
        top = C + self.remaining[:, cons]
        member = self.chosen == 1
        outside = self.chosen == 0
        open_ = self.chosen == -1
        a, b = p.alpha[cons], p.beta[cons]
        if (C[member] > a).any() or (top[member] < a).any():
            return False
        if (C[outside] > b).any() or (top[outside] < b).any():
            return False
        if (C[open_] > p.hi[cons]).any() or (top[open_] < p.lo[cons]).any():
            return False
        return True

    def _sync(self, decisions: list[int]):
        while self.applied and (len(self.applied) > len(decisions)
                                or self.applied != decisions[:len(self.applied)]):
            self._unapply()
        for k in range(len(self.applied), len(decisions)):
            self._apply(k, decisions[k])

    @staticmethod
    def _advance(dec: list[int]) -> bool:
        while dec and dec[-1] == 0:
            dec.pop()
        if not dec:
            return False
        dec[-1] = 0
        return True

    def run(self, max_nodes: int | None, deadline: float | None) -> Iterator[list[int]]:
        st = self.state
        if st.done:
            return
        dec = st.decisions
        steps = 0
        while True:
            if (max_nodes is not None and steps >= max_nodes) or \
               (deadline is not None and time.process_time() > deadline):
                return
            steps += 1
            st.nodes += 1
            self._sync(dec)
            if not self._feasible():
                if not self._advance(dec):
                    break
                continue
            if self.size == self.p.target:
                # the rest must be excluded: decide them all at once
                for k in range(len(dec), self.p.n):
                    dec.append(0)
                self._sync(dec)
                if self._feasible():
                    members = [self.p.universe[k] for k in range(self.p.n) if dec[k]]
                    L = GeneratorSet(self.p.space, members)
                    if self.p.confirm(L):
                        st.found += 1
                        yield members
                if not self._advance(dec):
                    break
                continue
            dec.append(1)
        st.decisions = []
        st.done = True


def _walk(prob: _Problem | None, state: SearchState | None = None, max_nodes=None,
          budget: float | None = None) -> tuple[list[list[int]], SearchState]:
    state = state or SearchState()
    if prob is None:            # non-integral targets: no set can exist
        state.done = True
        return [], state
    deadline = None if budget is None else time.process_time() + budget
    results = list(_Walker(prob, state).run(max_nodes, deadline))
    return results, state


def exhaustive_degree_one(space: PolarSpace, x: int, state: SearchState | None = None,
                          max_nodes: int | None = None,
                          budget: float | None = None) -> list[GeneratorSet]:
    """All degree one sets with parameter x (complete when the returned walk is done)."""
    results, state = _walk(_full_problem(space, x), state, max_nodes, budget)
    return [GeneratorSet(space, r) for r in results]


def exhaustive_one_class(oc: OneClassScheme, x: int, state: SearchState | None = None,
                         max_nodes: int | None = None,
                         budget: float | None = None) -> list[GeneratorSet]:
    """Sets inside one class of a hyperbolic quadric meeting the one-class counts
    and lying in the row space of the point-by-class incidence matrix."""
    results, state = _walk(_one_class_problem(oc, x), state, max_nodes, budget)
    return [GeneratorSet(oc.parent.space, r) for r in results]


def brute_force_degree_one(space: PolarSpace, x: int) -> list[GeneratorSet]:
    """Unpruned scan of all subsets of the right size (tiny spaces only)."""
    size = x * pencil_size(space)
    n = space.num_generators
    out = []
    for combo in itertools.combinations(range(n), size):
        L = GeneratorSet(space, combo)
        if in_row_space(L):
            out.append(L)
    return out


# ---------------------------------------------------------------------------
# pencils as the x = 1 answer


def all_point_pencils(space: PolarSpace) -> set[tuple[int, ...]]:
    return {point_pencil(space, p).indices for p in range(space.num_points)}


def one_class_pencils(space: PolarSpace, oc: OneClassScheme) -> set[tuple[int, ...]]:
    members = set(oc.members)
    return {tuple(g for g in point_pencil(space, p).indices if g in members)
            for p in range(space.num_points)}


@dataclass
class ClassificationReport:
    space: str
    scope: str
    found: int
    pencils: int
    confirmed: bool
    counterexamples: list[list[int]]
    missing_pencils: int

    def to_json(self) -> dict:
        return self.__dict__.copy()


def classify_x1(space: PolarSpace, one_class: OneClassScheme | None = None) -> ClassificationReport:
    """Every parameter-one set found is a point-pencil, and every pencil is found."""
    if one_class is None:
        found = {L.indices for L in exhaustive_degree_one(space, 1)}
        pencils = all_point_pencils(space)
        scope = "all generators"
    else:
        found = {L.indices for L in exhaustive_one_class(one_class, 1)}
        pencils = one_class_pencils(space, one_class)
        scope = f"class {one_class.cls}"
    extra = sorted(found - pencils)
    missing = pencils - found
    return ClassificationReport(space.label, scope, len(found), len(pencils),
                                not extra and not missing, [list(e) for e in extra[:16]],
                                len(missing))


# ---------------------------------------------------------------------------
# maximum pairwise disjoint subfamily


def max_disjoint(L: GeneratorSet, budget: float | None = None) -> tuple[int, list[int]]:
    """Largest set of pairwise disjoint members of L (exact branch and bound).

    Greedy colouring of the disjointness graph bounds each branch.
    """
    space = L.space
    idx = list(L.indices)
    n = len(idx)
    if n == 0:
        return 0, []
    skew = space.relation_matrix[np.ix_(idx, idx)] == space.d
    adj = [sum(1 << j for j in np.nonzero(skew[i])[0].tolist()) for i in range(n)]
    best: list[int] = []
    deadline = None if budget is None else time.process_time() + budget

    def colour_order(cand: int) -> list[tuple[int, int]]:
        out = []
        colour = 0
        uncoloured = cand
        while uncoloured:
            colour += 1
            avail = uncoloured
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= ~(1 << v) & ~adj[v]
                uncoloured &= ~(1 << v)
                out.append((v, colour))
        return out

    def expand(clique: list[int], cand: int):
        nonlocal best
        if deadline is not None and time.process_time() > deadline:
            raise TimeoutError("max_disjoint exceeded its budget")
        for v, c in reversed(colour_order(cand)):
            if len(clique) + c <= len(best):
                return
            clique.append(v)
            nxt = cand & adj[v]
            if nxt:
                expand(clique, nxt)
            elif len(clique) > len(best):
                best = list(clique)
            clique.pop()
            cand &= ~(1 << v)

    expand([], (1 << n) - 1)
    return len(best), sorted(idx[v] for v in best)


# ---------------------------------------------------------------------------
# jobs


@dataclass
class SearchJob:
    space: dict
    mode: str
    x: int = 1
    one_class: int | None = None
    budget: float | None = None
    cursor: dict | None = None
    indices: list[int] | None = None     # generator set for max_disjoint

    def __post_init__(self):
        if self.mode not in MODES:
            raise SearchError(f"unknown mode {self.mode!r}; choose from {MODES}")

    def to_json(self) -> dict:
        return {k: v for k, v in self.__dict__.items()}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "SearchJob":
        return cls(**data)

    def load_space(self) -> PolarSpace:
        return load_space(PolarSpaceKind.from_descriptor(self.space))


def run_job(job: SearchJob, max_nodes: int | None = None) -> Iterator[dict]:
    """Run (or resume) a job, yielding result records; ``job.cursor`` is updated."""
    space = job.load_space()
    if job.mode == "max_disjoint":
        L = GeneratorSet(space, job.indices if job.indices is not None else range(space.num_generators))
        size, clique = max_disjoint(L, job.budget)
        yield {"space": space.descriptor(), "max_disjoint": size, "indices": clique}
        return
    if job.mode == "classify_x1":
        oc = None
        if job.one_class is not None:
            oc = OneClassScheme(build_scheme(space), job.one_class)
        yield classify_x1(space, oc).to_json()
        return
    state = SearchState.from_json(job.cursor)
    if job.one_class is not None:
        oc = OneClassScheme(build_scheme(space), job.one_class)
        prob = _one_class_problem(oc, job.x)
    else:
        prob = _full_problem(space, job.x)
    deadline = None if job.budget is None else time.process_time() + job.budget
    if prob is None:
        state.done = True
    else:
        for members in _Walker(prob, state).run(max_nodes, deadline):
            job.cursor = state.to_json()
            yield GeneratorSet(space, members).to_json()
    job.cursor = state.to_json()
