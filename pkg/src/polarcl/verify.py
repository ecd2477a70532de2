"""Acceptance suite: twelve exact reproduction checks with a JSON manifest."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import clsets as cl
from .clsets import GeneratorSet
from .constructions import (
    ConstructionError,
    base_generator_set,
    classification_witness,
    embedded_hyperbolic,
    hyperbolic_class,
    point_pencil,
    spread_search,
)
from .geometry import Family, PolarSpaceKind, classify_type, load_space
from .scheme import (
    OneClassScheme,
    build_scheme,
    predicted_coincidences,
    phi_valuation,
    restrict_one_class,
    closed_form_phi,
    verify_coincidences,
)
from .search import classify_x1, max_disjoint

ORACLE_SPACES = ("W:3:2", "W:3:3", "W:5:2", "Q:4:2", "Q:4:3", "Q:6:2", "Q+:5:2", "Q+:7:2",
                 "Q-:5:2", "H:3:4", "H:4:4")
SCOPES = ("all", "q2", "table4", "classification")
RANDOM_SUBSETS = 10_000


@dataclass
class CriterionResult:
    id: int
    title: str
    passed: bool
    seconds: float = 0.0
    details: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"id": self.id, "title": self.title, "passed": self.passed,
                "seconds": round(self.seconds, 3), "details": self.details,
                "failures": self.failures}

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({'; '.join(self.failures[:3])})" if self.failures else ""
        return f"[{status}] criterion {self.id:2d}: {self.title} [{self.seconds:.1f}s]{extra}"


class _Recorder:
    def __init__(self, cid: int, title: str):
        self.result = CriterionResult(cid, title, True)

    def expect(self, ok: bool, what: str):
        if ok:
            self.result.details.append(f"ok: {what}")
        else:
            self.result.passed = False
            self.result.failures.append(what)


def _spaces(q2_only: bool, names=ORACLE_SPACES):
    return [n for n in names if not q2_only or n.endswith(":2")]


# ---------------------------------------------------------------------------
# criteria


def c1_eigenvalues(rec: _Recorder, q2_only=False):
    for name in _spaces(q2_only):
        S = build_scheme(load_space(name))
        for i in range(1, S.d + 1):
            got, want = S.spectrum(i), S.predicted_spectrum(i)
            rec.expect(got == want, f"{name} A_{i} spectrum {'matches' if got == want else f'{got} != {want}'}")


def c2_coincidences(rec: _Recorder, q2_only=False):
    for name in _spaces(q2_only):
        k = PolarSpaceKind.parse(name)
        scan = verify_coincidences(k.d, k.e, k.q)
        predicted = predicted_coincidences(k.d, k.e)
        rec.expect(scan == predicted, f"{name}: scan {scan} vs predicted {predicted}")
        if classify_type(k) == "I":
            rec.expect(scan == [], f"{name} (type I) coincidences {scan} should be empty")
    rec.expect(verify_coincidences(3, 1, 2) == [(3, 3)], "Q(6,2) yields {(3,3)}")
    rec.expect(verify_coincidences(4, 0, 2) == [(3, 2), (3, 4)], "Q+(7,2) yields {(3,2),(3,4)}")


def _phi_cases(q2_only: bool):
    for twice in range(5):
        e = Fraction(twice, 2)
        qs = (4, 9) if twice % 2 else (2, 3, 4, 5, 7, 8, 9)
        if q2_only:
            qs = tuple(q for q in qs if q in (2, 4))
        for q in qs:
            for d in range(2, 9):
                for i in range(2, d + 1):
                    for j in range(2, d + 1):
                        yield d, e, q, i, j


def c3_valuations(rec: _Recorder, q2_only=False):
    checked = 0
    bad: dict[tuple, list] = {}
    for d, e, q, i, j in _phi_cases(q2_only):
        want = closed_form_phi(d, e, i, j)
        if want is None:
            continue
        checked += 1
        got = phi_valuation(d, e, q, i, j)
        if got != want:
            row = (str(e), "even" if i % 2 == 0 else "odd")
            bad.setdefault(row, []).append((d, q, i, j, got, want))
    rec.result.details.append(f"{checked} in-range (d,e,q,i,j) compared")
    for (e, parity), cases in sorted(bad.items()):
        d, q, i, j, got, want = cases[0]
        rec.expect(False, f"e={e}, i {parity}: {len(cases)} mismatches, e.g. "
                          f"d={d} q={q} i={i} j={j}: valuation {got} vs closed form {want}")
    if not bad:
        rec.expect(True, "all table entries match")


def _flag_sets(space):
    return {
        "all generators": (GeneratorSet.full(space), True, True),
        "point-pencil": (point_pencil(space, 0), True, True),
        "embedded hyperbolic quadric": (embedded_hyperbolic(space), True, True),
        "base-plane": (base_generator_set(space, 0), True, False),
        "hyperbolic class": (hyperbolic_class(space), True, False),
    }


def c4_flag_sets(rec: _Recorder, q2_only=False):
    for name in ("Q:6:2", "W:5:2"):
        space = load_space(name)
        xmax = cl.max_parameter(space)
        for label, (L, want_cl, want_d1) in _flag_sets(space).items():
            r = cl.check(L)
            rec.expect((r.is_cl, r.is_degree_one) == (want_cl, want_d1),
                       f"{name} {label}: CL={r.is_cl} degree-one={r.is_degree_one}")
            C = cl.check(cl.complement(L))
            rec.expect((C.is_cl, C.is_degree_one) == (want_cl, want_d1) and C.x == xmax - r.x,
                       f"{name} complement of {label}: CL={C.is_cl} degree-one={C.is_degree_one} "
                       f"x={C.x}")


def _degree_one_examples(space):
    out = {"all generators": GeneratorSet.full(space),
           "point-pencil": point_pencil(space, 0),
           "embedded quadric": embedded_hyperbolic(space)}
    for x in (2, 3):
        for alpha in range(x // 2 + 1):
            out[f"witness x={x} alpha={alpha}"] = classification_witness(space, x, alpha)
    out["complement of pencil"] = cl.complement(out["point-pencil"])
    return out


def c5_profiles(rec: _Recorder, q2_only=False):
    for name in ("W:5:2", "Q:6:2"):
        space = load_space(name)
        for label, L in _degree_one_examples(space).items():
            flags = [cl.intersection_profile(L, i).passed for i in (1, 2, 3)]
            rec.expect(all(flags), f"{name} {label}: intersection counts for i=1..3 {flags}")
        B = base_generator_set(space, 0)
        flags = [cl.intersection_profile(B, i).passed for i in (1, 2, 3)]
        rec.expect(flags == [False, False, True], f"{name} base-plane profile {flags}")


def c6_two_tests(rec: _Recorder, q2_only=False, n_random: int = RANDOM_SUBSETS, seed: int = 1):
    rng = random.Random(seed)
    names = _spaces(q2_only)
    per_space = -(-n_random // len(names))
    total = positives = 0
    for name in names:
        space = load_space(name)
        n = space.num_generators
        samples = [GeneratorSet.full(space), GeneratorSet(space)]
        samples += [point_pencil(space, p) for p in range(min(space.num_points, 10))]
        samples += [cl.complement(point_pencil(space, p)) for p in range(3)]
        for _ in range(per_space):
            size = rng.randrange(n + 1)
            samples.append(GeneratorSet(space, rng.sample(range(n), size)))
        disagree = 0
        for L in samples:
            a, b = cl.in_row_space(L), cl.in_v0_v1(L)
            disagree += a != b
            positives += a
            total += 1
        rec.expect(disagree == 0, f"{name}: {len(samples)} sets, {disagree} disagreements")
    for name in ("W:5:2", "Q:6:2"):
        space = load_space(name)
        for label, L in _degree_one_examples(space).items():
            a, b = cl.in_row_space(L), cl.in_v0_v1(L)
            total += 1
            rec.expect(a == b == True, f"{name} {label}: row space {a}, V0+V1 {b}")
    rec.result.details.append(f"{total} sets compared, {positives} degree one")
    rec.expect(total >= n_random, f"{total} >= {n_random} sets")


def _pair_count_sets(space):
    out = {}
    for x in (1, 2, 3):
        for alpha in range(x // 2 + 1):
            try:
                out[f"x={x} alpha={alpha}"] = classification_witness(space, x, alpha)
            except ConstructionError:
                pass
    return out


def c7_pair_counts(rec: _Recorder, q2_only=False):
    names = ("W:5:2", "Q:6:2") if q2_only else ("W:5:2", "Q:6:2", "Q:6:3")
    for name in names:
        space = load_space(name)
        for label, L in _pair_count_sets(space).items():
            pc = cl.s1_s2_d2(L)
            rec.expect(pc.ok, f"{name} {label}: s1={pc.s1} s2={pc.s2} d2={pc.d2} over "
                              f"{pc.skew_pairs} skew pairs, ok={pc.ok}")
            if pc.x == 2:
                rec.expect(pc.d2 == 0 and pc.skew_pairs > 0, f"{name} {label}: d2 = 0 at x=2")


def c8_skew_bound(rec: _Recorder, q2_only=False):
    lhs, rhs = cl.skew_bound_sides(3, 2, 2)
    rec.expect((lhs, rhs) == (81, 80) and cl.skew_bound(3, 2, 2), f"q=3 x=2 c=2: {lhs} > {rhs}")
    rec.expect(cl.in_disjoint_range(3, 2), "x=2 lies in the disjointness-bound range at q=3")
    rec.expect(not cl.in_disjoint_range(2, 2), "x=2 lies outside the disjointness-bound range at q=2")
    if q2_only:
        return
    t = time.perf_counter()
    space = load_space("Q:6:3")
    S = build_scheme(space)
    dim = S.eigenspace(1).ncols()
    spent = time.perf_counter() - t
    rec.expect(spent < 600 and dim == S.multiplicities[1],
               f"Q(6,3) scheme with V_1 (dim {dim}) built in {spent:.1f}s")
    for alpha in (0, 1):
        L = classification_witness(space, 2, alpha)
        size, _ = max_disjoint(L)
        rec.expect(cl.is_degree_one(L) and size <= 2,
                   f"Q(6,3) x=2 alpha={alpha}: max disjoint {size}")


def c9_classification(rec: _Recorder, q2_only=False):
    for name in ("W:3:2", "Q:4:2", "Q-:5:2"):
        r = classify_x1(load_space(name))
        rec.expect(r.confirmed, f"{name}: {r.found} sets found, {r.pencils} pencils")
    space = load_space("Q+:5:2")
    oc = OneClassScheme(build_scheme(space), 0)
    r = classify_x1(space, oc)
    rec.expect(r.confirmed, f"one class of Q+(5,2): {r.found} sets found, {r.pencils} one-class pencils")
    full = classify_x1(space)
    rec.result.details.append(f"(supplementary) all generators of Q+(5,2): {full.found} sets, "
                              f"{full.pencils} pencils, confirmed={full.confirmed}")


def c10_witnesses(rec: _Recorder, q2_only=False):
    for name in ("Q:6:2", "W:5:2"):
        space = load_space(name)
        for x in (1, 2, 3):
            for alpha in range(x // 2 + 1):
                L = classification_witness(space, x, alpha)
                ok = cl.is_degree_one(L) and cl.parameter(L) == x
                rec.expect(ok, f"{name} x={x} alpha={alpha}: degree one with parameter {cl.parameter(L)}")
    if q2_only:
        return
    space = load_space("W:5:3")
    for x in (1, 2, 3):
        for alpha in range(x // 2 + 1):
            try:
                L = classification_witness(space, x, alpha)
                ok = cl.is_degree_one(L) and cl.parameter(L) == x
                rec.expect(ok and alpha == 0, f"W(5,3) x={x} alpha={alpha}: built (degree one {ok})")
            except ConstructionError as exc:
                rec.expect(alpha > 0, f"W(5,3) x={x} alpha={alpha}: refused ({exc})")


def c11_one_class(rec: _Recorder, q2_only=False, seed: int = 2):
    space = load_space("Q+:7:2")
    S = build_scheme(space)
    oc = restrict_one_class(S, 0)
    rec.expect(oc.size == space.num_generators // 2, f"class sizes {oc.size}/{space.num_generators - oc.size}")
    members = set(oc.members)
    pencils = {tuple(g for g in point_pencil(space, p).indices if g in members)
               for p in range(space.num_points)}
    ok = 0
    for P in sorted(pencils):
        L = GeneratorSet(space, P)
        counts = cl.one_class_is_cl(L, oc)
        ok += counts and cl.one_class_degree_one(L, oc)
    rec.expect(ok == len(pencils), f"{ok}/{len(pencils)} one-class pencils satisfy the counts and are degree one")
    rng = random.Random(seed)
    agree = fails = 0
    for _ in range(200):
        L = GeneratorSet(space, rng.sample(oc.members, 15))
        counts = cl.one_class_is_cl(L, oc)
        fails += not counts
        agree += counts == cl.one_class_degree_one(L, oc)
    rec.expect(fails == 200 and agree == 200,
               f"random 15-subsets of the class: {fails}/200 fail the counts, tests agree on {agree}")
    V1p = oc.v1_prime()
    restricted = oc.restricted_v1_v_dm1()
    joined = _joint_rank(oc, V1p)
    rec.expect(V1p.ncols() == restricted == joined,
               f"eigenspace of A'_1 for P_12={oc.eigenvalue_on_v1(1)} has dim {V1p.ncols()}; "
               f"(V_1 + V_3) restricted has rank {restricted}; joint rank {joined}")
    for i in range(oc.half_rank + 1):
        A = oc.adjacency(i).astype(object)
        lam = oc.eigenvalue_on_v1(i)
        V = np.array([[int(V1p[r, c]) for c in range(V1p.ncols())] for r in range(V1p.nrows())], dtype=object)
        rec.expect(bool((A.dot(V) == lam * V).all()), f"A'_{i} acts as P_1,{2 * i} = {lam} on V'_1")


def _joint_rank(oc: OneClassScheme, V1p) -> int:
    from .algebra.linalg import to_fmpz

    V1 = oc.parent.eigenspace(1)
    Vd = oc.parent.eigenspace(oc.parent.d - 1)
    rows = []
    for k, r in enumerate(oc.members):
        rows.append([int(V1[r, c]) for c in range(V1.ncols())]
                    + [int(Vd[r, c]) for c in range(Vd.ncols())]
                    + [int(V1p[k, c]) for c in range(V1p.ncols())])
    return to_fmpz(rows).rank()


def c12_spreads(rec: _Recorder, q2_only=False):
    names = ("W:3:2", "W:5:2", "Q:4:2", "Q:6:2", "Q-:5:2")
    for name in names:
        space = load_space(name)
        S = spread_search(space)
        if S is None:
            rec.expect(name not in ("W:3:2", "W:5:2"), f"{name}: no spread found within budget")
            continue
        sets = [GeneratorSet.full(space)] + [point_pencil(space, p) for p in range(space.num_points)]
        if space.d == 3 and space.kind.family in (Family.SYMPLECTIC, Family.PARABOLIC):
            sets += list(_degree_one_examples(space).values())
        bad = [L for L in sets if not cl.spread_intersection_check(L, S)]
        rec.expect(not bad, f"{name}: spread of {len(S)}, {len(sets) - len(bad)}/{len(sets)} "
                            f"degree one sets meet it in x members")


CRITERIA: dict[int, tuple[str, Callable]] = {
    1: ("eigenvalue matrix equals the exact spectra", c1_eigenvalues),
    2: ("predicted eigenvalue coincidences", c2_coincidences),
    3: ("closed-form valuations", c3_valuations),
    4: ("flag-based example sets and complements", c4_flag_sets),
    5: ("intersection-count characterisation", c5_profiles),
    6: ("row space of A^T equals V0+V1", c6_two_tests),
    7: ("s1/s2/d2 counts", c7_pair_counts),
    8: ("skew bound and max disjoint at q=3", c8_skew_bound),
    9: ("x=1 classification by exhaustive search", c9_classification),
    10: ("classification witnesses", c10_witnesses),
    11: ("one-class scheme of Q+(7,2)", c11_one_class),
    12: ("spread intersection property", c12_spreads),
}

SCOPE_IDS = {
    "all": tuple(CRITERIA),
    "q2": tuple(CRITERIA),
    "table4": (4,),
    "classification": (9, 10),
}


def run_criterion(cid: int, q2_only: bool = False) -> CriterionResult:
    title, fn = CRITERIA[cid]
    rec = _Recorder(cid, title)
    t = time.perf_counter()
    try:
        fn(rec, q2_only)
    except Exception as exc:  # a crash is a failed criterion, not an aborted run
        rec.expect(False, f"raised {type(exc).__name__}: {exc}")
    rec.result.seconds = time.perf_counter() - t
    return rec.result


def run_suite(scope: str = "all", progress: Callable[[CriterionResult], None] | None = None) -> dict:
    if scope not in SCOPES:
        raise ValueError(f"unknown scope {scope!r}; choose from {SCOPES}")
    results = []
    for cid in SCOPE_IDS[scope]:
        r = run_criterion(cid, q2_only=scope == "q2")
        results.append(r)
        if progress:
            progress(r)
    return {
        "scope": scope,
        "passed": all(r.passed for r in results),
        "criteria": {str(r.id): r.to_json() for r in results},
    }
