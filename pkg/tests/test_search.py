import itertools

import pytest

from polarcl.clsets import GeneratorSet, one_class_degree_one, one_class_is_cl, pencil_size
from polarcl.constructions import disjoint_pencil_family, point_pencil
from polarcl.geometry import load_space
from polarcl.scheme import OneClassScheme, build_scheme
from polarcl.search import (
    SearchCapacityError,
    SearchError,
    SearchJob,
    SearchState,
    all_point_pencils,
    brute_force_degree_one,
    classify_x1,
    exhaustive_degree_one,
    exhaustive_one_class,
    max_disjoint,
    one_class_pencils,
    run_job,
)


def test_w32_x1_brute_force_equals_pencils(w32):
    brute = {L.indices for L in brute_force_degree_one(w32, 1)}
    assert len(brute) == 15
    assert brute == all_point_pencils(w32)
    assert {L.indices for L in exhaustive_degree_one(w32, 1)} == brute


def test_w32_x2_pruned_equals_brute(w32):
    brute = {L.indices for L in brute_force_degree_one(w32, 2)}
    assert {L.indices for L in exhaustive_degree_one(w32, 2)} == brute


def test_elliptic_x1_gives_pencils(qm52):
    rep = classify_x1(qm52)
    assert rep.confirmed and rep.found == rep.pencils == 27


def test_resumed_walk_equals_full_walk(qp52):
    full = [L.indices for L in exhaustive_degree_one(qp52, 1)]
    state, pieces = SearchState(), []
    while not state.done:
        pieces += [L.indices for L in exhaustive_degree_one(qp52, 1, state, max_nodes=97)]
        state = SearchState.from_json(state.to_json())
    assert pieces == full
    assert state.found == len(full)


def test_search_guard(w52):
    with pytest.raises(SearchCapacityError):
        exhaustive_degree_one(w52, 1)


def test_one_class_search_matches_unpruned_scan(qp52):
    # odd rank: the class is not closed under the even relations, but the
    # one-class counts and row-space test are still well defined
    oc = OneClassScheme(build_scheme(qp52), 0)
    size = pencil_size(qp52) // 2
    brute = set()
    for combo in itertools.combinations(oc.members, size):
        L = GeneratorSet(qp52, combo)
        if one_class_is_cl(L, oc) and one_class_degree_one(L, oc):
            brute.add(L.indices)
    found = {L.indices for L in exhaustive_one_class(oc, 1)}
    assert found == brute
    assert one_class_pencils(qp52, oc) <= found


def test_max_disjoint(w52):
    L = disjoint_pencil_family(w52, 2)
    size, clique = max_disjoint(L)
    assert size == 2 == len(clique)
    assert max_disjoint(point_pencil(w52, 0))[0] == 1
    assert max_disjoint(GeneratorSet.full(load_space("W:3:2")))[0] == 5


def test_run_job_cursor_resumes(qp52):
    job = SearchJob(qp52.descriptor(), "exhaustive_degree_one", x=1)
    first = list(run_job(job, max_nodes=40))
    assert job.cursor is not None and not job.cursor["done"]
    job = SearchJob.from_json(job.to_json())
    rest = list(run_job(job))
    assert job.cursor["done"]
    assert len(first) + len(rest) == 35


def test_run_job_modes(w32):
    rec = next(run_job(SearchJob(w32.descriptor(), "classify_x1")))
    assert rec["confirmed"]
    rec = next(run_job(SearchJob(w32.descriptor(), "max_disjoint", indices=[0, 1, 2])))
    assert rec["max_disjoint"] >= 1
    with pytest.raises(SearchError):
        SearchJob(w32.descriptor(), "bogus")
