
import numpy as np
import pytest
import sympy

from polarcl.algebra.qarith import q_adic_valuation
from polarcl.geometry import load_space
from polarcl.scheme import (
    SchemeError,
    build_scheme,
    eigenvalue_matrix,
    eigenvector_shift,
    exact_spectrum,
    predicted_coincidences,
    multiplicities,
    p_eigenvalue,
    phi_at_one,
    phi_valuation,
    pmatrix_csv,
    restrict_one_class,
    scan_coincidences,
    closed_form_phi,
)
from polarcl.clsets import cl_counts, GeneratorSet
from polarcl.constructions import point_pencil


def test_w32_valencies():
    assert p_eigenvalue(2, 1, 2, 0, 1) == 6
    assert p_eigenvalue(2, 1, 2, 0, 2) == 8


def test_w32_full_matrix():
    P = eigenvalue_matrix(2, 1, 2)
    assert [list(r) for r in P] == [[1, 6, 8], [1, 1, -2], [1, -3, 2]]
    assert [sum(r) for r in P] == [15, 0, 0]


def _sympy_spectrum(A):
    ev = sympy.Matrix(A.tolist()).eigenvals()
    return {int(k): int(v) for k, v in ev.items()}


@pytest.mark.parametrize("text", ["W:3:2", "Q+:5:2", "Q-:5:2", "Q:4:3", "H:3:4"])
def test_eigenvalues_match_geometric_spectra(text):
    S = build_scheme(load_space(text))
    for i in range(1, S.d + 1):
        A = S.adjacency(i)
        spec = _sympy_spectrum(A) if A.shape[0] <= 45 else exact_spectrum(A)
        assert spec == S.predicted_spectrum(i)


def test_w52_spectra_via_flint(w52):
    S = build_scheme(w52)
    for i in range(1, 4):
        assert exact_spectrum(S.adjacency(i)) == S.predicted_spectrum(i)


def test_w32_eigenspaces():
    S = build_scheme(load_space("W:3:2"))
    dims = S.eigenspace_dims(compute=True)
    assert dims[0] == 1 and dims[1] + dims[2] == 14
    A2 = S.adjacency(2)
    for j, lam in ((1, -2), (2, 2)):
        V = S.eigenspace(j)
        for c in range(V.ncols()):
            v = np.array([int(V[r, c]) for r in range(V.nrows())])
            assert (A2 @ v == lam * v).all()


def test_multiplicities_sum_to_generator_count():
    for text in ["W:5:2", "Q+:7:2", "H:4:4", "Q:6:3"]:
        k = load_space(text).kind if text != "Q:6:3" else None
        if k is None:
            from polarcl.geometry import PolarSpaceKind
            k = PolarSpaceKind.parse(text)
        m = multiplicities(k.d, k.e, k.q)
        assert m[0] == 1 and sum(m) == k.num_generators


def test_pmatrix_csv_shape():
    lines = pmatrix_csv(eigenvalue_matrix(3, 1, 2)).strip().splitlines()
    assert len(lines) == 5
    assert lines[1].split(",") == ["0", "1", "14", "56", "64"]


def test_coincidences_elliptic_empty():
    assert scan_coincidences(2, 2, 2) == []
    assert predicted_coincidences(2, 2) == []


def test_coincidences_q62():
    assert scan_coincidences(3, 1, 2) == [(3, 3)]
    assert predicted_coincidences(3, 1) == [(3, 3)]


def test_unpredicted_coincidence_rank_five():
    P = eigenvalue_matrix(5, 1, 2)
    assert P[3][4] == P[1][4] == 64
    assert (3, 4) in scan_coincidences(5, 1, 2)
    assert (3, 4) not in predicted_coincidences(5, 1)


def test_coincidence_scan_reads_the_matrix():
    for d, e, q in [(3, 1, 2), (4, 0, 2), (5, 1, 2), (3, 0, 2)]:
        P = eigenvalue_matrix(d, e, q)
        expect = [(j, i) for j in range(1, d + 1) for i in range(1, d + 1) if P[j][i] == P[1][i]
                  and j != 1]
        assert sorted(scan_coincidences(d, e, q)) == sorted(expect)


def test_valuations_from_explicit_spectrum(w52):
    # phi_i(j) is the 2-adic valuation of P_ji; read P_j2 off the spectrum of A_2
    S = build_scheme(w52)
    spec = exact_spectrum(S.adjacency(2))
    P = eigenvalue_matrix(3, 1, 2)
    for j in range(4):
        assert P[j][2] in spec
        assert phi_valuation(3, 1, 2, 2, j) == q_adic_valuation(P[j][2], 2)
    assert [phi_valuation(3, 1, 2, 2, j) for j in range(4)] == [3, 1, 2, 1]


def test_tabulated_lower_valuation_differs_at_tied_minimum():
    # P_22 = -4 in W(5,2); the closed form returns 1 there
    assert eigenvalue_matrix(3, 1, 2)[2][2] == -4
    assert closed_form_phi(3, 1, 2, 2) == 1
    assert phi_valuation(3, 1, 2, 2, 2) == 2


def test_phi_at_one():
    assert phi_at_one(1, 2) == 1
    assert phi_at_one(0, 1) == 0


def test_eigenvector_shift_point_pencil_w32(w32):
    S = build_scheme(w32)
    L = point_pencil(w32, 0)
    alpha, beta = cl_counts(w32, 1, 2)
    res = eigenvector_shift(L.chi, alpha, beta, 2, S)
    assert alpha == 0
    assert res.is_eigenvector
    assert 1 in res.eigenspaces


def test_eigenvector_shift_random_subset_fails(w32):
    S = build_scheme(w32)
    rng = np.random.default_rng(5)
    alpha, beta = cl_counts(w32, 1, 2)
    for _ in range(20):
        L = GeneratorSet(w32, rng.choice(15, 3, replace=False))
        pencils = {tuple(w32.generators_through(p)) for p in range(15)}
        if L.indices in pencils:
            continue
        assert not eigenvector_shift(L.chi, alpha, beta, 2, S).is_eigenvector


def test_v01_residual(w52):
    S = build_scheme(w52)
    assert not S.v01_residual(point_pencil(w52, 3).chi).any()
    chi = np.zeros(135, dtype=np.int64)
    chi[[0, 1, 2]] = 1
    assert S.v01_residual(chi).any()


def test_one_class_split_q72(qp72):
    S = build_scheme(qp72)
    oc = restrict_one_class(S, 0)
    other = restrict_one_class(S, 1)
    assert oc.size == other.size == 135
    assert set(oc.members).isdisjoint(other.members)
    R = qp72.relation_matrix[np.ix_(oc.members, oc.members)]
    assert (R % 2 == 0).all()


def test_one_class_eigenspace_q72(qp72):
    S = build_scheme(qp72)
    oc = restrict_one_class(S, 0)
    lam = oc.eigenvalue_on_v1(1)
    assert lam == S.P[1][2]
    spec = exact_spectrum(oc.adjacency(1))
    assert oc.v1_prime().ncols() == spec[lam] == 50
    assert oc.restricted_v1_v_dm1() == 50
    m = S.multiplicities
    assert m[1] + m[3] == 100


def test_one_class_needs_hyperbolic(w52):
    with pytest.raises(SchemeError):
        restrict_one_class(build_scheme(w52), 0)


def test_valuation_of_zero_entry_is_infinite():
    for d, e, q in [(4, 0, 2), (3, 0, 2)]:
        P = eigenvalue_matrix(d, e, q)
        for j in range(d + 1):
            for i in range(1, d + 1):
                if P[j][i] == 0:
                    assert phi_valuation(d, e, q, i, j) == float("inf")
