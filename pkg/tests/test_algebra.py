import itertools
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from polarcl.algebra import field as fieldmod
from polarcl.algebra.field import FieldError, gf
from polarcl.algebra.linalg import gf_kernel, gf_rank, gf_rref, in_column_space, kernel_basis, rank
from polarcl.algebra.qarith import HalfInt, binom2, gaussian_binomial, q_adic_valuation, q_pow

ORDERS = [2, 3, 4, 5, 7, 8, 9]


@pytest.mark.parametrize("q", ORDERS)
def test_field_axioms_exhaustive(q):
    F = gf(q)
    els = list(F.elements)
    assert len(els) == q
    for a in els:
        assert F.add(a, 0) == a and F.mul(a, 1) == a
        assert F.add(a, F.negate(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
    for a, b, c in itertools.product(els, repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_prime_field_matches_integers_mod_p(q):
    F = gf(q)
    for a, b in itertools.product(range(q), repeat=2):
        assert F.add(a, b) == (a + b) % q
        assert F.mul(a, b) == (a * b) % q


@pytest.mark.parametrize("q", [4, 9])
def test_conjugation_is_field_automorphism_of_order_two(q):
    F = gf(q)
    r = int(round(q ** 0.5))
    for a in F.elements:
        assert F.conj(a) == F.pow(a, r)
        assert F.conj(F.conj(a)) == a
    for a, b in itertools.product(F.elements, repeat=2):
        assert F.conj(F.mul(a, b)) == F.mul(F.conj(a), F.conj(b))


def test_non_prime_power_rejected():
    with pytest.raises(FieldError):
        gf(6)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(ORDERS), st.data())
def test_multiplicative_group_is_cyclic_power_law(q, data):
    F = gf(q)
    a = data.draw(st.integers(1, q - 1))
    n = data.draw(st.integers(0, 40))
    assert F.pow(a, q - 1) == 1
    expected = 1
    for _ in range(n):
        expected = F.mul(expected, a)
    assert F.pow(a, n) == expected


def _qbinom_oracle(a, b, q):
    x = sympy.Symbol("x")
    num = sympy.prod([1 - x ** (a - k) for k in range(b)])
    den = sympy.prod([1 - x ** (k + 1) for k in range(b)])
    return int(sympy.cancel(num / den).subs(x, q))


@pytest.mark.parametrize("a", range(0, 7))
@pytest.mark.parametrize("q", [2, 3, 4])
def test_gaussian_binomial_against_symbolic(a, q):
    for b in range(0, a + 1):
        assert gaussian_binomial(a, b, q) == _qbinom_oracle(a, b, q)
    assert gaussian_binomial(a, a + 1, q) == 0


def test_gaussian_binomial_counts_lines_of_projective_line():
    assert gaussian_binomial(2, 1, 2) == 3


def test_half_integer_powers():
    assert q_pow(9, Fraction(5, 2)) == 243
    assert q_pow(4, HalfInt.of(Fraction(3, 2))) == 8
    assert q_pow(2, 0) == 1
    with pytest.raises(ValueError):
        q_pow(2, Fraction(1, 2))


def test_binom2_and_valuation():
    assert [binom2(n) for n in range(5)] == [0, 0, 1, 3, 6]
    assert q_adic_valuation(48, 2) == 4
    assert q_adic_valuation(-18, 3) == 2
    assert q_adic_valuation(16, 4) == 2


def _w32_point_line_incidence():
    F = gf(2)
    pts = [v for v in itertools.product(range(2), repeat=4) if any(v)]

    def form(u, v):
        return (u[0] * v[1] + u[1] * v[0] + u[2] * v[3] + u[3] * v[2]) % 2

    lines = set()
    for u, v in itertools.combinations(pts, 2):
        if form(u, v) == 0:
            w = tuple((a + b) % 2 for a, b in zip(u, v))
            lines.add(frozenset((u, v, w)))
    lines = sorted(lines, key=sorted)
    assert len(F.elements) == 2
    return [[int(p in L) for L in lines] for p in pts]


def test_kernel_basis_of_w32_incidence():
    A = _w32_point_line_incidence()
    assert len(A) == 15 and len(A[0]) == 15
    M = sympy.Matrix(A)
    K = kernel_basis(A)
    assert K.ncols() == 15 - M.rank()
    assert K.ncols() == len(M.nullspace())
    for c in range(K.ncols()):
        col = sympy.Matrix([int(K[r, c]) for r in range(K.nrows())])
        assert M * col == sympy.zeros(15, 1)
    assert rank(A) == M.rank()


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_rational_rank_and_column_space(m, n, data):
    rows = data.draw(st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n),
                              min_size=m, max_size=m))
    M = sympy.Matrix(rows)
    assert rank(rows) == M.rank()
    coeffs = data.draw(st.lists(st.integers(-2, 2), min_size=n, max_size=n))
    v = list(M * sympy.Matrix(coeffs))
    assert in_column_space(rows, [int(x) for x in v])


def _span_size(F, rows):
    vecs = set()
    for coeffs in itertools.product(range(F.q), repeat=len(rows)):
        acc = np.zeros(len(rows[0]), dtype=np.int64)
        for c, r in zip(coeffs, rows):
            acc = F.vadd(acc, F.vmul(np.full_like(acc, c), np.asarray(r)))
        vecs.add(tuple(int(x) for x in acc))
    return len(vecs)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.integers(1, 4), st.integers(1, 4), st.data())
def test_gf_rank_matches_span_cardinality(q, m, n, data):
    F = gf(q)
    rows = data.draw(st.lists(st.lists(st.integers(0, q - 1), min_size=n, max_size=n),
                              min_size=m, max_size=m))
    r = gf_rank(F, rows)
    assert q ** r == _span_size(F, rows)
    R, piv = gf_rref(F, np.asarray(rows))
    assert len(piv) == r
    K = gf_kernel(F, np.asarray(rows))
    assert len(K) == n - r
    for k in K:
        assert not F.vsum(F.vmul(np.asarray(rows), np.asarray(k)[None, :]), axis=1).any()


def test_field_module_exports_gf():
    assert fieldmod.gf(8).q == 8
