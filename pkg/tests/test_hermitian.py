"""Eigensolver, guarded scalar functions, and pencil polynomial tests."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crheat.errors import NonHermitian, ZeroPolynomial
from crheat.hermitian import (
    HermitianForm,
    bose_ratio,
    eig_hermitian,
    exp_neg,
    make_pencil,
    matfun,
    pencil_det_poly,
    pencil_real_roots,
    sinh_ratio,
    tanh_ratio,
)


def rand_herm(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


def test_hermitian_form_rejects_asymmetry():
    with pytest.raises(NonHermitian):
        HermitianForm(np.array([[0.0, 1.0], [0.0, 0.0]]))
    # asymmetry below the documented 1e-10 absolute tolerance is repaired
    m = np.array([[1.0, 0.5 + 3e-11j], [0.5, 2.0]])
    h = HermitianForm(m)
    assert np.allclose(h.mat, h.mat.conj().T)


def test_eig_identity():
    es = eig_hermitian(np.eye(2))
    assert np.allclose(es.eigenvalues, [1.0, 1.0])
    rec = (es.unitary * es.eigenvalues) @ es.unitary.conj().T
    assert np.allclose(rec, np.eye(2), atol=1e-14)


def test_eig_swap_matrix():
    es = eig_hermitian(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(es.eigenvalues, [-1.0, 1.0])


def test_eig_random_reconstruction():
    rng = np.random.default_rng(42)
    for _ in range(50):
        h = rand_herm(rng, 4)
        es = eig_hermitian(h)
        u = es.unitary
        assert np.max(np.abs(u.conj().T @ u - np.eye(4))) < 1e-12
        rec = (u * es.eigenvalues) @ u.conj().T
        scale = np.linalg.norm(h)
        assert np.linalg.norm(rec - h) < 1e-11 * max(1.0, scale)
        assert np.all(np.diff(es.eigenvalues) >= 0)


def test_matfun_zero_matrix_exp():
    out = matfun(np.zeros((2, 2)), "exp_neg", 1.0)
    assert np.allclose(out, np.eye(2), atol=1e-15)


def test_matfun_scalar_guard():
    out = matfun(np.array([[0.0]]), "bose_ratio", 2.0)
    assert abs(out[0, 0] - 0.5) < 1e-15


def test_matfun_bose_diagonal():
    out = matfun(np.diag([1.0, -1.0]), "bose_ratio", 1.0)
    want = np.diag([1.0 / -np.expm1(-1.0), -1.0 / -np.expm1(1.0)])
    assert np.allclose(out, want, rtol=1e-14)
    assert abs(out[0, 0] - 1.581977) < 1e-6
    assert abs(out[1, 1] - 0.581977) < 1e-6


def test_bose_branches_continuous():
    # the series kicks in below |t*mu| = 1e-4; values must line up across it
    t = 0.7
    for x in (1e-4, -1e-4):
        mu = np.array([x / t * (1 - 1e-9), x / t * (1 + 1e-9)])
        v = bose_ratio(mu, t)
        assert abs(v[0] - v[1]) < 1e-12 * abs(v[0])


def test_bose_reflection():
    mu = np.array([-7.0, -0.3, 0.2, 3.0])
    t = 1.3
    lhs = bose_ratio(-mu, t)
    rhs = bose_ratio(mu, t) * np.exp(-t * mu)
    assert np.allclose(lhs, rhs, rtol=1e-13)


def test_bose_no_overflow():
    v = bose_ratio(np.array([-800.0, 800.0]), 1.0)
    assert np.all(np.isfinite(v))
    assert v[0] == pytest.approx(0.0, abs=1e-300)
    assert v[1] == pytest.approx(800.0)


@given(st.floats(-60, 60), st.floats(0.05, 20))
@settings(max_examples=60, deadline=None)
def test_bose_bounded_by_rate(mu, t):
    # positive in exact arithmetic; may underflow to +0 for very negative t*mu
    v = float(bose_ratio(np.array([mu]), t)[0])
    assert 0 <= v <= abs(mu) + 1.0 / t + 1e-9


def test_tanh_and_sinh_guards():
    assert tanh_ratio(np.array([0.0]), 4.0)[0] == pytest.approx(0.25)
    assert sinh_ratio(np.array([0.0]), 4.0)[0] == pytest.approx(0.25)
    assert exp_neg(np.array([2.0]), 1.5)[0] == pytest.approx(math.exp(-3.0))


def test_pencil_det_poly_identity_pair():
    coeffs = pencil_det_poly(np.eye(2), np.eye(2))
    assert np.allclose(coeffs, [1.0, -4.0, 4.0], atol=1e-12)


def test_pencil_det_poly_indefinite():
    coeffs = pencil_det_poly(np.diag([-1.0, 1.0]), np.eye(2))
    assert np.allclose(coeffs, [-1.0, 0.0, 4.0], atol=1e-12)


def test_pencil_det_poly_degenerate_levi():
    coeffs = pencil_det_poly(np.diag([2.0, 3.0]), np.zeros((2, 2)))
    assert len(coeffs) == 1
    assert coeffs[0] == pytest.approx(6.0)


def test_pencil_poly_matches_lu():
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(1, 6))
        r, l = rand_herm(rng, n), rand_herm(rng, n)
        coeffs = pencil_det_poly(r, l)
        assert len(coeffs) <= n + 1
        if abs(np.linalg.det(l)) > 1e-9:
            assert len(coeffs) == n + 1
        for eta in np.linspace(-3, 3, 11):
            val = sum(c * eta ** k for k, c in enumerate(coeffs))
            ref = np.linalg.det(r - 2 * eta * l).real
            assert abs(val - ref) <= 1e-9 * max(abs(ref), 1e-3)


def test_real_roots_quadratic():
    assert pencil_real_roots([-1.0, 0.0, 4.0]) == pytest.approx([-0.5, 0.5])


def test_real_roots_double():
    roots = pencil_real_roots([1.0, -4.0, 4.0])
    assert len(roots) == 1
    assert roots[0] == pytest.approx(0.5, abs=1e-6)


def test_real_roots_none():
    assert pencil_real_roots([1.0]) == []
    assert pencil_real_roots([1.0, 0.0, 1.0]) == []  # conjugate pair stays out


def test_real_roots_zero_poly_raises():
    with pytest.raises(ZeroPolynomial):
        pencil_real_roots([0.0, 0.0])


def test_make_pencil_evaluation():
    pen = make_pencil(np.diag([-1.0, 1.0]), np.eye(2))
    m = pen.at(0.25)
    assert np.allclose(m, np.diag([-1.5, 0.5]))
