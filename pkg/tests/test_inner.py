import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsu2.algebra import AngularMode
from qsu2.inner import (
    QPair,
    circle_domain_ok,
    classical_product,
    g_antiderivative,
    gram_matrix,
    norm_closed_form,
    norm_integral_circle,
    norm_integral_real,
    norm_integral_real_via_qbeta,
    pair_h_minus,
    pair_h_plus,
    partial_fraction_coefficients,
    printed_partial_fraction_coefficients,
    qbeta_closed_form,
    qbeta_generic,
    qbeta_quadrature,
    ramanujan_qbeta,
    scalar_product,
    scalar_product_circle_q,
    scalar_product_real_q,
    vilenkin_ortho_integral,
)
from qsu2.qcore import HalfInt, QParam, q_bracket
from qsu2.quad import QuadratureSpec, quad_halfline, quad_interval
from qsu2.vilenkin import VilenkinSpec

Q2 = QParam.real(2.0)
QC = QParam.circle(0.3)
LN2 = math.log(2)


def psi(J, M, N, q):
    return QPair.of_psi(VilenkinSpec.of(J, M, N, q))


def bump_pair(m, q, c=0.2, s=1.0, k=0.0):
    mode = AngularMode(m, lambda w: np.exp(-(w - c) ** 2 / (2 * s) + 1j * k * w), q, "bump")
    return QPair.fixed(mode)


# quadrature

@pytest.mark.parametrize("f,expected", [
    (lambda t: np.exp(-t), 1.0),
    (lambda t: 1 / ((1 + t) * (1 + t / 2)), 2 * LN2),
    (lambda t: t / (1 + t * t) ** 2, 0.5),
])
def test_quad_halfline_examples(f, expected):
    res = quad_halfline(f)
    assert res.converged
    assert abs(res.value - expected) < 1e-10
    value, err = res
    assert err < 1e-8


def test_quad_is_deterministic():
    f = lambda t: np.sin(t) * np.exp(-t)  # noqa: E731
    assert quad_halfline(f).value == quad_halfline(f).value


def test_quad_reports_non_convergence():
    res = quad_interval(lambda x: np.sin(1 / (x + 1e-9)), 0.0, 1.0, QuadratureSpec(1e-14, 1e-14, max_depth=3))
    assert not res.converged


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=0.0)


# scalar products

@pytest.mark.parametrize("M", ["1/2", "-1/2"])
def test_real_norm_is_one(M):
    p = psi("1/2", M, "1/2", Q2)
    assert abs(scalar_product_real_q(p, p, Q2).value - 1) < 1e-8


def test_real_cross_J_orthogonal():
    r = scalar_product_real_q(psi("1/2", "1/2", "1/2", Q2), psi("3/2", "1/2", "1/2", Q2), Q2)
    assert abs(r.value) < 1e-8


def test_circle_norm_is_one():
    p = psi("1/2", "1/2", "1/2", QC)
    assert abs(scalar_product_circle_q(p, p, QC).value - 1) < 1e-7


def test_circle_cross_J_orthogonal():
    r = scalar_product_circle_q(psi(1, 0, 0, QC), psi(2, 0, 0, QC), QC)
    assert abs(r.value) < 1e-8


def test_mode_mismatch_is_exact_zero():
    r = scalar_product(psi(1, 0, 0, Q2), psi(1, 1, 0, Q2), Q2)
    assert r.value == 0 and r.est_error == 0


def test_regime_is_enforced():
    p = psi(1, 0, 0, QC)
    with pytest.raises(ValueError):
        scalar_product_real_q(p, p, QC)
    with pytest.raises(ValueError):
        scalar_product_circle_q(p, p, Q2)


def test_qpair_requires_shared_index():
    with pytest.raises(ValueError):
        QPair(bump_pair(0, Q2).at_q, bump_pair(1, Q2).at_q_inv)


@pytest.mark.parametrize("q", [Q2, QParam.real(0.7), QC, QParam.circle(-0.4)], ids=str)
def test_hermiticity_on_basis(q):
    a, b = psi(2, 1, 0, q), psi(1, 1, 0, q)
    ab, ba = scalar_product(a, b, q), scalar_product(b, a, q)
    assert abs(ab.value - np.conj(ba.value)) < 1e-10


@settings(max_examples=15, deadline=None)
@given(st.integers(-2, 2), st.floats(-1, 1), st.floats(-1, 1), st.floats(0.5, 2), st.floats(0.5, 2),
       st.floats(-1, 1), st.sampled_from([Q2, QParam.real(0.6), QC, QParam.circle(-0.5)]))
def test_hermiticity_on_random_pairs(m, c1, c2, s1, s2, k, q):
    a, b = bump_pair(m, q, c1, s1, k), bump_pair(m, q, c2, s2, -k)
    ab, ba = scalar_product(a, b, q), scalar_product(b, a, q)
    assert abs(ab.value - np.conj(ba.value)) < max(1e-10, 10 * (ab.est_error + ba.est_error))


@pytest.mark.parametrize("q", [Q2, QC], ids=["real2", "circle0.3"])
@pytest.mark.parametrize("m,N", [(0, "0"), (1, "1/2"), (-1, "-1"), (2, "3/2")])
def test_generator_adjointness(q, m, N):
    # <psi1, H+ psi2> = <H- psi1, psi2> with psi1 at index m + 1, psi2 at index m
    p1 = bump_pair(m + 1, q, 0.3, 0.8, 0.2)
    p2 = bump_pair(m, q, -0.2, 1.2, -0.3)
    lhs = scalar_product(p1, pair_h_plus(p2, N), q).value
    rhs = scalar_product(pair_h_minus(p1, N), p2, q).value
    assert abs(lhs - rhs) < 1e-7 * max(1.0, abs(lhs))


@pytest.mark.parametrize("m", [0, 1, -2])
def test_products_reduce_to_classical(m):
    eps = 1e-6
    a, b = bump_pair(m, Q2, 0.3, 0.8, 0.2), bump_pair(m, Q2, -0.2, 1.2, -0.3)
    ref = classical_product(a.at_q, b.at_q).value
    for q in (QParam.real(math.exp(eps)), QParam.circle(eps)):
        a_q = QPair.fixed(AngularMode(m, a.at_q.radial, q))
        b_q = QPair.fixed(AngularMode(m, b.at_q.radial, q))
        assert abs(scalar_product(a_q, b_q, q).value - ref) < 1e-5 * abs(ref)


def test_classical_deviation_is_first_order():
    a, b = bump_pair(1, Q2, 0.3, 0.8, 0.2), bump_pair(1, Q2, -0.2, 1.2, -0.3)
    ref = classical_product(a.at_q, b.at_q).value

    def dev(eps):
        q = QParam.real(math.exp(eps))
        a_q = QPair.fixed(AngularMode(1, a.at_q.radial, q))
        b_q = QPair.fixed(AngularMode(1, b.at_q.radial, q))
        return abs(scalar_product(a_q, b_q, q).value - ref)

    d3, d4 = dev(1e-3), dev(1e-4)
    assert d3 < 1e-2 * abs(ref)
    assert d4 < d3 / 5


# orthonormality integrals

def test_ortho_integral_examples():
    assert vilenkin_ortho_integral(1, 1, 0, 0, Q2).value == pytest.approx(1 / 5.25, abs=1e-10)
    assert abs(vilenkin_ortho_integral(1, 2, 0, 0, Q2).value) < 1e-10
    r = vilenkin_ortho_integral("1/2", "1/2", "1/2", "1/2", QC)
    assert abs(r.value - 1 / (2 * math.cos(0.3))) < 1e-10


@pytest.mark.parametrize("q", [Q2, QParam.real(0.6), QC], ids=str)
@pytest.mark.parametrize("J,M,N", [("1/2", "-1/2", "1/2"), ("1", "0", "1"), ("3/2", "1/2", "-3/2"), ("2", "-1", "0")])
def test_ortho_integral_normalisation(q, J, M, N):
    r = vilenkin_ortho_integral(J, J, M, N, q)
    assert abs(r.value * q_bracket(HalfInt.of(J).twice + 1, q) - 1) < 1e-7


def test_ortho_integral_matches_rho_form():
    # the xi-flow substitution agrees with the rho-form product up to [2J+1]_q
    for q in (Q2, QC):
        a, b = psi(2, 1, 0, q), psi(2, 1, 0, q)
        rho = scalar_product(a, b, q).value
        xi = vilenkin_ortho_integral(2, 2, 1, 0, q).value * q_bracket(5, q)
        assert abs(rho - xi) < 1e-8


# norm integrals

def test_norm_integral_real_examples():
    quad, closed = norm_integral_real("1/2", "1/2", Q2)
    assert closed == pytest.approx(8 * LN2 / 3.75, rel=1e-14)
    assert abs(quad - closed) < 1e-8
    quad, closed = norm_integral_real(0, 0, Q2)
    assert closed == pytest.approx(4 * LN2 / 1.5, rel=1e-14)
    # integrand 1/((1+eta)(1+eta/4)) has antiderivative (4/3) log((4+eta)/(1+eta))
    assert abs(quad - 4 / 3 * math.log(4)) < 1e-8


def test_norm_integral_real_oracle():
    # mpmath oracle (scripts/oracle_values.py)
    quad, _ = norm_integral_real("1/2", "1/2", Q2)
    assert abs(quad - 1.4787139851847772) < 1e-10


@pytest.mark.parametrize("q", [Q2, QParam.real(0.5), QParam.real(1.4)], ids=str)
@pytest.mark.parametrize("J,N", [("1/2", "1/2"), ("1", "0"), ("3/2", "-1/2"), ("2", "2"), ("5/2", "1/2")])
def test_norm_integral_real_agrees(q, J, N):
    quad, closed = norm_integral_real(J, N, q)
    assert abs(quad - closed) < 1e-7 * abs(closed)
    assert abs(norm_integral_real_via_qbeta(J, N, q) - closed) < 1e-10 * abs(closed)


@pytest.mark.parametrize("J,N", [("1/2", "1/2"), ("3/2", "1/2"), ("2", "1")])
def test_norm_integral_reflection(J, N):
    # the factorials are symmetric under N -> -N, so the ratio is q^(-2N)
    a, _ = norm_integral_real(J, N, Q2)
    b, _ = norm_integral_real(J, -HalfInt.of(N), Q2)
    assert abs(b / a - Q2.pow(-2 * HalfInt.of(N).value)) < 1e-8


def test_norm_integral_circle_example():
    quad, closed = norm_integral_circle("1/2", "1/2", QC)
    assert abs(quad - closed) < 1e-7 * abs(closed)


@pytest.mark.parametrize("J,N", [("1", "0"), ("3/2", "-1/2"), ("2", "1")])
def test_norm_integral_circle_agrees(J, N):
    q = QParam.circle(0.25)
    quad, closed = norm_integral_circle(J, N, q)
    assert abs(quad - closed) < 1e-7 * abs(closed)


def test_norm_integrals_check_regime():
    with pytest.raises(ValueError):
        norm_integral_real("1/2", "1/2", QC)
    with pytest.raises(ValueError):
        norm_integral_circle("1/2", "1/2", Q2)


@pytest.mark.parametrize("q", [Q2, QC], ids=["real2", "circle0.3"])
@pytest.mark.parametrize("J,N", [("1/2", "1/2"), ("1", "1"), ("3/2", "-1/2"), ("2", "0")])
def test_partial_fractions_match_factorial_form(q, J, N):
    a = partial_fraction_coefficients(J, N, q)
    b = printed_partial_fraction_coefficients(J, N, q)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12 * np.max(np.abs(a)))


@pytest.mark.parametrize("J,N", [("1/2", "1/2"), ("1", "0"), ("3/2", "1/2")])
def test_antiderivative_limits(J, N):
    q = QC
    assert abs(g_antiderivative(J, N, q, 1e12)) < 1e-9
    closed = norm_closed_form(J, N, q)
    assert abs(g_antiderivative(J, N, q, 0.0) + closed) < 1e-12
    assert abs(g_antiderivative(J, N, q, 0.0, branch="linear") + closed) < 1e-12


def test_antiderivative_branch_validation():
    with pytest.raises(ValueError):
        g_antiderivative("1/2", "1/2", QC, 1.0, branch="other")


# q-beta

def test_qbeta_examples():
    quad, closed = ramanujan_qbeta(1, 1, 0.5)
    assert closed == pytest.approx(2 * LN2, rel=1e-14)
    assert abs(quad - closed) < 1e-9
    quad, closed = ramanujan_qbeta(1, 2, 0.5)
    assert closed == pytest.approx(2 * LN2 / 1.5, rel=1e-14)
    # mpmath oracle (scripts/oracle_values.py)
    assert abs(quad - 0.92419624074659375) < 1e-10


def test_qbeta_generic_x():
    assert abs(qbeta_generic(1.5, 1.0, 0.5) - qbeta_quadrature(1.5, 1.0, 0.5).value) < 1e-9


@pytest.mark.parametrize("base", [0.3, 0.5, 0.8])
@pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (1, 3), (3, 2)])
def test_qbeta_closed_form_agrees(base, m, n):
    quad, closed = ramanujan_qbeta(m, n, base)
    assert abs(quad - closed) < 1e-7 * abs(closed)


def test_qbeta_rejects():
    for args in ((0, 1, 0.5), (1, 1, 1.5)):
        with pytest.raises(ValueError):
            qbeta_closed_form(*args)
    with pytest.raises(ValueError):
        qbeta_generic(2.0, 1.0, 0.5)


# Gram matrices

def test_gram_identity_real():
    g = gram_matrix("5/2", "1/2", "1/2", Q2)
    assert g.labels == ("1/2", "3/2", "5/2")
    assert g.max_offdiag < 1e-7 and g.max_diag_dev < 1e-7
    assert g.min_eigenvalue > 0


def test_gram_one_by_one_matches_norm_path():
    g = gram_matrix("1/2", "1/2", "1/2", Q2)
    assert g.matrix.shape == (1, 1) and g.max_offdiag == 0.0
    p = psi("1/2", "1/2", "1/2", Q2)
    assert g.matrix[0, 0] == scalar_product(p, p, Q2).value


def test_gram_parity_check():
    with pytest.raises(ValueError):
        gram_matrix("2", "1/2", "1/2", Q2)


def test_circle_domain():
    assert circle_domain_ok("5/2", QC)
    assert not circle_domain_ok("5/2", QParam.circle(0.6))
    assert circle_domain_ok("100", Q2)


def test_gram_outside_circle_domain_is_not_hermitian():
    # documented limitation: past (2J + 2)|tau| < pi the basis is not orthonormal
    q = QParam.circle(1.0)
    assert not circle_domain_ok("5/2", q)
    g = gram_matrix("5/2", "1/2", "1/2", q)
    assert np.max(np.abs(g.matrix - g.matrix.conj().T)) > 0.1
