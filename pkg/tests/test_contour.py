import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsu2.contour import (
    LqEvaluator,
    SectorError,
    f_product,
    l_q,
    l_q_polar,
    q_half_integer_circle,
    reduce_to_sector,
)
from qsu2.qcore import QParam
from qsu2.vilenkin import q_function_log

QC = QParam.circle(0.3)
TAUS = (0.2, -0.2, 0.7, -0.7, 2.0, -2.0)


def test_frozen_values():
    # mpmath, integral in s = log t (scripts/oracle_values.py)
    assert l_q(1.0, LqEvaluator(0.4)) == pytest.approx(-1.0447504584468082j, abs=1e-14)
    assert l_q(10.0, LqEvaluator(2.0)) == pytest.approx(-1.1963062418033522j, abs=1e-14)
    assert q_half_integer_circle("1/2", 1.0, QC) == pytest.approx(
        0.71061629344081724 + 0.080283314363561985j, abs=1e-13)
    assert q_half_integer_circle("3/2", 2.5, QC) == pytest.approx(
        0.11492781471294296 + 0.1220146656230225j, abs=1e-13)


def test_eta_zero():
    assert l_q(0.0, LqEvaluator(0.4)) == 0
    assert q_half_integer_circle("1/2", 0.0, QC) == 1


@pytest.mark.parametrize("tau", TAUS)
def test_difference_equation(tau):
    ev = LqEvaluator(tau)
    eta = np.array([0.1, 1.0, 10.0])
    lhs = l_q(eta, ev, phase=tau) - l_q(eta, ev, phase=-tau)
    np.testing.assert_allclose(lhs, np.log1p(eta), atol=1e-12)


@pytest.mark.parametrize("tau", TAUS)
def test_purely_imaginary_and_mirror(tau):
    eta = np.geomspace(1e-3, 1e3, 7)
    a = l_q(eta, LqEvaluator(tau))
    b = l_q(eta, LqEvaluator(-tau))
    assert np.max(np.abs(a.real)) < 1e-13
    np.testing.assert_allclose(np.conj(a), -a, atol=1e-13)
    np.testing.assert_allclose(b, -a, atol=1e-13)


def test_reduce_in_sector_is_identity():
    ev = LqEvaluator(0.4)
    beta, corr = reduce_to_sector(np.array([2.0]), np.array([0.5]), ev)
    assert beta[0] == 0.5 and corr[0] == 0


@pytest.mark.parametrize("beta", [-1.4, -0.9, 0.8, 1.5])
def test_reduction_matches_direct_evaluation(beta):
    # a narrow sector forces the reduction; the default sector integrates directly
    narrow = LqEvaluator(0.3, sector=0.6)
    wide = LqEvaluator(0.3)
    red, corr = reduce_to_sector(np.array([2.0]), np.array([beta]), narrow)
    assert abs(red[0]) <= 0.6 and corr[0] != 0
    assert l_q_polar(2.0, beta, narrow) == pytest.approx(l_q_polar(2.0, beta, wide), abs=1e-12)


def test_far_ray_satisfies_difference_equation():
    # tau = 0.9 and phase -4 tau lies outside the sector; two reduction steps
    tau = 0.9
    ev = LqEvaluator(tau)
    beta = -4 * tau
    red, _ = reduce_to_sector(np.array([2.0]), np.array([beta]), ev)
    assert abs(red[0]) <= ev.sector
    lhs = l_q_polar(2.0, beta + tau, ev) - l_q_polar(2.0, beta - tau, ev)
    assert lhs == pytest.approx(np.log(1 + 2.0 * np.exp(1j * beta)), abs=1e-11)


def test_sector_step_too_wide():
    ev = LqEvaluator(2.9, sector=2.0)
    with pytest.raises(SectorError):
        reduce_to_sector(np.array([1.0]), np.array([2.5]), ev)


def test_evaluator_validation():
    for kw in ({"tau": 0.0}, {"tau": 3.5}, {"tau": 0.3, "quad_tol": 0.0}, {"tau": 0.3, "sector": 4.0}):
        with pytest.raises(ValueError):
            LqEvaluator(**kw)
    with pytest.raises(ValueError):
        LqEvaluator.for_q(QParam.real(2.0))
    assert LqEvaluator.for_q(QC).tau == 0.3


def test_half_integer_circle_rejects_other_cases():
    with pytest.raises(ValueError):
        q_half_integer_circle("1/2", 1.0, QParam.real(2.0))
    with pytest.raises(ValueError):
        q_half_integer_circle("1", 1.0, QC)


def test_tolerance_halving_is_stable():
    eta = np.array([0.1, 1.0, 10.0])
    a = l_q(eta, LqEvaluator(0.7, quad_tol=1e-9))
    b = l_q(eta, LqEvaluator(0.7, quad_tol=5e-10))
    c = l_q(eta, LqEvaluator(0.7, quad_tol=1e-14))
    assert np.max(np.abs(a - c)) < 1e-9 and np.max(np.abs(b - c)) < 5e-10


@pytest.mark.parametrize("twice", [1, 3, 5])
def test_circle_q_functional_equation(twice):
    eta = np.geomspace(0.01, 100, 11)
    w = np.log(eta)
    lhs = q_function_log(twice / 2, w + 2 * QC.log, QC) * (1 + eta)
    rhs = q_half_integer_circle(twice / 2, eta, QC) * (1 + QC.pow(-twice) * eta)
    assert np.max(np.abs(lhs - rhs) / np.abs(rhs)) < 1e-10


def test_f_product_examples():
    eta = np.array([0.0, 0.5, 2.0])
    np.testing.assert_allclose(f_product(0, eta, QC), 1 / ((1 + eta) * (1 + QC.pow(-2) * eta)), rtol=1e-15)
    assert f_product("3/2", 0.0, QC) == 1


@pytest.mark.parametrize("tau", [0.3, -0.7, 2.0])
@pytest.mark.parametrize("twice", [1, 3, 5])
def test_f_product_identity(twice, tau):
    q = QParam.circle(tau)
    eta = np.geomspace(0.01, 100, 9)
    w = np.log(eta)
    J = twice / 2
    lhs = (np.conj(q_function_log(J, w, q)) * q_function_log(J, w - 2 * q.log, q)
           / ((1 + eta) * (1 + q.pow(-2) * eta)))
    np.testing.assert_allclose(lhs, f_product(J, eta, q), rtol=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(-4.0, 4.0))
def test_difference_equation_property(tau, log_eta):
    if abs(tau / math.pi * 12 - round(tau / math.pi * 12)) < 1e-6:
        return
    ev = LqEvaluator(tau)
    eta = math.exp(log_eta)
    d = l_q(eta, ev, phase=tau) - l_q(eta, ev, phase=-tau)
    assert abs(d - math.log1p(eta)) < 1e-11
