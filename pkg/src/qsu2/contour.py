"""The half-line integral L_q and Q_Jq for half-odd J with q on the unit circle.

For q = exp(i tau), 0 < tau < pi,

    L_q(eta) = 1/(2 pi i) int_0^inf dt / (t (1 + t)) log(1 + eta t^(tau/pi)),

and L_q = -L_{q^-1} for negative tau.  With t = exp(u) the integrand
becomes log(1 + eta exp(a u)) / (1 + exp(u)), a = |tau|/pi, which is smooth
on the real line and analytic in a strip, so the trapezoidal rule converges
geometrically.  Each evaluation refines the step until two consecutive
halvings agree within ``quad_tol``.

Arguments are carried as (modulus, phase) pairs so that phases beyond
+-pi stay meaningful.  Phases outside the sector |phase| <= sector are
brought back with L(z) = L(q^2 z) - log(1 + q z) (or its mirror); the
logarithm branches chosen there only shift L by multiples of 2 pi i, which
drop out of exp(L(..) - L(..)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qcore import HalfInt, QParam
from .qprod import PoleError

__all__ = [
    "LqEvaluator",
    "SectorError",
    "QuadratureError",
    "l_q",
    "l_q_polar",
    "reduce_to_sector",
    "q_half_integer_circle",
    "f_product",
]

_TAIL = 1e-18
_MAX_ELEMENTS = 1 << 21


class SectorError(ValueError):
    pass


class QuadratureError(ArithmeticError):
    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


@dataclass(frozen=True)
class LqEvaluator:
    tau: float
    quad_tol: float = 1e-13
    sector: float = 0.95 * math.pi
    max_halvings: int = 12

    def __post_init__(self):
        if not 0 < abs(self.tau) < math.pi:
            raise ValueError("tau must lie in (-pi, 0) or (0, pi)")
        if self.quad_tol <= 0:
            raise ValueError("quad_tol must be positive")
        if not 0 < self.sector < math.pi:
            raise ValueError("sector bound must lie in (0, pi)")

    @classmethod
    def for_q(cls, q: QParam, **kwargs) -> "LqEvaluator":
        if q.is_real:
            raise ValueError("L_q is defined for q on the unit circle")
        return cls(q.tau, **kwargs)


def _log1p(w):
    u = 1.0 + w
    small = u == 1.0
    denom = np.where(small, 1.0, u - 1.0)
    return np.where(small, w, np.log(u) * w / denom)


def _trapezoid_batch(r, beta, ev: LqEvaluator):
    """In-sector L for arrays r > 0 and |beta| <= sector."""
    a = abs(ev.tau) / math.pi
    zeta = r * np.exp(1j * beta)
    # strip half-width of analyticity in u
    d = min(math.pi, (math.pi - float(np.max(np.abs(beta)))) / a)
    h = 2 * math.pi * d / 40.0
    log_r = np.log(r)
    lo = float(np.min((math.log(_TAIL) - np.maximum(log_r, 0.0)) / a))
    lo = min(lo, -40.0)
    hi = 50.0

    def grid_sum(u):
        # chunked over u so memory stays bounded when |tau| is small
        total = np.zeros(zeta.shape, dtype=complex)
        step = max(1, _MAX_ELEMENTS // max(1, zeta.size))
        for s in range(0, u.size, step):
            uu = u[s:s + step]
            w = zeta[:, None] * np.exp(a * uu[None, :])
            total += (_log1p(w) / (1.0 + np.exp(uu))[None, :]).sum(axis=1)
        return total

    n = int(math.ceil((hi - lo) / h))
    h = (hi - lo) / n
    base = np.arange(n + 1)
    s = grid_sum(lo + h * base)
    s -= 0.5 * (grid_sum(np.array([lo])) + grid_sum(np.array([hi])))
    prev = h * s
    for level in range(1, ev.max_halvings + 1):
        # midpoints of the previous grid
        stride = h / 2 ** (level - 1)
        s = s + grid_sum(lo + stride * (np.arange(n * 2 ** (level - 1)) + 0.5))
        cur = (stride / 2) * s
        err = float(np.max(np.abs(cur - prev)))
        prev = cur
        if err <= ev.quad_tol * 0.5 * max(1.0, float(np.max(np.abs(cur)))):
            break
    else:
        raise QuadratureError("trapezoid refinement did not settle", achieved=err)
    sign = 1.0 if ev.tau > 0 else -1.0
    return sign * prev / (2j * math.pi), err / (2 * math.pi)


def reduce_to_sector(r, beta, ev: LqEvaluator, eps: float = 1e-14):
    """Rotate (r, beta) into the sector; returns (beta', correction).

    L(r e^{i beta}) = L(r e^{i beta'}) + correction, modulo 2 pi i.
    """
    r = np.asarray(r, dtype=float)
    beta = np.array(beta, dtype=float, copy=True)
    r, beta = np.broadcast_arrays(r, beta)
    beta = beta.copy()
    corr = np.zeros(beta.shape, dtype=complex)
    tau = ev.tau
    step = 2 * abs(tau)
    for _ in range(10_000):
        low = beta < -ev.sector
        high = beta > ev.sector
        if not (low.any() or high.any()):
            return beta, corr
        if step >= 2 * ev.sector:
            raise SectorError("rotation step 2|tau| exceeds the sector width")
        for mask, up in ((low, True), (high, False)):
            if not mask.any():
                continue
            # moving phase up by 2|tau| uses q^2 if tau > 0, else q^-2
            use_q2 = up == (tau > 0)
            z = r[mask] * np.exp(1j * beta[mask])
            if use_q2:
                # L(z) = L(q^2 z) - log(1 + q z)
                arg = 1.0 + z * np.exp(1j * tau)
                sgn = -1.0
            else:
                # L(z) = L(q^-2 z) + log(1 + q^-1 z)
                arg = 1.0 + z * np.exp(-1j * tau)
                sgn = 1.0
            if np.any(np.abs(arg) < eps):
                raise SectorError("reduction passes through the logarithmic branch point")
            corr[mask] += sgn * np.log(arg)
            beta[mask] += step if up else -step
    raise SectorError("sector reduction did not terminate")


def l_q_polar(r, beta, ev: LqEvaluator, chunk: int = 256):
    """L_q at r * exp(i beta) with the phase taken literally (no wrapping)."""
    r = np.asarray(r, dtype=float)
    beta = np.asarray(beta, dtype=float)
    r, beta = np.broadcast_arrays(r, beta)
    shape = r.shape
    r = r.ravel()
    beta = beta.ravel()
    red, corr = reduce_to_sector(r, beta, ev)
    out = np.zeros(r.shape, dtype=complex)
    zero = r == 0
    idx = np.flatnonzero(~zero)
    for s in range(0, idx.size, chunk):
        sel = idx[s:s + chunk]
        out[sel], _ = _trapezoid_batch(r[sel], red[sel], ev)
    out = out + np.where(zero, 0.0, corr)
    out = out.reshape(shape)
    return out[()] if out.ndim == 0 else out


def l_q(eta, ev: LqEvaluator, phase=None):
    """L_q(eta); the phase defaults to the principal argument of eta."""
    eta = np.asarray(eta, dtype=complex)
    if phase is None:
        phase = np.angle(eta)
    return l_q_polar(np.abs(eta), phase, ev)


def q_half_integer_circle(J, eta, q: QParam, ev: LqEvaluator = None, phase=None):
    """exp{L(q^(-2J-1) eta) - L(q^-1 eta)} for half-odd J and |q| = 1."""
    J = HalfInt.of(J)
    if q.is_real:
        raise ValueError("this representation is for q on the unit circle")
    if J.is_integer:
        raise ValueError(f"J={J} is an integer; use the finite product")
    ev = ev or LqEvaluator.for_q(q)
    eta = np.asarray(eta, dtype=complex)
    r = np.abs(eta)
    beta = np.angle(eta) if phase is None else np.asarray(phase, dtype=float)
    r, beta = np.broadcast_arrays(r, beta)
    tau = q.tau
    both = l_q_polar(
        np.stack([r, r]),
        np.stack([beta - (J.twice + 1) * tau, beta - tau]),
        ev,
    )
    out = np.where(r == 0, 1.0 + 0j, np.exp(both[0] - both[1]))
    return out[()] if out.ndim == 0 else out


def f_product(J, eta, q: QParam, pole_eps: float = 1e-300):
    """prod_{p=0}^{2J+1} 1 / (1 + q^(2J-2p) eta)."""
    J = HalfInt.of(J)
    eta = np.asarray(eta, dtype=complex)
    out = np.ones_like(eta)
    for p in range(J.twice + 2):
        factor = 1.0 + q.pow(J.twice - 2 * p) * eta
        if np.any(np.abs(factor) < pole_eps):
            raise PoleError("F_Jq pole")
        out = out / factor
    return out[()] if out.ndim == 0 else out
