"""q-Vilenkin functions and the basis functions Psi^J_MNq.

Radial parts are evaluated on the logarithmic variable ``w = log(eta)``
(complex in general).  A dilation eta -> q^k eta is then the exact shift
w -> w + k log q, and for q on the unit circle the phase of a rotated
argument is never wrapped back into (-pi, pi]; Q_Jq for half-odd J is not
single valued around eta = 0, so this matters once |k tau| > pi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .contour import LqEvaluator, q_half_integer_circle
from .qcore import HalfInt, QParam, SpinTriple, inverse_q_factorial, q_factorial
from .qprod import TruncationPolicy, q_half_integer_real, q_integer_J

__all__ = [
    "VilenkinSpec",
    "CoordinatePoint",
    "q_function",
    "q_function_log",
    "r_polynomial",
    "r_polynomial_terms",
    "normalization",
    "psi_radial",
    "psi_plane",
    "psi_spherical",
    "p_vilenkin",
    "p_vilenkin_log",
    "classical_vilenkin",
    "classical_normalization",
    "classical_psi_radial",
]


@dataclass(frozen=True)
class VilenkinSpec:
    spin: SpinTriple
    q: QParam
    lq: Optional[LqEvaluator] = None
    policy: Optional[TruncationPolicy] = None

    @classmethod
    def of(cls, J, M, N, q: QParam, **kwargs) -> "VilenkinSpec":
        return cls(SpinTriple.of(J, M, N), q, **kwargs)

    def at_inverse(self) -> "VilenkinSpec":
        """The same labels at q^-1."""
        lq = None if self.lq is None else LqEvaluator(
            -self.lq.tau, self.lq.quad_tol, self.lq.sector, self.lq.max_halvings
        )
        return VilenkinSpec(self.spin, self.q.inv(), lq, self.policy)

    def with_M(self, M) -> "VilenkinSpec":
        return VilenkinSpec(SpinTriple(self.spin.J, HalfInt.of(M), self.spin.N),
                            self.q, self.lq, self.policy)

    @property
    def m(self) -> int:
        """Fourier index: the function carries exp(-i m phi)."""
        return int(self.spin.M + self.spin.N)


@dataclass(frozen=True)
class CoordinatePoint:
    """A point of the plane/sphere; stored as (theta, phi)."""

    theta: float
    phi: float = 0.0

    @classmethod
    def from_z(cls, z: complex) -> "CoordinatePoint":
        rho = abs(z)
        return cls(2.0 * math.atan2(1.0, rho), math.atan2(z.imag, z.real) % (2 * math.pi))

    @classmethod
    def from_xi(cls, xi: float, phi: float = 0.0) -> "CoordinatePoint":
        return cls(math.acos(xi), phi)

    @property
    def rho(self) -> float:
        return math.cos(self.theta / 2) / math.sin(self.theta / 2)

    @property
    def z(self) -> complex:
        return self.rho * complex(math.cos(self.phi), math.sin(self.phi))

    @property
    def eta(self) -> float:
        return self.rho**2

    @property
    def xi(self) -> float:
        return math.cos(self.theta)


def q_function_log(J, w, q: QParam, lq: LqEvaluator = None, policy: TruncationPolicy = None):
    """Q_Jq at eta = exp(w), in all four (parity, regime) cases."""
    J = HalfInt.of(J)
    w = np.asarray(w, dtype=complex)
    if J.is_integer:
        return q_integer_J(J, np.exp(w), q)
    if q.is_real:
        return q_half_integer_real(J, np.exp(w), q, policy)
    return q_half_integer_circle(J, np.exp(w.real), q, lq, phase=w.imag)


def q_function(J, eta, q: QParam, lq: LqEvaluator = None, phase=None,
               policy: TruncationPolicy = None):
    """Q_Jq(eta); ``phase`` overrides the principal argument of eta."""
    eta = np.asarray(eta, dtype=complex)
    if phase is None:
        phase = np.angle(eta)
    with np.errstate(divide="ignore"):
        w = np.log(np.abs(eta)) + 1j * np.asarray(phase, dtype=float)
    out = q_function_log(J, w, q, lq, policy)
    # eta = 0 limit
    out = np.where(np.abs(eta) == 0, 1.0 + 0j, out)
    return out[()] if out.ndim == 0 else out


def _k_range(spin: SpinTriple):
    J, M, N = spin.J, spin.M, spin.N
    k_min = max(0, -int(M + N))
    k_max = min(int(J - M), int(J - N))
    return k_min, k_max


def r_polynomial_terms(spin: SpinTriple, q: QParam):
    """[(k, coefficient)] with R = sum_k coefficient * eta^k."""
    J, M, N = spin.J, spin.M, spin.N
    jm, jn, mn = int(J - M), int(J - N), int(M + N)
    pref = q_factorial(jn, q) * q_factorial(jm, q)
    k_min, k_max = _k_range(spin)
    terms = []
    for k in range(k_min, k_max + 1):
        c = (-1) ** k * pref
        for n in (k, jm - k, jn - k, mn + k):
            c *= inverse_q_factorial(n, q)
        terms.append((k, c))
    return terms


def r_polynomial(spec: VilenkinSpec, eta):
    eta = np.asarray(eta, dtype=complex)
    out = np.zeros_like(eta)
    for k, c in r_polynomial_terms(spec.spin, spec.q):
        out = out + c * eta**k
    return out[()] if out.ndim == 0 else out


def _sqrt(x: complex) -> complex:
    return complex(np.sqrt(complex(x)))


def normalization(spec: VilenkinSpec, gamma: complex = 1.0) -> complex:
    """N^J_MNq with gamma(J, N, q) = gamma (1 by default)."""
    J, M, N = spec.spin.J, spec.spin.M, spec.spin.N
    q = spec.q
    f = lambda n: q_factorial(n, q)  # noqa: E731
    c = _sqrt(f(int(J + N)) * f(J.twice + 1) / f(int(J - N))) / math.sqrt(2 * math.pi)
    return c * gamma * _sqrt(f(int(J + M)) / (f(int(J - M)) * f(J.twice)))


def _psi_prefactor(spec: VilenkinSpec) -> complex:
    """N^J_MN q^(-N M/2)."""
    return normalization(spec) * spec.q.pow(-spec.spin.N.value * spec.spin.M.value / 2)


def psi_radial(spec: VilenkinSpec, w):
    """g(w) with Psi = g(log eta) * zbar^(M+N)."""
    w = np.asarray(w, dtype=complex)
    spin = spec.spin
    pref = _psi_prefactor(spec)
    eta = np.exp(w)
    out = pref * q_function_log(spin.J, w, spec.q, spec.lq, spec.policy) * r_polynomial(spec, eta)
    return out[()] if np.ndim(out) == 0 else out


def psi_plane(spec: VilenkinSpec, z, zbar=None):
    """Psi^J_MNq(z, zbar); zbar defaults to conj(z)."""
    z = np.asarray(z, dtype=complex)
    zbar = np.conj(z) if zbar is None else np.asarray(zbar, dtype=complex)
    with np.errstate(divide="ignore"):
        w = np.log(z) + np.log(zbar)
    z, zbar, w = np.broadcast_arrays(z, zbar, w)
    m = spec.m
    nz = np.abs(z * zbar) != 0
    out = np.zeros(z.shape, dtype=complex)
    if np.any(nz):
        out[nz] = psi_radial(spec, w[nz]) * zbar[nz] ** m
    if m == 0 and np.any(~nz):
        # eta = 0: Q = 1 and only the constant term of R survives
        out[~nz] = _psi_prefactor(spec) * r_polynomial(spec, 0.0)
    return out[()] if out.ndim == 0 else out


def _i_pow(k: int) -> complex:
    return (1, 1j, -1, -1j)[k % 4]


def p_vilenkin_log(spec: VilenkinSpec, w):
    """P^J_MNq at eta = exp(w), the value xi = (eta - 1)/(eta + 1)."""
    J, M, N = spec.spin.J, spec.spin.M, spec.spin.N
    q = spec.q
    f = lambda n: q_factorial(n, q)  # noqa: E731
    pref = _i_pow(int(J + J - M - N)) * _sqrt(
        f(int(J + M)) * f(int(J + N)) / (f(int(J - M)) * f(int(J - N)))
    )
    w = np.asarray(w, dtype=complex)
    eta = np.exp(w)
    out = (
        pref
        * np.exp(0.5 * int(M + N) * w)
        * q_function_log(J, w, q, spec.lq, spec.policy)
        * r_polynomial(spec, eta)
    )
    return out[()] if np.ndim(out) == 0 else out


def _xi_to_w(xi):
    xi = np.asarray(xi, dtype=float)
    if np.any(np.abs(xi) >= 1):
        raise ValueError("xi must lie strictly inside (-1, 1)")
    return np.log1p(xi) - np.log1p(-xi)


def p_vilenkin(spec: VilenkinSpec, xi):
    return p_vilenkin_log(spec, _xi_to_w(xi))


def psi_spherical(spec: VilenkinSpec, theta, phi):
    J, M, N = spec.spin.J, spec.spin.M, spec.spin.N
    q = spec.q
    f = lambda n: q_factorial(n, q)  # noqa: E731
    c = _sqrt(f(int(J + N)) * f(J.twice + 1) / f(int(J - N))) / math.sqrt(2 * math.pi)
    pref = (
        c
        * _sqrt(f(int(J - N)) / (f(int(J + N)) * f(J.twice)))
        * _i_pow(int(M + N - J - J))
        * q.pow(-N.value * M.value / 2)
    )
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    # log cot^2(theta/2), avoiding the cancellation in (1 + xi)/(1 - xi)
    w = 2.0 * (np.log(np.cos(theta / 2)) - np.log(np.sin(theta / 2)))
    out = pref * p_vilenkin_log(spec, w) * np.exp(-1j * spec.m * phi)
    return out[()] if np.ndim(out) == 0 else out


def _classical_r(spin: SpinTriple, eta):
    J, M, N = spin.J, spin.M, spin.N
    jm, jn, mn = int(J - M), int(J - N), int(M + N)
    k_min, k_max = _k_range(spin)
    fact = math.factorial
    eta = np.asarray(eta, dtype=float)
    out = np.zeros_like(eta)
    for k in range(k_min, k_max + 1):
        out = out + (-eta) ** k / (fact(k) * fact(jm - k) * fact(jn - k) * fact(mn + k))
    return fact(jn) * fact(jm) * out


def classical_vilenkin(spin: SpinTriple, xi):
    """P^J_MN(xi) at q = 1, where Q_J(eta) = (1 + eta)^-J."""
    J, M, N = spin.J, spin.M, spin.N
    fact = math.factorial
    xi = np.asarray(xi, dtype=float)
    if np.any(np.abs(xi) >= 1):
        raise ValueError("xi must lie strictly inside (-1, 1)")
    eta = (1 + xi) / (1 - xi)
    pref = _i_pow(int(J + J - M - N)) * math.sqrt(
        fact(int(J + M)) * fact(int(J + N)) / (fact(int(J - M)) * fact(int(J - N)))
    )
    out = np.asarray(pref * eta ** (0.5 * int(M + N)) * (1 + eta) ** (-J.value) * _classical_r(spin, eta))
    if np.all(np.abs(np.imag(out)) == 0):
        out = np.real(out)
    return out[()] if np.ndim(out) == 0 else out


def classical_normalization(spin: SpinTriple) -> float:
    J, M, N = spin.J, spin.M, spin.N
    fact = math.factorial
    c = math.sqrt(fact(int(J + N)) * fact(J.twice + 1) / fact(int(J - N))) / math.sqrt(2 * math.pi)
    return c * math.sqrt(fact(int(J + M)) / (fact(int(J - M)) * fact(J.twice)))


def classical_psi_radial(spin: SpinTriple, w):
    """q = 1 analogue of psi_radial (real w)."""
    w = np.asarray(w, dtype=complex)
    eta = np.exp(w)
    return classical_normalization(spin) * (1 + eta) ** (-spin.J.value) * _classical_r(spin, eta.real)
