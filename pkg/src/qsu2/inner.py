"""Scalar products, orthonormality integrals and norm closed forms.

Functions enter as single Fourier modes ``g(w) zbar^m`` (see ``algebra``).
The angular integral then gives 2 pi delta_{m1 m2}, the area element is
rho drho dphi = deta dphi / 2, and radial integrals are done in w = log eta
over a finite window, where basis integrands decay at least like exp(-|w|).
Dilations such as q^(-z d_z - zbar d_zbar) act as w -> w - 2 log q together
with the factor q^(-m).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import AngularMode, apply_h_minus, apply_h_plus, psi_mode
from .contour import LqEvaluator, f_product
from .qcore import HalfInt, QParam, Regime, q_bracket, q_factorial
from .qprod import TruncationPolicy, log_ratio_product
from .quad import QuadratureSpec, QuadResult, quad_interval
from .vilenkin import VilenkinSpec, p_vilenkin_log, q_function_log

__all__ = [
    "QPair",
    "InnerProductReport",
    "GramReport",
    "scalar_product",
    "scalar_product_real_q",
    "scalar_product_circle_q",
    "classical_product",
    "vilenkin_ortho_integral",
    "norm_closed_form",
    "norm_integral_real",
    "norm_integral_real_via_qbeta",
    "norm_integral_circle",
    "partial_fraction_coefficients",
    "printed_partial_fraction_coefficients",
    "g_antiderivative",
    "ramanujan_qbeta",
    "qbeta_closed_form",
    "qbeta_generic",
    "qbeta_quadrature",
    "gram_matrix",
    "circle_domain_ok",
    "pair_h_plus",
    "pair_h_minus",
]

DEFAULT_SPEC = QuadratureSpec(abs_tol=1e-11, rel_tol=1e-10)
W_RANGE = 40.0


@dataclass(frozen=True)
class QPair:
    """A function at q and at 1/q, both as modes with the same m."""

    at_q: AngularMode
    at_q_inv: AngularMode

    def __post_init__(self):
        if self.at_q.m != self.at_q_inv.m:
            raise ValueError("both members of a QPair must share the Fourier index")

    @property
    def m(self) -> int:
        return self.at_q.m

    @classmethod
    def of_psi(cls, spec: VilenkinSpec) -> "QPair":
        return cls(psi_mode(spec), psi_mode(spec.at_inverse()))

    @classmethod
    def fixed(cls, mode: AngularMode) -> "QPair":
        """A q-independent function."""
        inv = AngularMode(mode.m, mode.radial, mode.q.inv(), mode.provenance)
        return cls(mode, inv)


@dataclass(frozen=True)
class InnerProductReport:
    value: complex
    est_error: float
    regime: Optional[Regime]
    converged: bool = True


def _report(res: QuadResult, scale: complex, regime) -> InnerProductReport:
    return InnerProductReport(
        complex(scale * res.value), float(abs(scale) * res.error), regime, res.converged
    )


def _w_integral(f, spec: QuadratureSpec, w_range: float) -> QuadResult:
    return quad_interval(f, -w_range, w_range, spec, initial=16)


def _prefactor(q: QParam) -> complex:
    # (q - 1/q) / (2 log q): sinh(tau)/tau or sin(tau)/tau
    return (q.value - 1.0 / q.value) / (2.0 * q.log)


def scalar_product_real_q(psi1: QPair, psi2: QPair, q: QParam,
                          spec: QuadratureSpec = DEFAULT_SPEC,
                          w_range: float = W_RANGE) -> InnerProductReport:
    if not q.is_real:
        raise ValueError("scalar_product_real_q needs real q")
    if psi1.m != psi2.m:
        return InnerProductReport(0j, 0.0, Regime.POSITIVE_REAL)
    m, L = psi1.m, q.log
    qm = q.pow(1 + m)

    def f(w):
        eta = np.exp(w)
        t1 = np.conj(psi1.at_q_inv(w)) * psi2.at_q(w - 2 * L) / (qm * (1 + eta) * (1 + eta / q.pow(2)))
        t2 = np.conj(psi1.at_q(w)) * qm * psi2.at_q_inv(w + 2 * L) / ((1 + eta) * (1 + q.pow(2) * eta))
        return eta ** (m + 1) * (t1 + t2)

    res = _w_integral(f, spec, w_range)
    return _report(res, math.pi * _prefactor(q), Regime.POSITIVE_REAL)


def scalar_product_circle_q(psi1: QPair, psi2: QPair, q: QParam,
                            spec: QuadratureSpec = DEFAULT_SPEC,
                            w_range: float = W_RANGE) -> InnerProductReport:
    if q.is_real:
        raise ValueError("scalar_product_circle_q needs q on the unit circle")
    if psi1.m != psi2.m:
        return InnerProductReport(0j, 0.0, Regime.UNIT_CIRCLE)
    m, L = psi1.m, q.log
    qm = q.pow(1 + m)

    def f(w):
        eta = np.exp(w)
        t1 = np.conj(psi1.at_q(w)) * psi2.at_q(w - 2 * L) / (qm * (1 + eta) * (1 + eta / q.pow(2)))
        t2 = np.conj(psi1.at_q_inv(w)) * qm * psi2.at_q_inv(w + 2 * L) / ((1 + eta) * (1 + q.pow(2) * eta))
        return eta ** (m + 1) * (t1 + t2)

    res = _w_integral(f, spec, w_range)
    return _report(res, math.pi * _prefactor(q).real, Regime.UNIT_CIRCLE)


def scalar_product(psi1: QPair, psi2: QPair, q: QParam, spec: QuadratureSpec = DEFAULT_SPEC,
                   w_range: float = W_RANGE) -> InnerProductReport:
    fn = scalar_product_real_q if q.is_real else scalar_product_circle_q
    return fn(psi1, psi2, q, spec, w_range)


def classical_product(mode1: AngularMode, mode2: AngularMode,
                      spec: QuadratureSpec = DEFAULT_SPEC,
                      w_range: float = W_RANGE) -> InnerProductReport:
    """2 int dz dzbar conj(psi1) psi2 / (1 + z zbar)^2."""
    if mode1.m != mode2.m:
        return InnerProductReport(0j, 0.0, None)
    m = mode1.m

    def f(w):
        eta = np.exp(w)
        return eta ** (m + 1) * np.conj(mode1(w)) * mode2(w) / (1 + eta) ** 2

    res = _w_integral(f, spec, w_range)
    return _report(res, 2 * math.pi, None)


def vilenkin_ortho_integral(J1, J2, M, N, q: QParam,
                            spec: QuadratureSpec = DEFAULT_SPEC) -> InnerProductReport:
    """The xi-form orthonormality integral; expected delta / [2J+1]_q.

    q^((xi^2 - 1) d_xi) is the flow of -2 eta d_eta, i.e. eta -> q^-2 eta,
    xi -> (q^-2 eta - 1)/(q^-2 eta + 1); it is applied as w -> w - 2 log q.
    """
    s1 = VilenkinSpec.of(J1, M, N, q)
    s2 = VilenkinSpec.of(J2, M, N, q)
    s1i, s2i = s1.at_inverse(), s2.at_inverse()
    L = q.log
    qv = q.value
    plus, minus = qv + 1 / qv, qv - 1 / qv
    real = q.is_real

    def f(xi):
        w = np.log1p(xi) - np.log1p(-xi)
        a1 = s1i if real else s1  # member conjugated in the first term
        b1 = s1 if real else s1i
        t1 = np.conj(p_vilenkin_log(a1, w)) * p_vilenkin_log(s2, w - 2 * L) / (plus - minus * xi)
        t2 = np.conj(p_vilenkin_log(b1, w)) * p_vilenkin_log(s2i, w + 2 * L) / (plus + minus * xi)
        return t1 + t2

    res = quad_interval(f, -1.0, 1.0, spec, initial=16)
    scale = minus / (4 * L)
    if not real:
        scale = scale.real
    return _report(res, scale, q.regime)


def circle_domain_ok(J, q: QParam) -> bool:
    """True when (2J + 2)|tau| < pi.

    Past this bound the dilation w -> w -+ 2i tau sweeps the integration ray
    across poles of Q_J, the norm closed form picks up a branch of
    log q^(2p - 2J) other than (2p - 2J) log q, and orthonormality fails.
    Real q is always inside.
    """
    if q.is_real:
        return True
    return (HalfInt.of(J).twice + 2) * abs(q.tau) < math.pi


def pair_h_plus(pair: QPair, N) -> QPair:
    return QPair(apply_h_plus(pair.at_q, N),
                 apply_h_plus(pair.at_q_inv, N))


def pair_h_minus(pair: QPair, N) -> QPair:
    return QPair(apply_h_minus(pair.at_q, N),
                 apply_h_minus(pair.at_q_inv, N))


# norm integrals

def norm_closed_form(J, N, q: QParam) -> complex:
    """2 log q q^(J+N+1) [J+N]! [J-N]! / ((q - 1/q) [2J+1]!)."""
    J, N = HalfInt.of(J), HalfInt.of(N)
    return (
        2 * q.log * q.pow((J + N).value + 1)
        * q_factorial(int(J + N), q) * q_factorial(int(J - N), q)
        / ((q.value - 1 / q.value) * q_factorial(J.twice + 1, q))
    )


def norm_integral_real(J, N, q: QParam, spec: QuadratureSpec = DEFAULT_SPEC,
                       w_range: float = W_RANGE, policy: TruncationPolicy = None):
    """(quadrature, closed form) of int Q_{J,1/q}(eta) eta^(J+N) Q_J(eta/q^2) / ((1+eta)(1+eta/q^2))."""
    J, N = HalfInt.of(J), HalfInt.of(N)
    if not q.is_real:
        raise ValueError("norm_integral_real needs real q")
    qi = q.inv()
    L = q.log
    k = (J + N).value + 1

    def f(w):
        eta = np.exp(w)
        num = q_function_log(J, w, qi, policy=policy) * q_function_log(J, w - 2 * L, q, policy=policy)
        return np.exp(k * w) * num / ((1 + eta) * (1 + eta / q.pow(2)))

    res = _w_integral(f, spec, w_range)
    return complex(res.value), norm_closed_form(J, N, q)


def norm_integral_real_via_qbeta(J, N, q: QParam) -> complex:
    """I_q through the closed q-beta value at base q^2 (q < 1) or q^-2 (q > 1)."""
    J, N = HalfInt.of(J), HalfInt.of(N)
    qv = math.exp(q.tau)
    m, n = int(J + N) + 1, int(J - N) + 1
    j = J.value
    if qv < 1:
        return qv ** (2 * (j + 1) * m) * qbeta_closed_form(m, n, qv**2)
    return qv ** (-2 * j * m) * qbeta_closed_form(m, n, qv**-2)


def norm_integral_circle(J, N, q: QParam, spec: QuadratureSpec = DEFAULT_SPEC,
                         w_range: float = W_RANGE):
    """(quadrature, closed form) of int F_J(eta) eta^(J+N) deta."""
    J, N = HalfInt.of(J), HalfInt.of(N)
    if q.is_real:
        raise ValueError("norm_integral_circle needs q on the unit circle")
    k = (J + N).value + 1

    def f(w):
        return np.exp(k * w) * f_product(J, np.exp(w), q)

    res = _w_integral(f, spec, w_range)
    return complex(res.value), norm_closed_form(J, N, q)


def _poles(J: HalfInt, q: QParam):
    return [q.pow(2 * p - J.twice) for p in range(J.twice + 2)]


def partial_fraction_coefficients(J, N, q: QParam):
    """a_p with eta^(J+N) F_J(eta) = sum_p a_p / (eta + c_p), c_p = q^(2p-2J), from residues."""
    J, N = HalfInt.of(J), HalfInt.of(N)
    c = _poles(J, q)
    scale = q.pow(J.twice + 2)  # F = scale * prod 1/(eta + c_p)
    out = []
    for p, cp in enumerate(c):
        den = np.prod([cr - cp for r, cr in enumerate(c) if r != p])
        out.append(scale * (-cp) ** int(J + N) / den)
    return np.array(out, dtype=complex)


def printed_partial_fraction_coefficients(J, N, q: QParam):
    """The same coefficients from the closed q-factorial expression."""
    J, N = HalfInt.of(J), HalfInt.of(N)
    pref = (-1) ** int(J + N) * q.pow(J.value + 1) / (q.value - 1 / q.value) ** (J.twice + 1)
    return np.array([
        pref * (-1) ** p * q.pow(N.value * (2 * p - J.twice))
        / (q_factorial(p, q) * q_factorial(J.twice + 1 - p, q))
        for p in range(J.twice + 2)
    ], dtype=complex)


def g_antiderivative(J, N, q: QParam, eta, branch: str = "principal"):
    """G(eta) = sum_p a_p log(eta + c_p).

    ``principal`` uses the principal logarithm, which is continuous along
    eta >= 0; ``linear`` replaces log c_p by (2p - 2J) log q at eta = 0,
    which coincides with the principal value only while |(2p - 2J) tau| < pi.
    """
    J = HalfInt.of(J)
    a = partial_fraction_coefficients(J, N, q)
    c = _poles(J, q)
    eta = np.asarray(eta, dtype=complex)
    out = np.zeros_like(eta)
    for p, (ap, cp) in enumerate(zip(a, c)):
        if branch == "linear":
            lg = np.where(eta == 0, (2 * p - J.twice) * q.log, np.log(eta + cp))
        elif branch == "principal":
            lg = np.log(eta + cp)
        else:
            raise ValueError(f"unknown branch {branch!r}")
        out = out + ap * lg
    return out[()] if out.ndim == 0 else out


# Ramanujan's continuous q-beta integral

def qbeta_closed_form(m: int, n: int, q: float) -> float:
    """tilde B_q(m, n) for positive integers m, n and 0 < q < 1."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive integers")
    if not 0 < q < 1:
        raise ValueError("q must lie in (0, 1)")
    h = QParam.real(math.sqrt(q))
    val = (
        math.log(q) * q ** (-m * (n + m - 1) / 2)
        * q_factorial(m - 1, h) * q_factorial(n - 1, h)
        / ((h.value - 1 / h.value) * q_factorial(n + m - 1, h))
    )
    return float(np.real(val))


def qbeta_generic(x: float, y: float, q: float, tol: float = 1e-17) -> float:
    """pi/sin(pi x) prod_k (1-q^(k-x))(1-q^(x+y+k-1)) / ((1-q^k)(1-q^(y+k-1)))."""
    if not 0 < q < 1:
        raise ValueError("q must lie in (0, 1)")
    if float(x).is_integer():
        raise ValueError("x must be non-integer; use qbeta_closed_form")
    total = 0.0
    sign = 1.0
    k = 1
    while True:
        num = (1 - q ** (k - x)) * (1 - q ** (x + y + k - 1))
        den = (1 - q**k) * (1 - q ** (y + k - 1))
        ratio = num / den
        sign *= math.copysign(1.0, ratio)
        total += math.log(abs(ratio))
        if k > x + 1 and q**k * (1 + q ** -x) * (1 + q ** (x + y - 1)) < tol:
            break
        k += 1
    return sign * math.pi / math.sin(math.pi * x) * math.exp(total)


def qbeta_quadrature(x: float, y: float, q: float, spec: QuadratureSpec = DEFAULT_SPEC,
                     policy: TruncationPolicy = None, s_range: float = 60.0) -> QuadResult:
    """int_0^inf t^(x-1) prod_k (1 + q^(x+y+k) t)/(1 + q^k t) dt, in s = log t."""
    c = q ** (x + y)

    def f(s):
        return np.exp(x * s + log_ratio_product(np.exp(s), c, q, policy))

    return quad_interval(f, -s_range, s_range, spec, initial=16)


def ramanujan_qbeta(m: int, n: int, q: float, spec: QuadratureSpec = DEFAULT_SPEC):
    """(quadrature, closed form) of tilde B_q(m, n)."""
    res = qbeta_quadrature(m, n, q, spec)
    return complex(res.value), qbeta_closed_form(m, n, q)


# Gram matrices

@dataclass(frozen=True)
class GramReport:
    labels: tuple
    matrix: np.ndarray
    errors: np.ndarray
    max_offdiag: float
    max_diag_dev: float
    min_eigenvalue: float


def gram_matrix(J_max, M, N, q: QParam, spec: QuadratureSpec = DEFAULT_SPEC,
                lq: LqEvaluator = None) -> GramReport:
    """Gram matrix of Psi^J_MN, max(|M|,|N|) <= J <= J_max, under the product for q."""
    J_max, M, N = HalfInt.of(J_max), HalfInt.of(M), HalfInt.of(N)
    J0 = max(abs(M), abs(N))
    if (J_max - J0).twice % 2:
        raise ValueError("J_max must have the parity of M and N")
    Js = [HalfInt(t) for t in range(J0.twice, J_max.twice + 1, 2)]
    pairs = [QPair.of_psi(VilenkinSpec.of(J, M, N, q, lq=lq)) for J in Js]
    n = len(Js)
    G = np.zeros((n, n), dtype=complex)
    E = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            r = scalar_product(pairs[i], pairs[j], q, spec)
            G[i, j], E[i, j] = r.value, r.est_error
    off = G - np.diag(np.diag(G))
    herm = 0.5 * (G + G.conj().T)
    return GramReport(
        tuple(str(J) for J in Js), G, E,
        float(np.max(np.abs(off))) if n > 1 else 0.0,
        float(np.max(np.abs(np.diag(G) - 1))),
        float(np.min(np.linalg.eigvalsh(herm))),
    )


