"""Q_Jq from its product and series representations.

The canonical solutions of Q(q^2 eta)(1 + eta) = Q(eta)(1 + q^-2J eta) used
here are the finite product (integer J) and the two convergent infinite
products (real q).  Any other solution differs by a factor f with
f(q^2 eta) = f(eta); that gauge freedom is not exposed.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .qcore import HalfInt, QParam

__all__ = [
    "TruncationPolicy",
    "TruncationError",
    "PoleError",
    "log_ratio_product",
    "q_integer_J",
    "q_half_integer_real",
    "one_phi_zero",
    "q_real",
]

# head terms are summed directly until the geometric variable drops below this
_TAIL_SWITCH = 0.5


def _default_max_terms() -> int:
    return int(os.environ.get("QSU2_MAX_TERMS", 10_000_000))


@dataclass(frozen=True)
class TruncationPolicy:
    rel_tol: float = 1e-16
    max_terms: int = field(default_factory=_default_max_terms)

    def __post_init__(self):
        if self.rel_tol <= 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


class TruncationError(ArithmeticError):
    """Raised when a product or series does not converge within max_terms."""

    def __init__(self, message, partial=None, bound=None):
        super().__init__(message)
        self.partial = partial
        self.bound = bound


class PoleError(ArithmeticError):
    pass


def _kahan_log1p(w):
    """log(1 + w) accurate for small complex w."""
    w = np.asarray(w, dtype=complex)
    u = 1.0 + w
    small = u == 1.0
    denom = np.where(small, 1.0, u - 1.0)
    out = np.where(small, w, np.log(u) * w / denom)
    return out


def _log_ratio_scalar(y: complex, c: complex, r: float, policy: TruncationPolicy):
    """sum_{k>=0} [log(1 + c y r^k) - log(1 + y r^k)] for 0 < r < 1."""
    if y == 0:
        return 0j
    ay = abs(y) * max(1.0, abs(c))
    # number of head terms before |y r^k| (and |c y r^k|) falls under the switch
    if ay <= _TAIL_SWITCH:
        K = 0
    else:
        K = int(math.ceil(math.log(ay / _TAIL_SWITCH) / -math.log(r)))
    if K > policy.max_terms:
        raise TruncationError(
            f"product needs {K} head terms (> max_terms={policy.max_terms})",
            bound=ay * r**policy.max_terms,
        )
    total = 0j
    if K:
        # chunked to bound memory for q close to 1
        chunk = 1 << 20
        for start in range(0, K, chunk):
            k = np.arange(start, min(K, start + chunk))
            x = y * r**k
            total += np.sum(_kahan_log1p(c * x) - _kahan_log1p(x))
    # tail: sum_n (-1)^(n+1) x^n (c^n - 1) / (n (1 - r^n)),  x = y r^K
    x = y * r**K
    xc = abs(x) * max(1.0, abs(c))
    log_r = math.log(r)
    tail = 0j
    xn = 1.0 + 0j
    cn = 1.0 + 0j
    for n in range(1, 400):
        xn *= x
        cn *= c
        term = (-1) ** (n + 1) * xn * (cn - 1.0) / (n * -math.expm1(n * log_r))
        tail += term
        if xc**n / (n * -math.expm1(n * log_r)) < policy.rel_tol * max(1.0, abs(total + tail)) * 1e-2:
            break
    else:
        raise TruncationError("tail series did not converge", partial=total + tail)
    return total + tail


def log_ratio_product(y, c, r: float, policy: TruncationPolicy = None):
    """log prod_{k>=0} (1 + c y r^k) / (1 + y r^k), vectorised over y.

    Head factors are summed in log space; once |y r^k| < 1/2 the remaining
    tail is resummed exactly through its q-logarithm series.
    """
    if not 0.0 < r < 1.0:
        raise ValueError("base must satisfy 0 < r < 1")
    policy = policy or TruncationPolicy()
    y = np.asarray(y, dtype=complex)
    flat = np.array([_log_ratio_scalar(complex(v), complex(c), r, policy) for v in y.ravel()])
    out = flat.reshape(y.shape)
    return out[()] if out.ndim == 0 else out


def q_integer_J(J, eta, q: QParam, pole_eps: float = 1e-300):
    """prod_{k=0}^{J-1} 1 / (1 + eta q^(2k-2J)) for integer J."""
    J = HalfInt.of(J)
    if not J.is_integer:
        raise ValueError(f"q_integer_J needs integer J, got {J}")
    eta = np.asarray(eta, dtype=complex)
    out = np.ones_like(eta)
    j = int(J)
    for k in range(j):
        factor = 1.0 + eta * q.pow(2 * k - 2 * j)
        if np.any(np.abs(factor) < pole_eps):
            raise PoleError(f"Q_J has a pole at eta={eta}")
        out = out / factor
    return out[()] if out.ndim == 0 else out


def _real_product_args(J: HalfInt, q: QParam):
    """(c, r, y-scale) with log Q = log_ratio_product(scale * eta, c, r)."""
    qv = math.exp(q.tau)
    two_j = J.twice
    if qv < 1:
        # prod (1 + q^2k eta) / (1 + q^(2k-2J) eta)
        return qv**two_j, qv**2, qv ** (-two_j)
    # prod (1 + q^(-2J-2k-2) eta) / (1 + q^(-2k-2) eta)
    return qv ** (-two_j), qv ** (-2), qv ** (-2)


def q_half_integer_real(J, eta, q: QParam, policy: TruncationPolicy = None):
    """Q_Jq for real q through the convergent infinite products."""
    J = HalfInt.of(J)
    if not q.is_real:
        raise ValueError("infinite products diverge for q on the unit circle")
    c, r, scale = _real_product_args(J, q)
    return np.exp(log_ratio_product(np.multiply(scale, eta), c, r, policy))


def q_real(J, eta, q: QParam, policy: TruncationPolicy = None):
    """Q_Jq for real q, dispatching on the parity of J."""
    J = HalfInt.of(J)
    if J.is_integer:
        return q_integer_J(J, eta, q)
    return q_half_integer_real(J, eta, q, policy)


def one_phi_zero(a, base, z, policy: TruncationPolicy = None, max_terms: int = 100_000):
    """Partial sums of 1phi0(a; -; base, z) = sum_k (a; base)_k z^k / (base; base)_k."""
    policy = policy or TruncationPolicy(rel_tol=1e-16)
    a, base, z = complex(a), complex(base), complex(z)
    if abs(base) >= 1:
        raise ValueError("1phi0 needs |base| < 1")
    if abs(z) >= 1:
        raise TruncationError(f"1phi0 series diverges for |z| = {abs(z)} >= 1")
    total = 1.0 + 0j
    term = 1.0 + 0j
    bk = 1.0 + 0j
    small = 0
    for k in range(max_terms):
        term *= (1.0 - a * bk) / (1.0 - base * bk) * z
        bk *= base
        total += term
        if abs(term) < policy.rel_tol * abs(total) * 2**-4:
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise TruncationError("1phi0 series did not converge", partial=total)
