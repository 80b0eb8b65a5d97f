"""Half-integer labels, the deformation parameter, and q-numbers.

All q-arithmetic returns complex numbers, including in the unit-circle
regime where the values are real; callers assert realness where it matters.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "Regime",
    "QParam",
    "HalfInt",
    "SpinTriple",
    "q_bracket",
    "q_factorial",
    "inverse_q_factorial",
    "q_binomial",
    "alternating_qbinomial_sum",
    "weighted_qbinomial_sum",
    "weighted_qbinomial_closed_form",
]

DEFAULT_GUARD_ORDER = 12


class Regime(str, enum.Enum):
    POSITIVE_REAL = "real"
    UNIT_CIRCLE = "circle"


@dataclass(frozen=True)
class QParam:
    """q = exp(tau) (positive real) or q = exp(i tau) (unit circle)."""

    regime: Regime
    tau: float
    guard_order: int = DEFAULT_GUARD_ORDER

    def __post_init__(self):
        object.__setattr__(self, "regime", Regime(self.regime))
        tau = float(self.tau)
        object.__setattr__(self, "tau", tau)
        if not math.isfinite(tau) or tau == 0.0:
            raise ValueError(f"tau must be finite and nonzero, got {tau}")
        if self.regime is Regime.UNIT_CIRCLE:
            if not 0.0 < abs(tau) < math.pi:
                raise ValueError(f"circle regime needs 0 < |tau| < pi, got {tau}")
            ratio = tau / math.pi
            for r in range(1, self.guard_order + 1):
                if abs(ratio * r - round(ratio * r)) < 1e-10:
                    raise ValueError(
                        f"q = exp(i*{tau}) is a root of unity of order <= {self.guard_order}"
                    )

    @classmethod
    def real(cls, q: float, guard_order: int = DEFAULT_GUARD_ORDER) -> "QParam":
        if q <= 0:
            raise ValueError("positive-real regime needs q > 0")
        return cls(Regime.POSITIVE_REAL, math.log(q), guard_order)

    @classmethod
    def circle(cls, tau: float, guard_order: int = DEFAULT_GUARD_ORDER) -> "QParam":
        return cls(Regime.UNIT_CIRCLE, tau, guard_order)

    @classmethod
    def parse(cls, text: str, guard_order: int = DEFAULT_GUARD_ORDER) -> "QParam":
        """Parse ``real:<q>`` or ``circle:<tau>``."""
        kind, _, value = text.partition(":")
        if not value:
            raise ValueError(f"bad q spec {text!r}; expected real:<q> or circle:<tau>")
        if kind == "real":
            return cls.real(float(value), guard_order)
        if kind == "circle":
            return cls.circle(float(value), guard_order)
        raise ValueError(f"unknown q regime {kind!r}")

    @property
    def is_real(self) -> bool:
        return self.regime is Regime.POSITIVE_REAL

    @property
    def log(self) -> complex:
        return complex(self.tau) if self.is_real else 1j * self.tau

    @property
    def value(self) -> complex:
        return complex(np.exp(self.log))

    def pow(self, x):
        """q**x on the branch fixed by tau (array-friendly)."""
        return np.exp(np.multiply(x, self.log))

    def inv(self) -> "QParam":
        return QParam(self.regime, -self.tau, self.guard_order)

    def spec_string(self) -> str:
        if self.is_real:
            return f"real:{math.exp(self.tau)!r}"
        return f"circle:{self.tau!r}"


@dataclass(frozen=True, order=True)
class HalfInt:
    """A half-integer stored exactly as twice its value."""

    twice: int

    @classmethod
    def of(cls, value) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            value = Fraction(value.strip())
        frac = Fraction(value)
        if (2 * frac).denominator != 1:
            raise ValueError(f"{value!r} is not a half-integer")
        return cls(int(2 * frac))

    @property
    def value(self) -> float:
        return self.twice / 2

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __add__(self, other):
        return HalfInt(self.twice + HalfInt.of(other).twice)

    def __sub__(self, other):
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __neg__(self):
        return HalfInt(-self.twice)

    def __abs__(self):
        return HalfInt(abs(self.twice))

    def __int__(self):
        if not self.is_integer:
            raise ValueError(f"{self} is not an integer")
        return self.twice // 2

    def __float__(self):
        return self.value

    def __str__(self):
        return str(self.twice // 2) if self.is_integer else f"{self.twice}/2"


@dataclass(frozen=True)
class SpinTriple:
    J: HalfInt
    M: HalfInt
    N: HalfInt

    def __post_init__(self):
        J, M, N = (HalfInt.of(x) for x in (self.J, self.M, self.N))
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "N", N)
        if J.twice < 0:
            raise ValueError("J must be non-negative")
        if not (J.twice % 2 == M.twice % 2 == N.twice % 2):
            raise ValueError(f"J={J}, M={M}, N={N} must share integrality")
        if abs(M.twice) > J.twice or abs(N.twice) > J.twice:
            raise ValueError(f"need |M| <= J and |N| <= J (J={J}, M={M}, N={N})")

    @classmethod
    def of(cls, J, M, N) -> "SpinTriple":
        return cls(HalfInt.of(J), HalfInt.of(M), HalfInt.of(N))

    def __str__(self):
        return f"(J={self.J}, M={self.M}, N={self.N})"


def q_bracket(x, q: QParam):
    """[x]_q = (q^x - q^-x) / (q - q^-1), vectorised over x."""
    if isinstance(x, HalfInt):
        x = x.value
    x = np.asarray(x, dtype=float)
    if q.is_real:
        out = np.sinh(x * q.tau) / math.sinh(q.tau)
    else:
        out = np.sin(x * q.tau) / math.sin(q.tau)
    out = out.astype(complex)
    return out[()] if out.ndim == 0 else out


def q_factorial(n: int, q: QParam) -> complex:
    n = int(n)
    if n < 0:
        raise ValueError("q_factorial needs n >= 0; use inverse_q_factorial")
    if n == 0:
        return 1.0 + 0j
    return complex(np.prod(q_bracket(np.arange(1, n + 1), q)))


def inverse_q_factorial(n: int, q: QParam) -> complex:
    """1/[n]_q!, with the convention that it vanishes for negative n."""
    if n < 0:
        return 0j
    return 1.0 / q_factorial(n, q)


def q_binomial(n: int, p: int, q: QParam) -> complex:
    if not 0 <= p <= n:
        raise ValueError(f"q_binomial needs 0 <= p <= n, got n={n}, p={p}")
    return q_factorial(n, q) / (q_factorial(p, q) * q_factorial(n - p, q))


def alternating_qbinomial_sum(J, N, q: QParam) -> complex:
    """sum_p (-1)^p C_q(2J+1, p) q^(2Np); vanishes whenever |N| <= J."""
    J, N = HalfInt.of(J), HalfInt.of(N)
    n = J.twice + 1
    return sum(
        (-1) ** p * q_binomial(n, p, q) * q.pow(N.twice * p) for p in range(n + 1)
    )


def weighted_qbinomial_sum(J, N, q: QParam) -> complex:
    """sum_p (-1)^(p-1) p C_q(2J+1, p) q^(2N(p-1))."""
    J, N = HalfInt.of(J), HalfInt.of(N)
    n = J.twice + 1
    return sum(
        (-1) ** (p - 1) * p * q_binomial(n, p, q) * q.pow(N.twice * (p - 1))
        for p in range(n + 1)
    )


def weighted_qbinomial_closed_form(J, N, q: QParam) -> complex:
    J, N = HalfInt.of(J), HalfInt.of(N)
    jmn = int(J - N)
    jpn = int(J + N)
    qq = q.value - 1.0 / q.value
    return (
        (-1) ** jpn
        * qq ** J.twice
        * q_factorial(jmn, q)
        * q_factorial(jpn, q)
        * q.pow(N.value * (J.twice - 1))
    )
