"""The su_q(2) generators acting on single Fourier modes.

A mode is ``g(log eta) * zbar^m``, i.e. ``f(rho) exp(-i m phi)`` with
``f(rho) = g(2 log rho) rho^m``.  Every generator maps a mode to a mode:
q^T and q^Tbar (T = z d/dz) become the shifts w -> w + log q, the phase
operators become multiplication by powers of q, and z, zbar, 1/z, 1/zbar
shift m by one.

The q^(-N M/2) factor carried by the basis functions is what makes
H+- Psi_M = ([J-+M]_q [J+-M+1]_q)^(1/2) Psi_(M+-1) hold exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .qcore import HalfInt, QParam, q_bracket
from .vilenkin import VilenkinSpec, psi_radial

__all__ = [
    "AngularMode",
    "psi_mode",
    "apply_h3",
    "apply_h_plus",
    "apply_h_minus",
    "apply_casimir",
    "apply_casimir_alt",
    "commutator_check",
    "log_grid",
    "grid_norm",
]


@dataclass(frozen=True)
class AngularMode:
    """``radial(w) * zbar**m`` with w = log(eta) (complex allowed)."""

    m: int
    radial: Callable
    q: QParam
    provenance: str = ""

    def __call__(self, w):
        return np.asarray(self.radial(np.asarray(w, dtype=complex)), dtype=complex)

    def at_rho(self, rho):
        """f(rho) such that the mode equals f(rho) exp(-i m phi)."""
        rho = np.asarray(rho, dtype=float)
        return self(2.0 * np.log(rho)) * rho**self.m

    def dilate(self, k: float) -> Callable:
        """w -> radial(w + k log q)."""
        shift = k * self.q.log
        radial = self.radial
        return lambda w: radial(w + shift)

    def scaled(self, c, label: str = "") -> "AngularMode":
        radial = self.radial
        return AngularMode(self.m, lambda w: c * radial(w), self.q, label or self.provenance)

    def _combine(self, other: "AngularMode", sign: float) -> "AngularMode":
        if self.m != other.m:
            raise ValueError(f"cannot add modes with m={self.m} and m={other.m}")
        f, g = self.radial, other.radial
        return AngularMode(self.m, lambda w: f(w) + sign * g(w), self.q)

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)


def psi_mode(spec: VilenkinSpec) -> AngularMode:
    return AngularMode(spec.m, lambda w: psi_radial(spec, w), spec.q, f"Psi{spec.spin}")


def _qq(q: QParam) -> complex:
    return q.value - 1.0 / q.value


def apply_h3(mode: AngularMode, N) -> AngularMode:
    ev = mode.m - HalfInt.of(N).value
    return mode.scaled(ev, "H3")


def apply_h_plus(mode: AngularMode, N, q: QParam = None) -> AngularMode:
    q = q or mode.q
    n = HalfInt.of(N).value
    m = mode.m
    g = mode.radial
    g2 = mode.dilate(2)
    a = q.pow(m - n / 2)
    b = q.pow(1.5 * n - m)
    qq = _qq(q)

    def radial(w):
        ie = np.exp(-w)
        return -(a * (1.0 + ie) * g2(w) - a * ie * g(w) - b * g(w)) / qq

    return AngularMode(m + 1, radial, q, "H+")


def apply_h_minus(mode: AngularMode, N, q: QParam = None) -> AngularMode:
    q = q or mode.q
    n = HalfInt.of(N).value
    m = mode.m
    g = mode.radial
    g2 = mode.dilate(2)
    a = q.pow(m + n / 2)
    b = q.pow(m - 1.5 * n)
    c = q.pow(n / 2 - m)
    qq = _qq(q)

    def radial(w):
        e = np.exp(w)
        return (a * (1.0 + e) * g2(w) - b * e * g(w) - c * g(w)) / qq

    return AngularMode(m - 1, radial, q, "H-")


def apply_casimir(mode: AngularMode, N, q: QParam = None) -> AngularMode:
    """H+ H- + [H3]_q [H3 - 1]_q."""
    q = q or mode.q
    h3 = mode.m - HalfInt.of(N).value
    diag = q_bracket(h3, q) * q_bracket(h3 - 1, q)
    return apply_h_plus(apply_h_minus(mode, N, q), N, q) + mode.scaled(diag)


def apply_casimir_alt(mode: AngularMode, N, q: QParam = None) -> AngularMode:
    """H- H+ + [H3]_q [H3 + 1]_q."""
    q = q or mode.q
    h3 = mode.m - HalfInt.of(N).value
    diag = q_bracket(h3, q) * q_bracket(h3 + 1, q)
    return apply_h_minus(apply_h_plus(mode, N, q), N, q) + mode.scaled(diag)


def log_grid(n: int = 30, lo: float = 1e-2, hi: float = 1e2):
    return np.geomspace(lo, hi, n)


def grid_norm(mode: AngularMode, rho) -> float:
    return float(np.max(np.abs(mode.at_rho(rho))))


def commutator_check(mode: AngularMode, N, q: QParam = None, rho=None) -> dict:
    """Grid-max residuals of [H3, H+-] = +-H+- and [H+, H-] = [2 H3]_q."""
    q = q or mode.q
    rho = log_grid() if rho is None else rho
    hp = apply_h_plus(mode, N, q)
    hm = apply_h_minus(mode, N, q)
    res = {}
    res["[H3,H+]-H+"] = apply_h3(hp, N) - apply_h_plus(apply_h3(mode, N), N, q) - hp
    res["[H3,H-]+H-"] = apply_h3(hm, N) - apply_h_minus(apply_h3(mode, N), N, q) + hm
    two_h3 = q_bracket(2 * (mode.m - HalfInt.of(N).value), q)
    res["[H+,H-]-[2H3]"] = (
        apply_h_plus(hm, N, q) - apply_h_minus(hp, N, q) - mode.scaled(two_h3)
    )
    return {k: float(np.max(np.abs(v.at_rho(rho)))) for k, v in res.items()}
