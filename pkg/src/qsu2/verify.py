"""Verification suites.  Each suite returns a list of ``Check`` records."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from .algebra import (
    AngularMode,
    apply_casimir,
    apply_casimir_alt,
    apply_h_minus,
    apply_h_plus,
    commutator_check,
    grid_norm,
    log_grid,
    psi_mode,
)
from .contour import LqEvaluator, f_product, l_q
from .inner import (
    QPair,
    circle_domain_ok,
    classical_product,
    g_antiderivative,
    gram_matrix,
    norm_integral_circle,
    norm_integral_real,
    norm_integral_real_via_qbeta,
    partial_fraction_coefficients,
    printed_partial_fraction_coefficients,
    qbeta_generic,
    qbeta_quadrature,
    ramanujan_qbeta,
    scalar_product,
    vilenkin_ortho_integral,
)
from .qcore import (
    HalfInt,
    QParam,
    SpinTriple,
    alternating_qbinomial_sum,
    q_bracket,
    weighted_qbinomial_closed_form,
    weighted_qbinomial_sum,
)
from .vilenkin import (
    VilenkinSpec,
    classical_psi_radial,
    classical_vilenkin,
    p_vilenkin,
    q_function,
    q_function_log,
)

__all__ = ["Check", "SuiteConfig", "SUITES", "run_suite", "spins_up_to"]

SCHEMA_VERSION = "1.0"


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    residual: Optional[float]
    tolerance: float
    passed: bool
    skipped: bool = False
    reason: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["residual"] is not None and not math.isfinite(d["residual"]):
            d["residual"] = None
        return d


def _check(name, anchor, residual, tol) -> Check:
    residual = float(residual)
    ok = math.isfinite(residual) and residual < tol
    return Check(name, anchor, residual, tol, bool(ok))


def _skip(name, anchor, tol, reason) -> Check:
    return Check(name, anchor, None, tol, True, True, reason)


@dataclass(frozen=True)
class SuiteConfig:
    q: QParam
    J_max: HalfInt = HalfInt(4)
    M: Optional[HalfInt] = None
    N: Optional[HalfInt] = None
    grid_points: int = 30
    ladder_tol: float = 1e-8
    casimir_tol: float = 1e-8
    exact_tol: float = 1e-12
    functional_tol: float = 1e-9
    lemma_tol: float = 1e-7
    re_l_tol: float = 1e-10
    ortho_tol: float = 1e-6
    norm_tol: float = 1e-7
    qbinomial_tol: float = 1e-10
    classical_tol: float = 5e-3
    lemma_taus: tuple = ()
    qbeta_bases: tuple = (0.3, 0.5, 0.8)
    classical_eps: float = 1e-4


def spins_up_to(J_max: HalfInt, J_min: HalfInt = HalfInt(0)):
    """All J (both parities) with J_min <= J <= J_max."""
    return [HalfInt(t) for t in range(J_min.twice, J_max.twice + 1)]


def _triples(J_max: HalfInt, N=None, M=None):
    for J in spins_up_to(J_max):
        for n2 in range(-J.twice, J.twice + 1, 2):
            if N is not None and n2 != N.twice:
                continue
            for m2 in range(-J.twice, J.twice + 1, 2):
                if M is not None and m2 != M.twice:
                    continue
                yield J, HalfInt(m2), HalfInt(n2)


def _qlabel(q: QParam) -> str:
    return q.spec_string()


# ladder / casimir

def suite_ladder(cfg: SuiteConfig) -> List[Check]:
    q = cfg.q
    rho = log_grid(cfg.grid_points)
    out = []
    J_max = min(cfg.J_max, HalfInt(4))
    for J, M, N in _triples(J_max, cfg.N, cfg.M):
        spec = VilenkinSpec(SpinTriple(J, M, N), q)
        mode = psi_mode(spec)
        scale = grid_norm(mode, rho)
        for sign, op in ((1, apply_h_plus), (-1, apply_h_minus)):
            got = op(mode, N).at_rho(rho)
            Mn = M + HalfInt(2 * sign)
            if abs(Mn) <= J:
                c = np.sqrt(q_bracket(J.value - sign * M.value, q) * q_bracket(J.value + sign * M.value + 1, q))
                want = c * psi_mode(spec.with_M(Mn)).at_rho(rho)
            else:
                want = 0.0
            res = float(np.max(np.abs(got - want))) / scale
            tag = "H+" if sign > 0 else "H-"
            out.append(_check(f"ladder {tag} J={J} M={M} N={N} q={_qlabel(q)}",
                              "irrep ladder action", res, cfg.ladder_tol))
    return out


def suite_casimir(cfg: SuiteConfig) -> List[Check]:
    q = cfg.q
    rho = log_grid(cfg.grid_points)
    out = []
    J_max = min(cfg.J_max, HalfInt(4))
    for J, M, N in _triples(J_max, cfg.N, cfg.M):
        spec = VilenkinSpec(SpinTriple(J, M, N), q)
        mode = psi_mode(spec)
        f = mode.at_rho(rho)
        scale = float(np.max(np.abs(f)))
        ev = q_bracket(J.value, q) * q_bracket(J.value + 1, q)
        c1 = apply_casimir(mode, N).at_rho(rho)
        c2 = apply_casimir_alt(mode, N).at_rho(rho)
        lbl = f"J={J} M={M} N={N} q={_qlabel(q)}"
        out.append(_check(f"casimir eigenvalue {lbl}", "Casimir eigenvalue [J][J+1]",
                          np.max(np.abs(c1 - ev * f)) / scale, cfg.casimir_tol))
        out.append(_check(f"casimir orderings {lbl}", "Casimir ordering equivalence",
                          np.max(np.abs(c1 - c2)) / scale, cfg.casimir_tol))
        comm = commutator_check(mode, N, rho=rho)
        out.append(_check(f"commutators {lbl}", "su_q(2) commutation relations",
                          max(comm.values()) / scale, cfg.casimir_tol))
    if q.is_real and abs(q.tau - math.log(2)) < 1e-15:
        exact = 7.0 / 9.0
        out.append(_check("casimir 7/9 bracket value J=1/2 q=real:2", "Casimir eigenvalue [J][J+1]",
                          abs(q_bracket(0.5, q) * q_bracket(1.5, q) - exact), cfg.exact_tol))
        for M, N in ((HalfInt(1), HalfInt(1)), (HalfInt(-1), HalfInt(1))):
            mode = psi_mode(VilenkinSpec(SpinTriple(HalfInt(1), M, N), q))
            at1 = np.array([1.0])
            lam = apply_casimir(mode, N).at_rho(at1)[0] / mode.at_rho(at1)[0]
            out.append(_check(f"casimir 7/9 operator value at rho=1 M={M} N={N} q=real:2",
                              "Casimir eigenvalue [J][J+1]", abs(lam - exact), cfg.exact_tol))
    return out


# Q and L

def suite_functional_eq(cfg: SuiteConfig) -> List[Check]:
    q = cfg.q
    eta = np.geomspace(0.01, 100.0, cfg.grid_points)
    out = []
    for J in spins_up_to(min(cfg.J_max, HalfInt(5))):
        # Q(q^2 eta) with the literal phase of q^2 eta
        lhs = q_function_log(J, np.log(eta) + 2 * q.log, q) * (1 + eta)
        rhs = q_function(J, eta, q) * (1 + q.pow(-J.twice) * eta)
        res = float(np.max(np.abs(lhs - rhs) / np.abs(rhs)))
        out.append(_check(f"functional equation J={J} q={_qlabel(q)}",
                          "Q functional equation", res, cfg.functional_tol))
    return out


def suite_lemma1(cfg: SuiteConfig) -> List[Check]:
    q = cfg.q
    taus = cfg.lemma_taus
    if not taus:
        if q.is_real:
            return [_skip("lemma L_q", "L_q difference equation", cfg.lemma_tol,
                          "L_q is defined for q on the unit circle; pass a circle q")]
        taus = (q.tau, -q.tau)
    out = []
    etas = (0.1, 1.0, 10.0)
    for tau in taus:
        ev = LqEvaluator(tau)
        for eta in etas:
            lp = l_q(eta, ev, phase=tau)
            lm = l_q(eta, ev, phase=-tau)
            res = abs(lp - lm - math.log1p(eta))
            out.append(_check(f"L difference equation tau={tau:g} eta={eta:g}",
                              "L_q difference equation", res, cfg.lemma_tol))
            out.append(_check(f"L real part tau={tau:g} eta={eta:g}",
                              "L_q purely imaginary on the positive axis",
                              abs(complex(l_q(eta, ev)).real), cfg.re_l_tol))
        qq = QParam.circle(tau)
        eta_grid = np.geomspace(0.01, 100.0, 9)
        for J in (HalfInt(1), HalfInt(3), HalfInt(5)):
            w = np.log(eta_grid)
            f_q = (np.conj(q_function_log(J, w, qq)) * q_function_log(J, w - 2 * qq.log, qq)
                   / ((1 + eta_grid) * (1 + eta_grid / qq.pow(2))))
            want = f_product(J, eta_grid, qq)
            res = float(np.max(np.abs(f_q - want) / np.abs(want)))
            out.append(_check(f"F product identity J={J} tau={tau:g}",
                              "F_J product identity", res, cfg.lemma_tol))
    return out


# scalar products

def suite_ortho(cfg: SuiteConfig) -> List[Check]:
    q = cfg.q
    out = []
    MN = [(cfg.M, cfg.N)] if cfg.M is not None and cfg.N is not None else [
        (HalfInt(1), HalfInt(1)), (HalfInt(0), HalfInt(0))]
    for M, N in MN:
        J0 = max(abs(M), abs(N))
        J_top = cfg.J_max
        if (J_top - J0).twice % 2:
            J_top = J_top - HalfInt(1)
        lbl = f"M={M} N={N} Jmax={J_top} q={_qlabel(q)}"
        if J_top < J0:
            out.append(_skip(f"gram {lbl}", "orthonormal basis", cfg.ortho_tol,
                             "no spin in range for these M, N"))
            continue
        if not circle_domain_ok(J_top, q):
            # shrink to the largest J inside the domain and report the rest
            ok = [J for J in spins_up_to(J_top, J0) if (J - J0).twice % 2 == 0 and circle_domain_ok(J, q)]
            out.append(_skip(f"gram beyond domain {lbl}", "orthonormal basis", cfg.ortho_tol,
                             "(2J+2)|tau| >= pi for the largest spins"))
            if not ok:
                continue
            J_top = ok[-1]
            lbl = f"M={M} N={N} Jmax={J_top} q={_qlabel(q)}"
        g = gram_matrix(J_top, M, N, q)
        out.append(_check(f"gram off-diagonal {lbl}", "orthonormal basis", g.max_offdiag, cfg.ortho_tol))
        out.append(_check(f"gram diagonal {lbl}", "unit norm of basis functions", g.max_diag_dev, cfg.ortho_tol))
        # residual -lambda_min < 0 certifies positivity
        out.append(_check(f"gram min eigenvalue {lbl}", "positivity on finite spans",
                          -g.min_eigenvalue, 0.0))
        Js = [J for J in spins_up_to(J_top, J0) if (J - J0).twice % 2 == 0]
        for i, J1 in enumerate(Js):
            for J2 in Js[i:]:
                r = vilenkin_ortho_integral(J1, J2, M, N, q)
                want = 1 / q_bracket(2 * J1.value + 1, q) if J1 == J2 else 0.0
                out.append(_check(f"xi-form orthonormality J1={J1} J2={J2} M={M} N={N} q={_qlabel(q)}",
                                  "q-Vilenkin orthonormality relation",
                                  abs(r.value - want), cfg.ortho_tol))
    return out


def suite_norms(cfg: SuiteConfig) -> List[Check]:
    q = cfg.q
    out = []
    for J in spins_up_to(min(cfg.J_max, HalfInt(4))):
        for n2 in range(-J.twice, J.twice + 1, 2):
            N = HalfInt(n2)
            lbl = f"J={J} N={N} q={_qlabel(q)}"
            if q.is_real:
                quad, closed = norm_integral_real(J, N, q)
                out.append(_check(f"norm integral {lbl}", "norm integral closed form (real q)",
                                  abs(quad / closed - 1), cfg.norm_tol))
                via = norm_integral_real_via_qbeta(J, N, q)
                out.append(_check(f"norm integral q-beta route {lbl}", "norm integral via q-beta",
                                  abs(via / closed - 1), cfg.norm_tol))
                continue
            pf, pp = partial_fraction_coefficients(J, N, q), printed_partial_fraction_coefficients(J, N, q)
            out.append(_check(f"partial fractions {lbl}", "partial-fraction residues",
                              float(np.max(np.abs(pf - pp)) / np.max(np.abs(pf))), cfg.norm_tol))
            if not circle_domain_ok(J, q):
                out.append(_skip(f"norm integral {lbl}", "norm integral closed form (circle q)",
                                 cfg.norm_tol, "(2J+2)|tau| >= pi: closed form uses a different log branch"))
                continue
            quad, closed = norm_integral_circle(J, N, q)
            out.append(_check(f"norm integral {lbl}", "norm integral closed form (circle q)",
                              abs(quad / closed - 1), cfg.norm_tol))
            g_inf = g_antiderivative(J, N, q, 1e15)
            out.append(_check(f"antiderivative at infinity {lbl}", "G vanishes at infinity",
                              abs(g_inf) / abs(closed), 1e-6))
            out.append(_check(f"antiderivative at zero {lbl}", "G at zero equals minus the norm",
                              abs(g_antiderivative(J, N, q, 0.0) + closed) / abs(closed), cfg.norm_tol))
    out.extend(qbinomial_checks(q, HalfInt(6), cfg.qbinomial_tol))
    return out


def qbinomial_checks(q: QParam, J_max: HalfInt, tol: float) -> List[Check]:
    out = []
    for J in spins_up_to(J_max):
        for n2 in range(-J.twice, J.twice + 1, 2):
            N = HalfInt(n2)
            lbl = f"J={J} N={N} q={_qlabel(q)}"
            closed = weighted_qbinomial_closed_form(J, N, q)
            s = max(1.0, abs(closed))
            out.append(_check(f"alternating q-binomial sum {lbl}", "alternating q-binomial sum vanishes",
                              abs(alternating_qbinomial_sum(J, N, q)) / s, tol))
            out.append(_check(f"weighted q-binomial sum {lbl}", "weighted q-binomial sum closed form",
                              abs(weighted_qbinomial_sum(J, N, q) - closed) / s, tol))
    return out


def suite_qbeta(cfg: SuiteConfig) -> List[Check]:
    bases = list(cfg.qbeta_bases)
    if cfg.q.is_real:
        qv = math.exp(-abs(cfg.q.tau))
        if all(abs(qv - b) > 1e-15 for b in bases):
            bases.append(qv)
    out = []
    for b in bases:
        for m in range(1, 4):
            for n in range(1, 4):
                quad, closed = ramanujan_qbeta(m, n, b)
                out.append(_check(f"q-beta m={m} n={n} q={b:g}", "q-beta closed form",
                                  abs(quad / closed - 1), cfg.norm_tol))
    out.append(_check("q-beta m=1 n=1 q=0.5 equals 2 ln 2", "q-beta closed form",
                      abs(ramanujan_qbeta(1, 1, 0.5)[1] - 2 * math.log(2)), 1e-9))
    g = qbeta_generic(1.5, 1.0, 0.5)
    quad = qbeta_quadrature(1.5, 1.0, 0.5).value
    out.append(_check("q-beta generic x=1.5 y=1 q=0.5", "q-beta product form",
                      abs(quad / g - 1), cfg.norm_tol))
    return out


def suite_classical_limit(cfg: SuiteConfig) -> List[Check]:
    eps = cfg.classical_eps
    out = []
    xi = np.linspace(-0.99, 0.99, 199)
    qr = QParam.real(math.exp(eps))
    qc = QParam.circle(eps)
    for J, M, N in _triples(min(cfg.J_max, HalfInt(4))):
        spin = SpinTriple(J, M, N)
        ref = classical_vilenkin(spin, xi)
        got = p_vilenkin(VilenkinSpec(spin, qr), xi)
        out.append(_check(f"classical limit P J={J} M={M} N={N} q={_qlabel(qr)}",
                          "q-Vilenkin classical limit", np.max(np.abs(got - ref)), cfg.classical_tol))
        if J.is_integer:
            # half-odd J on the circle costs O(1/tau) per point; integer J is a finite product
            got = p_vilenkin(VilenkinSpec(spin, qc), xi)
            out.append(_check(f"classical limit P J={J} M={M} N={N} q={_qlabel(qc)}",
                              "q-Vilenkin classical limit", np.max(np.abs(got - ref)), cfg.classical_tol))
    for q in (qr, qc):
        for a, b in _classical_pairs(q):
            v = scalar_product(a[0], b[0], q).value
            ref = classical_product(a[1], b[1]).value
            out.append(_check(f"classical limit product {a[2]},{b[2]} q={_qlabel(q)}",
                              "scalar product classical limit", abs(v - ref), cfg.classical_tol))
    return out


def _classical_pairs(q: QParam):
    """((QPair, classical mode, label), ...) pairs for the product limit."""
    def psi(J, M, N):
        spec = VilenkinSpec.of(J, M, N, q)
        cl = AngularMode(spec.m, lambda w, s=spec.spin: classical_psi_radial(s, w), q)
        return QPair.of_psi(spec), cl, f"Psi({J},{M},{N})"

    def bump(c, s, k, label):
        mode = AngularMode(1, lambda w: np.exp(-(w - c) ** 2 / (2 * s) + 1j * k * w), q)
        return QPair.fixed(mode), mode, label

    return [
        (psi(1, 0, 0), psi(1, 0, 0)),
        (psi(1, 0, 0), psi(2, 0, 0)),
        (bump(0.0, 1.0, 0.0, "bump1"), bump(0.5, 2.0, 0.3, "bump2")),
    ]


SUITES: Dict[str, Callable[[SuiteConfig], List[Check]]] = {
    "ladder": suite_ladder,
    "casimir": suite_casimir,
    "functional-eq": suite_functional_eq,
    "lemma1": suite_lemma1,
    "ortho": suite_ortho,
    "norms": suite_norms,
    "qbeta": suite_qbeta,
    "classical-limit": suite_classical_limit,
}


def run_suite(name: str, cfg: SuiteConfig) -> List[Check]:
    names = list(SUITES) if name == "all" else [name]
    checks: List[Check] = []
    for n in names:
        if n not in SUITES:
            raise KeyError(f"unknown suite {n!r}")
        checks.extend(SUITES[n](cfg))
    return sorted(checks, key=lambda c: c.name)
