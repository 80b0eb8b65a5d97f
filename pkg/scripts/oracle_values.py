"""Independent high-precision values frozen into the test suite.

Uses mpmath only (no qsu2 code), so the numbers are a genuine cross-check.
Run:  python3 scripts/oracle_values.py
"""
import mpmath as mp

mp.mp.dps = 25


def bracket(x, q):
    return (q**x - q**-x) / (q - 1 / q)


def qfact(n, q):
    out = mp.mpf(1)
    for k in range(1, n + 1):
        out *= bracket(k, q)
    return out


def q_half_real_small_q(J, eta, q):
    """Product form for 0 < q < 1."""
    return mp.nprod(lambda k: (1 + q ** (2 * k) * eta) / (1 + q ** (-2 * J + 2 * k) * eta), [0, mp.inf])


def q_half_real_large_q(J, eta, q):
    """Product form for q > 1."""
    return mp.nprod(lambda k: (1 + q ** (-2 * J - 2 * k - 2) * eta) / (1 + q ** (-2 * k - 2) * eta),
                    [0, mp.inf])


def one_phi_zero(a, base, z):
    """sum (a; base)_k / (base; base)_k z^k for |z| < 1."""
    return mp.nsum(lambda k: mp.qp(a, base, k) / mp.qp(base, base, k) * z**k, [0, mp.inf])


def l_q(eta, tau):
    """(1 / 2 pi i) int_0^inf dt / (t (1 + t)) log(1 + eta t^(tau/pi)), 0 < tau < pi.

    Integrated in s = log t on a finite window: tanh-sinh in t misjudges the
    t^(tau/pi - 1) endpoint, and the s-tails are below 1e-40 at the cut-offs.
    """
    a = tau / mp.pi
    f = lambda s: mp.log(1 + eta * mp.exp(a * s)) / (1 + mp.exp(s))  # noqa: E731
    pts = [-800, -400, -200, -100, -50, -20, -5, 0, 5, 20, 60, 120]
    return mp.quad(f, pts) / (2j * mp.pi)


def q_half_circle(J, eta, tau):
    q = mp.expj(tau)
    return mp.exp(l_q(q ** (-2 * J - 1) * eta, tau) - l_q(q**-1 * eta, tau))


def main():
    out = {}
    out["Q(1/2, eta=1, q=0.5) product"] = q_half_real_small_q(mp.mpf(1) / 2, 1, mp.mpf("0.5"))
    q = mp.mpf("0.5")
    out["Q(1/2, eta=0.3, q=0.5) product"] = q_half_real_small_q(mp.mpf(1) / 2, mp.mpf("0.3"), q)
    out["Q(1/2, eta=0.3, q=0.5) series"] = one_phi_zero(q, q**2, -q**-1 * mp.mpf("0.3"))
    out["Q(3/2, eta=3.7, q=2) product"] = q_half_real_large_q(mp.mpf(3) / 2, mp.mpf("3.7"), 2)
    out["Q(5/2, eta=0.05, q=1.3) product"] = q_half_real_large_q(mp.mpf(5) / 2, mp.mpf("0.05"), mp.mpf("1.3"))
    out["L(eta=1, tau=0.4)"] = l_q(1, mp.mpf("0.4"))
    out["L(eta=10, tau=2.0)"] = l_q(10, mp.mpf(2))
    out["Qc(1/2, eta=1, tau=0.3)"] = q_half_circle(mp.mpf(1) / 2, 1, mp.mpf("0.3"))
    out["Qc(3/2, eta=2.5, tau=0.3)"] = q_half_circle(mp.mpf(3) / 2, mp.mpf("2.5"), mp.mpf("0.3"))

    # Psi at J = M = N = 1/2, q = e^{0.3i}, theta = pi/3, phi = 0; R = 1 and all
    # factorials except [2]_q equal 1, eta = cot^2(pi/6) = 3
    tau = mp.mpf("0.3")
    qc = mp.expj(tau)
    eta = mp.cot(mp.pi / 6) ** 2
    two = bracket(2, qc)
    psi = mp.sqrt(two) / mp.sqrt(2 * mp.pi) * qc ** (-mp.mpf(1) / 8) * mp.sqrt(eta) * q_half_circle(
        mp.mpf(1) / 2, eta, tau)
    out["psi_spherical(1/2,1/2,1/2; tau=0.3; pi/3, 0)"] = psi

    # Ramanujan q-beta integrand, m=1 n=2 q=1/2
    qb = mp.mpf("0.5")
    integrand = lambda t: mp.qp(-qb**3 * t, qb) / mp.qp(-t, qb)  # noqa: E731
    out["qbeta(1,2,0.5) quad"] = mp.quad(integrand, [0, 1, 10, mp.inf])

    # norm integral J = N = 1/2, q = 2
    q2 = mp.mpf(2)
    J = mp.mpf(1) / 2
    f = lambda e: (q_half_real_small_q(J, e, 1 / q2) * e * q_half_real_large_q(J, e / 4, q2)  # noqa: E731
                   / ((1 + e) * (1 + e / 4)))
    out["I_q(1/2,1/2,q=2) quad"] = mp.quad(f, [0, 1, 10, 100, mp.inf])
    out["q_binomial(4,2,e^{i pi/7})"] = qfact(4, mp.expj(mp.pi / 7)) / qfact(2, mp.expj(mp.pi / 7)) ** 2

    for k, v in out.items():
        print(f"{k:50s} {mp.nstr(v, 17)}")


if __name__ == "__main__":
    main()
