"""Scan tau for q = e^(i tau) and report where unit norm breaks down.

For each J the norm of Psi^J_JJ is computed on a tau grid next to the
predicted bound (2J + 2)|tau| < pi.

Run:  python3 scripts/circle_domain_scan.py --J 1/2 1 3/2 --steps 12
"""
import argparse
import math

import numpy as np

from qsu2.inner import QPair, circle_domain_ok, scalar_product
from qsu2.qcore import HalfInt, QParam
from qsu2.vilenkin import VilenkinSpec


def norm_deviation(J: HalfInt, tau: float) -> float:
    q = QParam.circle(tau, guard_order=2)
    p = QPair.of_psi(VilenkinSpec.of(J, J, J, q))
    return abs(scalar_product(p, p, q).value - 1)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--J", nargs="+", default=["1/2", "1", "3/2"])
    ap.add_argument("--steps", type=int, default=12)
    args = ap.parse_args()
    print("J,tau,bound,in_domain,norm_deviation")
    for text in args.J:
        J = HalfInt.of(text)
        bound = math.pi / (J.twice + 2)
        # offset keeps the grid away from rational multiples of pi
        for tau in np.linspace(0.1, 1.6 * bound, args.steps) + 1e-3:
            try:
                dev = f"{norm_deviation(J, tau):.3e}"
            except (ValueError, ArithmeticError) as exc:
                dev = f"error: {exc}"
            print(f"{J},{tau:.4f},{bound:.4f},{circle_domain_ok(J, QParam.circle(tau, guard_order=2))},{dev}")


if __name__ == "__main__":
    main()
