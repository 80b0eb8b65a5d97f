"""Print Gram matrices of the basis at fixed (M, N) for several q.

Run:  python3 scripts/gram_table.py --Jmax 5/2 --M 1/2 --N 1/2 --q real:2 circle:0.3
"""
import argparse

import numpy as np

from qsu2.inner import circle_domain_ok, gram_matrix
from qsu2.qcore import QParam


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--Jmax", default="5/2")
    ap.add_argument("--M", default="1/2")
    ap.add_argument("--N", default="1/2")
    ap.add_argument("--q", nargs="+", default=["real:2", "real:0.5", "circle:0.3"])
    args = ap.parse_args()
    np.set_printoptions(precision=3, linewidth=140, suppress=True)
    for spec in args.q:
        q = QParam.parse(spec)
        g = gram_matrix(args.Jmax, args.M, args.N, q)
        inside = circle_domain_ok(args.Jmax, q)
        print(f"q={spec}  J={','.join(g.labels)}  in-domain={inside}")
        print(g.matrix)
        print(f"  max offdiag {g.max_offdiag:.2e}  max |diag-1| {g.max_diag_dev:.2e}  "
              f"min eig {g.min_eigenvalue:.6f}\n")


if __name__ == "__main__":
    main()
