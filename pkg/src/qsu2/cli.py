"""Command-line front end: ``qsu2 eval | table | verify | limits``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
import time
from typing import List, Optional

import numpy as np

from .contour import LqEvaluator, QuadratureError, SectorError, l_q
from .qcore import HalfInt, QParam, SpinTriple
from .qprod import PoleError, TruncationError
from .vilenkin import (
    VilenkinSpec,
    classical_vilenkin,
    p_vilenkin,
    psi_spherical,
    q_function,
    r_polynomial,
)
from .verify import SCHEMA_VERSION, SUITES, SuiteConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_DOMAIN, EXIT_IO = 0, 1, 2, 3, 4

CSV_COLUMNS = ["J", "M", "N", "q_regime", "tau", "xi", "re", "im"]
EVAL_COLUMNS = ["fn", "J", "M", "N", "q_regime", "tau", "var", "x", "phi", "re", "im"]

_SPIN_RE = re.compile(r"^-?\d+(/2)?$")

DOMAIN_ERRORS = (ValueError, ArithmeticError, SectorError, QuadratureError,
                 TruncationError, PoleError, FloatingPointError)


class UsageError(Exception):
    pass


def parse_spin(text: str) -> HalfInt:
    """Exact rational spin, '3/2' or '-1' (floats are refused)."""
    text = text.strip()
    if not _SPIN_RE.match(text):
        raise UsageError(f"spin {text!r} must be an integer or an odd integer over 2, e.g. 3/2")
    return HalfInt.of(text)


def parse_q(text: str) -> QParam:
    try:
        return QParam.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _fmt(x: float) -> str:
    return repr(float(x))


# evaluation

def _evaluate(fn: str, spin: SpinTriple, q: QParam, var: str, x: np.ndarray, phi: float):
    spec = VilenkinSpec(spin, q)
    if fn == "Q":
        eta = _to_eta(var, x)
        return q_function(spin.J, eta, q)
    if fn == "R":
        return r_polynomial(spec, _to_eta(var, x))
    if fn == "L":
        if q.is_real:
            raise ValueError("L_q is defined for q on the unit circle")
        return l_q(_to_eta(var, x), LqEvaluator.for_q(q))
    xi = _to_xi(var, x)
    if fn == "P":
        return p_vilenkin(spec, xi)
    if fn == "PSI":
        return psi_spherical(spec, np.arccos(xi), phi)
    raise UsageError(f"unknown function {fn!r}")


def _to_eta(var, x):
    if var == "eta":
        return x
    if var == "xi":
        return (1 + x) / (1 - x)
    return 1.0 / np.tan(x / 2) ** 2  # theta


def _to_xi(var, x):
    if var == "xi":
        return x
    if var == "eta":
        return (x - 1) / (x + 1)
    return np.cos(x)


def _cell(v) -> str:
    return _fmt(v) if isinstance(v, float) else str(v)


def _rows_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(columns)
    w.writerows([_cell(v) for v in r] for r in rows)
    return buf.getvalue()


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def cmd_eval(args) -> int:
    q = parse_q(args.q)
    spin = _spin_from(args)
    var, vals = _point_arg(args)
    x = np.asarray(vals, dtype=float)
    values = np.atleast_1d(_evaluate(args.fn, spin, q, var, x, args.phi))
    rows = [
        [args.fn, str(spin.J), str(spin.M), str(spin.N), q.regime.value, float(q.tau),
         var, float(xv), float(args.phi), complex(v).real, complex(v).imag]
        for xv, v in zip(x, values)
    ]
    if args.format == "json":
        text = _json({"schema_version": SCHEMA_VERSION, "command": "eval",
                      "rows": [dict(zip(EVAL_COLUMNS, r)) for r in rows]})
    else:
        text = _rows_csv(EVAL_COLUMNS, rows)
    _emit(text, args.out)
    return EXIT_OK


def _point_arg(args):
    given = [(n, getattr(args, n)) for n in ("eta", "xi", "theta") if getattr(args, n) is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --eta, --xi, --theta")
    return given[0]


def _spin_from(args) -> SpinTriple:
    J = parse_spin(args.J)
    M = parse_spin(args.M) if args.M is not None else HalfInt(0 if J.is_integer else 1)
    N = parse_spin(args.N) if args.N is not None else HalfInt(0 if J.is_integer else 1)
    try:
        return SpinTriple(J, M, N)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_table(args) -> int:
    q = parse_q(args.q)
    spin = _spin_from(args)
    if args.points < 1:
        raise UsageError("--points must be positive")
    xi = np.linspace(args.xi_min, args.xi_max, args.points)
    if np.any(np.abs(xi) >= 1):
        raise UsageError("xi grid must lie strictly inside (-1, 1)")
    values = np.atleast_1d(_evaluate(args.fn, spin, q, "xi", xi, 0.0))
    columns = list(CSV_COLUMNS)
    classical = None
    if args.classical:
        if args.fn != "P":
            raise UsageError("--classical is available for --fn P")
        classical = np.atleast_1d(classical_vilenkin(spin, xi))
        columns += ["classical_re", "classical_im"]
    rows = []
    for i, (xv, v) in enumerate(zip(xi, values)):
        row = [str(spin.J), str(spin.M), str(spin.N), q.regime.value, float(q.tau),
               float(xv), complex(v).real, complex(v).imag]
        if classical is not None:
            c = complex(classical[i])
            row += [c.real, c.imag]
        rows.append(row)
    if args.format == "json":
        text = _json({"schema_version": SCHEMA_VERSION, "command": "table", "fn": args.fn,
                      "rows": [dict(zip(columns, r)) for r in rows]})
    else:
        text = _rows_csv(columns, rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    q = parse_q(args.q)
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}")
    cfg = SuiteConfig(
        q=q,
        J_max=parse_spin(args.Jmax),
        M=parse_spin(args.M) if args.M is not None else None,
        N=parse_spin(args.N) if args.N is not None else None,
        grid_points=args.grid_points,
        lemma_taus=tuple(args.taus or ()),
    )
    start = time.perf_counter()
    checks = run_suite(args.suite, cfg)
    elapsed = time.perf_counter() - start
    failed = [c for c in checks if not c.passed]
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "suite": args.suite,
        "flags": _flags(args),
        "passed": not failed,
        "n_checks": len(checks),
        "n_failed": len(failed),
        "n_skipped": sum(c.skipped for c in checks),
        "checks": [c.to_dict() for c in checks],
    }
    _emit(_json(report), args.out)
    print(f"{args.suite}: {len(checks) - len(failed)}/{len(checks)} passed "
          f"({report['n_skipped']} skipped) in {elapsed:.1f}s", file=sys.stderr)
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_limits(args) -> int:
    spin = _spin_from(args)
    xi = np.linspace(-0.99, 0.99, args.points)
    ref = classical_vilenkin(spin, xi)
    rows = []
    for eps in args.eps:
        for q in (QParam.real(math.exp(eps)), QParam.circle(eps)):
            got = p_vilenkin(VilenkinSpec(spin, q), xi)
            dev = float(np.max(np.abs(got - ref)))
            rows.append({"q": q.spec_string(), "eps": eps, "sup_deviation": dev,
                         "ratio_to_eps": dev / eps})
    report = {"schema_version": SCHEMA_VERSION, "command": "limits",
              "J": str(spin.J), "M": str(spin.M), "N": str(spin.N), "rows": rows}
    if args.format == "json":
        text = _json(report)
    else:
        text = _rows_csv(["q", "eps", "sup_deviation", "ratio_to_eps"],
                         [[r["q"], r["eps"], r["sup_deviation"], r["ratio_to_eps"]] for r in rows])
    _emit(text, args.out)
    return EXIT_OK


def _flags(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "handler"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qsu2", description="su_q(2) functions on the sphere")
    sub = p.add_subparsers(dest="command", required=True)

    def spins(sp, need_j=True):
        sp.add_argument("--J", required=need_j, help="spin, e.g. 3/2")
        sp.add_argument("--M")
        sp.add_argument("--N")

    def output(sp):
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", help="output file (default stdout)")

    e = sub.add_parser("eval", help="evaluate Q, P, PSI, L or R at points")
    e.add_argument("--fn", choices=("Q", "P", "PSI", "L", "R"), required=True)
    e.add_argument("--q", required=True, help="real:<q> or circle:<tau>")
    spins(e, need_j=False)
    e.add_argument("--eta", type=float, nargs="+")
    e.add_argument("--xi", type=float, nargs="+")
    e.add_argument("--theta", type=float, nargs="+")
    e.add_argument("--phi", type=float, default=0.0)
    output(e)
    e.set_defaults(handler=cmd_eval, J="0")

    t = sub.add_parser("table", help="tabulate on a xi grid")
    t.add_argument("--fn", choices=("Q", "P", "PSI"), default="P")
    t.add_argument("--q", required=True)
    spins(t)
    t.add_argument("--points", type=int, default=11)
    t.add_argument("--xi-min", type=float, default=-0.99)
    t.add_argument("--xi-max", type=float, default=0.99)
    t.add_argument("--classical", action="store_true", help="add the q = 1 values of P")
    output(t)
    t.set_defaults(handler=cmd_table)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, choices=sorted(SUITES) + ["all"])
    v.add_argument("--q", required=True)
    v.add_argument("--Jmax", default="2")
    v.add_argument("--M")
    v.add_argument("--N")
    v.add_argument("--grid-points", type=int, default=30)
    v.add_argument("--taus", type=float, nargs="+", help="tau values for the lemma1 suite")
    v.add_argument("--out", help="report file (default stdout)")
    v.set_defaults(handler=cmd_verify)

    lim = sub.add_parser("limits", help="deviation of P from its q = 1 limit")
    spins(lim)
    lim.add_argument("--eps", type=float, nargs="+", default=[1e-2, 1e-3, 1e-4])
    lim.add_argument("--points", type=int, default=199)
    output(lim)
    lim.set_defaults(handler=cmd_limits)
    return p


_SPIN_FLAGS = ("--J", "--M", "--N", "--Jmax")
_NEG_SPIN = re.compile(r"^-\d+(/2)?$")


def _join_negative_spins(argv: List[str]) -> List[str]:
    """'--N -1/2' -> '--N=-1/2' (argparse would read -1/2 as a flag)."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _SPIN_FLAGS and i + 1 < len(argv) and _NEG_SPIN.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_join_negative_spins(argv))
    except SystemExit as exc:
        # argparse exits 2 on bad usage and 0 after --help
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"qsu2: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"qsu2: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DOMAIN_ERRORS as exc:
        print(f"qsu2: numeric domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
