"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 a requested check failed.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import criteria as crit
from .calculus import (
    hyponormality_form,
    quasinormality_defect,
    toeplitz_adjoint_apply,
    toeplitz_apply,
)
from .dsl import parse_poly, parse_symbol
from .forms import commutator_gram, psd_test, quasi_defect_matrix, quasi_zero_test
from .numeric import compare_exact_numeric
from .paper_examples import format_table, run_examples

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK_FAILED = 2
DEFAULT_M = 1
DEFAULT_N = 8
DEFAULT_TOL = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _k_range(text: str) -> range:
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}")
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(lo, hi + 1)


def _common(p, symbol=True, poly=False, N=False):
    if symbol:
        p.add_argument("--symbol", required=True, help="symbol, e.g. 'z*zb^3 + z^2*zb'")
    if poly:
        p.add_argument("--poly", required=True, help="analytic polynomial, e.g. 'z - z^4'")
    if N:
        p.add_argument("--N", type=int, default=DEFAULT_N, help="truncation degree (default 8)")
    p.add_argument("--m", type=int, default=None, help="Sobolev order (default 1; required with --json)")
    p.add_argument("--json", action="store_true", help="emit JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fockcalc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _common(sub.add_parser("apply", help="T_phi f"), poly=True)
    _common(sub.add_parser("adjoint-apply", help="T_phi* f"), poly=True)
    _common(sub.add_parser("hypo-form", help="||T f||^2 - ||T* f||^2"), poly=True)
    q = sub.add_parser("quasi-defect", help="<(T*T^2 - TT*T) f, g>")
    _common(q, poly=True)
    q.add_argument("--poly2", default=None, help="second argument g (default: f)")
    _common(sub.add_parser("gram", help="self-commutator matrix on S_N"), N=True)
    _common(sub.add_parser("psd", help="exact PSD test of the self-commutator on S_N"), N=True)
    _common(sub.add_parser("quasi-matrix", help="quasinormality defect matrix on S_N"), N=True)

    c = sub.add_parser("criteria", help="necessary-condition checks")
    c.add_argument("which", choices=["thm21", "remark24", "zn-c", "remark27", "thm31"])
    c.add_argument("--symbol", default=None)
    c.add_argument("--poly", default=None, help="coefficients a_k for zn-c")
    c.add_argument("--k", type=int, default=None)
    c.add_argument("--n", type=int, default=None, help="power n in z^n + C|z|^{2s}")
    c.add_argument("--s", type=int, default=None, help="power s in C|z|^{2s}")
    c.add_argument("--C", default="1", help="coefficient C (Gaussian rational)")
    c.add_argument("--variant", choices=["printed", "derived"], default="printed")
    c.add_argument("--as-stated", action="store_true", help="stated (not derived) Qb identity")
    c.add_argument("--m", type=int, default=None)
    c.add_argument("--json", action="store_true")

    s = sub.add_parser("sweep", help="per-k necessary conditions over a range")
    _common(s)
    s.add_argument("--k-range", type=_k_range, required=True, help="a..b inclusive")
    s.add_argument("--theorem", choices=["thm21", "thm31"], default="thm21")
    s.add_argument("--as-stated", action="store_true")

    v = sub.add_parser("verify-numeric", help="quadrature cross-check of T_phi f")
    _common(v, poly=True)
    v.add_argument("--tol", type=float, default=None, help="relative tolerance (default 1e-9)")

    pe = sub.add_parser("paper-examples", help="regression suite of published worked examples")
    pe.add_argument("--json", action="store_true")
    return parser


def _order(args) -> int:
    m = getattr(args, "m", None)
    if m is None:
        if getattr(args, "json", False):
            raise UsageError("--m must be given explicitly in JSON mode")
        return DEFAULT_M
    if m < 0:
        raise UsageError("--m must be nonnegative")
    return m


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _two_term(args) -> crit.TwoTermSymbol:
    if not args.symbol:
        raise UsageError("--symbol is required")
    return crit.TwoTermSymbol.from_symbol(parse_symbol(args.symbol))


def _report_text(r) -> str:
    d = r.to_dict()
    return "  ".join(f"{k}={v}" for k, v in d.items())


def _criteria(args, m: int) -> int:
    which = args.which
    if which == "remark27":
        if args.s is None:
            raise UsageError("remark27 needs --s")
        bound = crit.remark27_bound(m, args.s)
        _emit(args, {"theorem": "remark27", "m": m, "s": args.s, "bound": str(bound)}, f"|C|^2 <= {bound}")
        return EXIT_OK
    if which == "zn-c":
        if args.n is None or args.s is None or args.poly is None:
            raise UsageError("zn-c needs --n, --s and --poly")
        res = crit.zn_c_form(args.n, args.s, args.C, m, parse_poly(args.poly))
        _emit(args, res.to_dict(), _report_text(res))
        return EXIT_OK if res.full_holds and res.reduced_holds else EXIT_CHECK_FAILED
    sym = _two_term(args)
    if which == "remark24":
        rep = crit.remark24_check(sym, m)
    else:
        if args.k is None:
            raise UsageError(f"{which} needs --k")
        if which == "thm21":
            rep = crit.thm21_inequality(sym, m, args.k, variant=args.variant)
        else:
            rep = crit.thm31_classify(sym, m, args.k, as_stated=args.as_stated)
    _emit(args, rep.to_dict(), _report_text(rep))
    return EXIT_CHECK_FAILED if rep.holds is False else EXIT_OK


def _run(args) -> int:
    cmd = args.command
    if cmd == "paper-examples":
        results = run_examples()
        ok = all(r.ok for r in results)
        _emit(args, {"results": [r.to_dict() for r in results], "pass": ok}, format_table(results))
        return EXIT_OK if ok else EXIT_CHECK_FAILED

    m = _order(args)
    if cmd == "criteria":
        return _criteria(args, m)
    if cmd == "sweep":
        sym = _two_term(args)
        options = {"as_stated": True} if args.as_stated and args.theorem == "thm31" else {}
        res = crit.necessary_sweep(sym, m, args.k_range, theorem=args.theorem, **options)
        text = "\n".join(_report_text(r) for r in res.reports)
        text += f"\nfirst failing k: {res.first_failing_k}"
        _emit(args, res.to_dict(), text)
        return EXIT_OK if res.all_hold else EXIT_CHECK_FAILED

    phi = parse_symbol(args.symbol)
    if cmd in ("apply", "adjoint-apply"):
        f = parse_poly(args.poly)
        op = toeplitz_apply if cmd == "apply" else toeplitz_adjoint_apply
        out = op(phi, f, m)
        _emit(args, {"result": str(out)}, str(out))
        return EXIT_OK
    if cmd == "hypo-form":
        value = hyponormality_form(phi, parse_poly(args.poly), m)
        _emit(args, {"value": str(value), "unit": "pi"}, str(value))
        return EXIT_OK
    if cmd == "quasi-defect":
        f = parse_poly(args.poly)
        g = parse_poly(args.poly2) if args.poly2 else f
        value = quasinormality_defect(phi, f, g, m)
        _emit(args, {"value": str(value), "unit": "pi"}, str(value))
        return EXIT_OK
    if args.__dict__.get("N") is not None and args.N < 0:
        raise UsageError("--N must be nonnegative")
    if cmd == "gram":
        G = commutator_gram(phi, m, args.N)
        _emit(args, G.to_dict(), str(G))
        return EXIT_OK
    if cmd == "psd":
        verdict = psd_test(commutator_gram(phi, m, args.N))
        text = verdict.status
        if not verdict.psd:
            text += f"\nwitness: {verdict.witness}\nvalue: {verdict.witness_value}"
        _emit(args, verdict.to_dict(), text)
        return EXIT_OK if verdict.psd else EXIT_CHECK_FAILED
    if cmd == "quasi-matrix":
        Q = quasi_defect_matrix(phi, m, args.N)
        zt = quasi_zero_test(Q)
        payload = dict(Q.to_dict(), zero_test=zt.to_dict())
        text = str(Q) + ("\nZero" if zt.zero else f"\nNonZero at (j={zt.j}, k={zt.k}): {zt.value}")
        _emit(args, payload, text)
        return EXIT_OK if zt.zero else EXIT_CHECK_FAILED
    if cmd == "verify-numeric":
        tol = DEFAULT_TOL if args.tol is None else args.tol
        rep = compare_exact_numeric(phi, parse_poly(args.poly), m, tol=tol)
        _emit(args, rep.to_dict(), _report_text(rep))
        return EXIT_OK if rep.passed else EXIT_CHECK_FAILED
    raise UsageError(f"unknown command {cmd}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except (UsageError, ValueError) as exc:
        print(f"fockcalc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
