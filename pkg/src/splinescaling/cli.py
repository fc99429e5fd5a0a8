"""
Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 numeric failure, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings

import numpy as np

from .factor import (
    RELIABLE_MAX_ORDER,
    BranchInvalid,
    FactorizationError,
    enumerate_solutions,
    laurent_symbol,
)
from .filterbank import LengthError, dwt_periodic, idwt_periodic, make_filter_pair, pyramid_norm
from .report import construct, fraction_str, verify
from .scaling import DEFAULT_ITERS, DEFAULT_LEVEL, NonConvergence, cascade, refinement_mask
from .symbol import MAX_ORDER, eea_q, lorentz_q

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_NUMERIC = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _diag(msg: str) -> None:
    if sys.stderr.isatty() and not os.environ.get("NO_COLOR"):
        msg = f"\033[33m{msg}\033[0m"
    print(msg, file=sys.stderr)


def _emit_json(obj) -> None:
    # floats use the shortest repr that round-trips exactly
    print(json.dumps(obj, indent=2))


def _check_n(n: int, cap: int = MAX_ORDER) -> None:
    if not 1 <= n <= cap:
        raise UsageError(f"--n must lie in [1, {cap}], got {n}")


def _order_warning(n: int) -> dict:
    if n > RELIABLE_MAX_ORDER:
        return {"warning": f"order {n} is beyond the validated range n <= {RELIABLE_MAX_ORDER}"}
    return {}


def cmd_qpoly(args) -> int:
    _check_n(args.n)
    q = lorentz_q(args.n)
    coeffs = q.poly.coeffs
    match = None
    if args.oracle:
        s, t = eea_q(args.n)
        match = s.poly == q.poly
    if args.json:
        out = {
            "n": args.n,
            "coeffs_exact": [fraction_str(c) for c in coeffs],
            "coeffs": [float(c) for c in coeffs],
        }
        if match is not None:
            out["eea_oracle"] = "MATCH" if match else "MISMATCH"
        _emit_json(out)
    else:
        print(str(q.poly))
        print("decimal: " + ", ".join(f"{float(c):.17g}" for c in coeffs))
        if match is not None:
            print(f"EEA oracle: {'MATCH' if match else 'MISMATCH'}")
    return EXIT_OK if match in (None, True) else EXIT_VERIFY


def _solution_dict(sol, branch_label: str) -> dict:
    return {
        "branch": branch_label,
        "branch_bits": list(sol.branch),
        "sign": sol.sign,
        "a": list(sol.a),
        "sum_a": sol.sum_a,
        "sum_a_sq": sol.sum_a_sq,
    }


def cmd_factor(args) -> int:
    _check_n(args.n)
    q = lorentz_q(args.n)
    L = laurent_symbol(q)
    head = {"n": args.n, "c_exact": [fraction_str(c) for c in L.exact], **_order_warning(args.n)}
    if args.all:
        # every real solution of the coefficient equations: both S_n(1) = +1 and -1 families
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            sols = enumerate_solutions(L, include_sign_flips=True)
        half = len(sols) // 2
        entries = [
            _solution_dict(s, f"index:{i % half}" if s.sign > 0 else f"index:{i % half}:negated")
            for i, s in enumerate(sols)
        ]
        _emit_json({**head, "count": len(entries), "solutions": entries})
        return EXIT_OK
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        con = construct(args.n, args.branch)
    _emit_json({**head, **_solution_dict(con.factor, args.branch)})
    return EXIT_OK


def cmd_coeffs(args) -> int:
    _check_n(args.n)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        con = construct(args.n, args.branch)
    mask = con.mask
    if args.format == "csv":
        sys.stdout.write("k,p\n")
        for k, pk in zip(mask.indices, mask.p):
            sys.stdout.write(f"{k},{pk:.17g}\n")
    else:
        _emit_json(
            {
                "n": args.n,
                "branch": args.branch,
                "k_min": mask.k_min,
                "k_max": mask.k_max,
                "k": [int(k) for k in mask.indices],
                "p": [float(v) for v in mask.p],
                **_order_warning(args.n),
            }
        )
    return EXIT_OK


def cmd_cascade(args) -> int:
    _check_n(args.n)
    if not 1 <= args.levels <= 16:
        raise UsageError(f"--levels must lie in [1, 16], got {args.levels}")
    if not 1 <= args.iters <= 200:
        raise UsageError(f"--iters must lie in [1, 200], got {args.iters}")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NonConvergence)
        warnings.simplefilter("ignore", RuntimeWarning)
        con = construct(args.n, args.branch)
        table = cascade(con.mask, args.levels, args.iters)
    lines = ["x,phi\n"] + [f"{x:.17g},{v:.17g}\n" for x, v in zip(table.x, table.samples)]
    if args.out:
        try:
            with open(args.out, "w", newline="") as fh:
                fh.writelines(lines)
        except OSError as exc:
            _diag(f"cannot write {args.out}: {exc.strerror}")
            return EXIT_NUMERIC
    else:
        sys.stdout.writelines(lines)
    _diag(f"cascade n={args.n} J={args.levels} iters={args.iters}: last sup-norm change {table.last_diff:.3e}")
    for w in caught:
        if issubclass(w.category, NonConvergence):
            _diag(f"warning: {w.message}")
    return EXIT_OK


def _parse_perturb(text: str) -> tuple[int, float]:
    try:
        k, delta = text.split(":")
        return int(k), float(delta)
    except ValueError:
        raise UsageError(f"--perturb expects INDEX:DELTA, got {text!r}") from None


def cmd_verify(args) -> int:
    _check_n(args.n)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        con = construct(args.n, args.branch)
    mask = None
    if args.perturb:
        k, delta = _parse_perturb(args.perturb)
        try:
            mask = con.mask.perturbed(k, delta)
        except IndexError as exc:
            raise UsageError(str(exc)) from None
    rep = verify(con, args.branch, mask)
    out = rep.to_dict()
    out.update(_order_warning(args.n))
    if args.perturb:
        out["perturbation"] = args.perturb
    _emit_json(out)
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_roundtrip(args) -> int:
    _check_n(args.n)
    if args.length < 1 or args.levels < 1:
        raise UsageError("--length and --levels must be positive")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        con = construct(args.n, args.branch)
    pair = make_filter_pair(con.mask)
    x = np.random.default_rng(args.seed).standard_normal(args.length)
    try:
        pyr = dwt_periodic(x, pair, args.levels)
    except LengthError as exc:
        raise UsageError(str(exc)) from None
    y = idwt_periodic(pyr, pair)
    max_err = float(np.max(np.abs(y - x)))
    _emit_json(
        {
            "n": args.n,
            "branch": args.branch,
            "length": args.length,
            "levels": args.levels,
            "seed": args.seed,
            "max_err": max_err,
            "max_err_rel": max_err / float(np.max(np.abs(x))),
            "parseval_dev": abs(float(pyramid_norm(pyr)) / float(np.linalg.norm(x)) - 1.0),
        }
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="splinescaling", description="Spline-type orthogonal scaling functions from Lorentz polynomials.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_n(p, branch=True):
        p.add_argument("--n", type=int, required=True, help="spline order")
        if branch:
            p.add_argument(
                "--branch",
                default="paper",
                help="root branch: paper (default), outer, inner or index:<k>",
            )
        return p

    p = with_n(sub.add_parser("qpoly", help="print the Lorentz polynomial Q_n"), branch=False)
    p.add_argument("--oracle", action="store_true", help="cross-check against the Euclidean algorithm")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_qpoly)

    p = with_n(sub.add_parser("factor", help="spectral factor a_1..a_n"))
    p.add_argument("--all", action="store_true", help="list every real solution")
    p.set_defaults(func=cmd_factor)

    p = with_n(sub.add_parser("coeffs", help="refinement coefficients p_k"))
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_coeffs)

    p = with_n(sub.add_parser("cascade", help="sample phi_n on a dyadic grid"))
    p.add_argument("--levels", type=int, default=DEFAULT_LEVEL, help="grid step 2^-levels")
    p.add_argument("--iters", type=int, default=DEFAULT_ITERS)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_cascade)

    p = with_n(sub.add_parser("verify", help="run every identity check"))
    p.add_argument("--perturb", metavar="INDEX:DELTA", help="shift one mask coefficient (negative control)")
    p.set_defaults(func=cmd_verify)

    p = with_n(sub.add_parser("roundtrip", help="periodic DWT perfect-reconstruction check"))
    p.add_argument("--length", type=int, default=1024)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_roundtrip)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, BranchInvalid) as exc:
        _diag(f"usage error: {exc}")
        return EXIT_USAGE
    except FactorizationError as exc:
        _diag(f"numeric failure: {exc}")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
