"""Command-line entry point: ``shearode <command> [options]``."""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .errors import ShearOdeError
from .poly import DEFAULT_TRUNCATION
from .report import (
    classify_payload,
    dual_payload,
    dumps,
    error_report,
    exit_code_for,
    locus_payload,
    make_report,
    phi_payload,
    render_text,
    sl2_payload,
    symmetries_payload,
    verify_payload,
)


def _common(p: argparse.ArgumentParser):
    p.add_argument("--truncation", type=int, default=DEFAULT_TRUNCATION, help="series truncation order N")
    p.add_argument("--tolerance", type=float, default=1e-9, help="numeric tolerance")
    p.add_argument("--seed", type=int, default=42, help="seed for sampled checks")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out", help="write the report to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shearode", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="isotropy class and normal form of (f0, f1)")
    p.add_argument("--f0", required=True)
    p.add_argument("--f1", required=True)
    _common(p)

    p = sub.add_parser("symmetries", help="point symmetries of the shear-invariant ODE")
    p.add_argument("--f0", required=True)
    p.add_argument("--f1", required=True)
    p.add_argument("--ansatz", choices=("polynomial", "isotropic"), default="polynomial")
    p.add_argument("--degx", type=int, default=3)
    p.add_argument("--degy", type=int, default=3)
    _common(p)

    p = sub.add_parser("phi-solve", help="series solution of the phi equation")
    p.add_argument("--branch", choices=("ONE", "TWO"), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--phi-k", required=True)
    p.add_argument("--phi-k1", required=True)
    p.add_argument("--phi-free", help="value of the resonant coefficient (branch ONE)")
    p.add_argument("--tune-c0", action="store_true", help="choose the resonant coefficient so that f0 vanishes")
    _common(p)

    p = sub.add_parser("sl2-check", help="SL(2) bracket, weight and chart identities")
    _common(p)

    p = sub.add_parser("dual-check", help="numeric checks of the dual ODE")
    p.add_argument("--samples", type=int, default=20)
    _common(p)

    p = sub.add_parser("locus-check", help="fixed points of a quartic isotropy field")
    p.add_argument("--alpha", default="1")
    p.add_argument("--beta", default="-1")
    p.add_argument("--delta", default="1")
    p.add_argument("--orbit", nargs=4, metavar=("A", "B", "C", "D"), help="also check the Gamma orbit map")
    _common(p)

    p = sub.add_parser("verify-paper", help="run every acceptance criterion")
    _common(p)
    return parser


def _dispatch(args):
    N = args.truncation
    cmd = args.command
    if cmd == "classify":
        return classify_payload(args.f0, args.f1, N)
    if cmd == "symmetries":
        return symmetries_payload(args.f0, args.f1, N, args.ansatz, args.degx, args.degy)
    if cmd == "phi-solve":
        return phi_payload(args.branch, args.k, args.a, args.phi_k, args.phi_k1, args.phi_free, N, args.tune_c0)
    if cmd == "sl2-check":
        return sl2_payload()
    if cmd == "dual-check":
        return dual_payload(args.seed, args.tolerance, args.samples)
    if cmd == "locus-check":
        return locus_payload(args.alpha, args.beta, args.delta, args.orbit or [])
    if cmd == "verify-paper":
        return verify_payload(args.seed, N, args.tolerance)
    raise AssertionError(cmd)


def _inputs(args) -> dict:
    skip = {"command", "format", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    inputs = _inputs(args)
    code = 0
    try:
        results, order = _dispatch(args)
        report = make_report(args.command, inputs, results, order)
        if args.command == "verify-paper" and results["summary"]["passed"] != results["summary"]["total"]:
            code = 4
        if args.command == "sl2-check" and not results["all_passed"]:
            code = 4
    except ShearOdeError as exc:
        report = error_report(args.command, inputs, exc)
        code = exit_code_for(exc)
    text = render_text(report) if args.format == "text" else dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
