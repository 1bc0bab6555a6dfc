"""Command-line front end.

Exit status: 0 on success, 2 when the instance verifiably has no pure
equilibrium (or no ε-solution was found), 1 on usage, input or domain errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import io
from .approx import search_eps_ne_report
from .best_response import BRKind, best_response_share, rho_bound
from .contest import ContestInstance, Regime, classify_regime
from .errors import TullockError
from .exact import Status, solve_mixed_regime, solve_small_elasticity
from .hardness import (
    contest_pne_oracle,
    reduce_sslt_to_contest,
    sslt_bruteforce,
    subset_sum_via_sslt_oracle,
)
from .verify import check_eps_solution, check_pne

EXIT_OK, EXIT_ERROR, EXIT_NONE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for "no equilibrium"
    def error(self, message):
        raise UsageError(message)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_classify(args) -> int:
    inst = io.parse_instance(_read(args.instance))
    rc = classify_regime(inst)
    doc = {"regime": rc.tag.value, "I1": list(rc.I1), "I2": list(rc.I2), "medium": list(rc.medium)}
    _emit(io.dumps(doc), args.out)
    return EXIT_OK


def _cmd_solve(args) -> int:
    inst = io.parse_instance(_read(args.instance))
    tag = classify_regime(inst).tag
    params = {"tol": args.tol}
    t0 = time.perf_counter()
    if tag is Regime.HAS_MEDIUM:
        raise UsageError("instance has an elasticity in (1, 2]; exact solving is not supported, use 'approx'")
    if tag is Regime.ALL_SMALL:
        certs = [solve_small_elasticity(inst, args.tol)]
        status, reason = Status.FOUND, ""
    else:
        outcome = solve_mixed_regime(inst, args.tol)
        certs, status, reason = list(outcome.certificates), outcome.status, outcome.reason
    elapsed = time.perf_counter() - t0
    reports = [check_pne(inst, c, max(args.tol, 1e-9)) for c in certs]
    kind = "exact" if status is Status.FOUND else "no-pne"
    doc = io.result_document(kind, certificates=certs, reports=reports, parameters=params, reason=reason,
                             timing={"seconds": elapsed} if args.timing else None)
    _emit(io.dumps(doc), args.out)
    return EXIT_OK if kind == "exact" else EXIT_NONE


def _cmd_approx(args) -> int:
    inst = io.parse_instance(_read(args.instance))
    t0 = time.perf_counter()
    rho = None
    if args.delta is None and classify_regime(inst).I2:
        rho = rho_bound(inst, samples=args.samples)
    rep = search_eps_ne_report(inst, args.eps, delta=args.delta, rho=rho, tol=args.tol)
    elapsed = time.perf_counter() - t0
    reports = [check_eps_solution(inst, s, max(args.tol, 1e-9)) for s in rep.solutions]
    params = {
        "tol": args.tol, "eps": args.eps, "delta": rep.delta, "rho": rep.rho,
        "nodesTotal": rep.nodes_total, "nodesVerified": rep.nodes_verified,
    }
    kind = "approx" if rep.solutions else "no-pne"
    doc = io.result_document(kind, solutions=rep.solutions, reports=reports, parameters=params,
                             timing={"seconds": elapsed} if args.timing else None)
    _emit(io.dumps(doc), args.out)
    return EXIT_OK if rep.solutions else EXIT_NONE


def _cmd_verify(args) -> int:
    inst = io.parse_instance(_read(args.instance))
    kind, certs, sols = io.parse_result(_read(args.result))
    for obj in list(certs) + list(sols):
        if any(not 0 <= i < inst.n for i in obj.active):
            raise UsageError(f"result names a player outside 0..{inst.n - 1}")
    reports = [check_pne(inst, c, args.tol) for c in certs]
    reports += [check_eps_solution(inst, s, args.tol) for s in sols]
    passed = all(r.passed for r in reports)
    doc = {"outcome": kind, "passed": passed, "verification": [io.report_to_dict(r) for r in reports]}
    _emit(io.dumps(doc), args.out)
    if not passed:
        return EXIT_ERROR
    return EXIT_NONE if kind == "no-pne" else EXIT_OK


def _cmd_reduce(args) -> int:
    sslt = io.parse_sslt(_read(args.sslt))
    red = reduce_sslt_to_contest(sslt, args.reward, args.eps_param)
    meta = {
        "source": "sslt-reduction",
        "elements": list(sslt.elements),
        "target": sslt.target,
        "elementToPlayer": list(red.element_to_player),
        "sentinelIndex": red.sentinel_index,
        "epsParam": red.eps_param,
        "sentinelRExceedsTwo": red.sentinel_r_exceeds_two,
    }
    _emit(io.serialize_instance(red.contest, meta), args.out)
    return EXIT_OK


def _cmd_subset_demo(args) -> int:
    if args.file:
        doc = json.loads(_read(args.file))
        elements, target = doc.get("elements"), doc.get("target")
    else:
        elements, target = args.elements, args.target
    if elements is None or target is None:
        raise UsageError("subset-demo needs elements and a target")
    base = contest_pne_oracle if args.oracle == "contest" else sslt_bruteforce
    calls = []

    def oracle(sslt):
        calls.append(sslt)
        return base(sslt)

    answer = subset_sum_via_sslt_oracle([float(z) for z in elements], float(target), oracle)
    doc = {"elements": [float(z) for z in elements], "target": float(target), "oracle": args.oracle,
           "answer": answer, "oracleCalls": len(calls)}
    _emit(io.dumps(doc), args.out)
    return EXIT_OK


def curve_rows(instance: ContestInstance, lo: float, hi: float, samples: int):
    """``(player, A, share, utility)`` rows sorted by A, on the participating branch."""
    R = instance.R
    rows = []
    for A in np.linspace(lo, hi, samples):
        A = float(A)
        for i, p in enumerate(instance.players):
            br = best_response_share(p, R, A)
            s = 0.0 if br.kind is BRKind.ZERO else br.share
            u = s * R - (s * A / p.a) ** (1.0 / p.r) if s > 0 else 0.0
            rows.append((i, A, s, u))
    return rows


def _cmd_curves(args) -> int:
    inst = io.parse_instance(_read(args.instance))
    lo, hi = args.range
    if not (0 < lo < hi):
        raise UsageError("--range needs 0 < LO < HI")
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    d = args.delimiter
    lines = [d.join(("player", "A", "share", "utility"))]
    lines += [d.join((str(i), repr(A), repr(s), repr(u))) for i, A, s, u in curve_rows(inst, lo, hi, args.samples)]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tullock", description="Pure equilibria of Tullock contests.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp, instance=True):
        if instance:
            sp.add_argument("instance", help="instance document (JSON), '-' for stdin")
        sp.add_argument("--out", help="write output here instead of stdout")
        return sp

    common(sub.add_parser("classify", help="report the elasticity regime"))

    sp = common(sub.add_parser("solve", help="exact equilibria (no medium elasticity)"))
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--timing", action="store_true", help="include wall-clock time in the output")

    sp = common(sub.add_parser("approx", help="ε-approximate equilibria by grid search"))
    sp.add_argument("--eps", type=float, default=1e-3)
    sp.add_argument("--delta", type=float, default=None, help="override the grid spacing")
    sp.add_argument("--samples", type=int, default=1000, help="samples per player for the slope bound")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--timing", action="store_true", help="include wall-clock time in the output")

    sp = common(sub.add_parser("verify", help="re-check a result document"))
    sp.add_argument("result", help="result document produced by solve or approx")
    sp.add_argument("--tol", type=float, default=1e-9)

    sp = common(sub.add_parser("reduce", help="contest instance from an SSLT document"), instance=False)
    sp.add_argument("sslt", help='SSLT document {"elements": [...], "target": ...}')
    sp.add_argument("--reward", type=float, default=2.0, help="prize R of the reduced contest")
    sp.add_argument("--eps-param", type=float, default=None, help="sentinel perturbation")

    sp = common(sub.add_parser("subset-demo", help="subset sum through the SSLT recursion"), instance=False)
    sp.add_argument("file", nargs="?", help='optional {"elements": [...], "target": ...} document')
    sp.add_argument("--elements", type=float, nargs="+")
    sp.add_argument("--target", type=float)
    sp.add_argument("--oracle", choices=("enumerate", "contest"), default="enumerate")

    sp = common(sub.add_parser("curves", help="best-response share and utility against A"))
    sp.add_argument("--range", type=float, nargs=2, metavar=("LO", "HI"), required=True)
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--delimiter", default=",")
    return p


_COMMANDS = {
    "classify": _cmd_classify,
    "solve": _cmd_solve,
    "approx": _cmd_approx,
    "verify": _cmd_verify,
    "reduce": _cmd_reduce,
    "subset-demo": _cmd_subset_demo,
    "curves": _cmd_curves,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
    except (TullockError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
