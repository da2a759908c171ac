"""Command-line interface.

Exit codes: 0 success, 1 usage or parse error, 2 runtime abort (including
I/O failures), 3 oracle validation failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from contextlib import contextmanager

import numpy as np

from . import analysis
from .dsl import ParseError, load
from .fockspace import DEFAULT_CUTOFF, AtomLevel, CavityLabel, Params
from .observables import NoonTarget, infer_noon_n, inversion_trace, noon_fidelity, photon_distribution
from .oracle import validate
from .protocol import ProgramError, ProtocolAbort, run

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_VALIDATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@contextmanager
def _output(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _fmt(x: float) -> str:
    return repr(float(x))


def _emit(report: dict, mode: str, out=None):
    out = out or sys.stdout
    if mode == "json":
        json.dump(report, out, indent=2, sort_keys=False)
        out.write("\n")
        return
    for key, val in report.items():
        if isinstance(val, list):
            out.write(f"{key}:\n")
            for item in val:
                out.write(f"  {item}\n")
        else:
            out.write(f"{key}={val}\n")


def cmd_inversion(args) -> int:
    if args.steps < 2:
        raise UsageError("--steps must be >= 2")
    if not args.tau_max > 0:
        raise UsageError("--tau-max must be positive")
    p = Params(chi=args.chi, delta=args.delta, cutoff=args.cutoff)
    atom = AtomLevel.EXCITED if args.atom == "e" else AtomLevel.GROUND
    series = inversion_trace(atom, args.n0, CavityLabel.A, p, args.tau_max, args.steps)
    with _output(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["tau", "w"])
        for t, v in zip(series.taus, series.w):
            w.writerow([_fmt(t), _fmt(v)])
    return EXIT_OK


def cmd_noon(args) -> int:
    if args.tau < 0:
        raise UsageError("--tau must be >= 0")
    p = Params(chi=args.chi, delta=args.delta, cutoff=args.cutoff)
    r = analysis.noon_report(args.tau, p)
    _emit(
        {
            "tau": r.tau,
            "chi": p.chi,
            "delta": p.delta,
            "fidelity_ground": r.fidelity_ground,
            "p_ground": r.p_ground,
            "fidelity_excited": r.fidelity_excited,
            "p_excited": r.p_excited,
        },
        args.report,
    )
    return EXIT_OK


def cmd_sweep_chi(args) -> int:
    if args.steps < 2:
        raise UsageError("--steps must be >= 2")
    deltas = args.delta if args.delta else [0.0]
    rows = analysis.sweep_chi(args.tau, args.chi_max, args.steps, deltas, args.cutoff)
    with _output(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["chi", "delta", "fidelity", "p_ground"])
        for r in rows:
            w.writerow([_fmt(r.chi), _fmt(r.delta), _fmt(r.fidelity), _fmt(r.p_ground)])
    return EXIT_OK


def cmd_find_tau(args) -> int:
    if not 0 < args.lo < args.hi:
        raise UsageError("need 0 < --lo < --hi")
    if args.tol <= 0:
        raise UsageError("--tol must be positive")
    tau, fid = analysis.find_tau(args.lo, args.hi, args.tol, args.grid, Params(cutoff=args.cutoff))
    _emit({"tau_star": tau, "fidelity": fid}, args.report)
    return EXIT_OK


def _nonzero(dist: np.ndarray) -> dict:
    return {int(n): float(p) for n, p in enumerate(dist) if p > 1e-12}


def cmd_run(args) -> int:
    try:
        prog = load(args.file)
    except ParseError as exc:
        print(f"{args.file}:{exc.line}:{exc.column}: {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    result = run(prog, seed=args.seed)
    s = result.final_state
    report = {
        "events": [
            f"[{e.index}] {e.description}" + (f" p={e.probability!r}" if e.probability is not None else "")
            for e in result.events
        ],
        "joint_postselect_probability": result.joint_postselect_probability,
        "distribution_A": _nonzero(photon_distribution(s, CavityLabel.A)),
        "distribution_B": _nonzero(photon_distribution(s, CavityLabel.B)),
    }
    n = infer_noon_n(s)
    if n is not None:
        report["noon_n"] = n
        report["fidelity_plus"] = noon_fidelity(s, NoonTarget(n, 1))
        report["fidelity_minus"] = noon_fidelity(s, NoonTarget(n, -1))
    _emit(report, args.report)
    return EXIT_OK


def cmd_validate(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    rep = validate(args.cutoff, args.trials, args.seed, args.support)
    _emit(
        {
            "cutoff": args.cutoff,
            "trials": rep.trials,
            "compared": rep.compared,
            "precondition_rejections": rep.rejected,
            "max_deviation": rep.max_deviation if rep.compared else "n/a",
            "tolerance": rep.tolerance,
            "result": "pass" if rep.passed else "FAIL",
        },
        args.report,
    )
    return EXIT_OK if rep.passed else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="noonqed", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, report=True):
        p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
        if report:
            p.add_argument("--report", choices=["text", "json"], default="text")

    p = sub.add_parser("inversion", help="atomic inversion W(tau) as CSV")
    p.add_argument("--n0", type=int, default=2)
    p.add_argument("--atom", choices=["e", "g"], default="e")
    p.add_argument("--chi", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--tau-max", type=float, default=4.0)
    p.add_argument("--steps", type=int, default=801)
    p.add_argument("--out", default="-")
    common(p, report=False)
    p.set_defaults(func=cmd_inversion)

    p = sub.add_parser("noon", help="NOON protocol fidelity and detection probabilities")
    p.add_argument("--tau", type=float, default=3.16)
    p.add_argument("--chi", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.0)
    common(p)
    p.set_defaults(func=cmd_noon)

    p = sub.add_parser("sweep-chi", help="fidelity vs Stark coefficient as CSV")
    p.add_argument("--tau", type=float, default=3.16)
    p.add_argument("--chi-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--delta", type=float, action="append", help="repeatable; default 0")
    p.add_argument("--out", default="-")
    common(p, report=False)
    p.set_defaults(func=cmd_sweep_chi)

    p = sub.add_parser("find-tau", help="interaction time maximizing NOON fidelity")
    p.add_argument("--lo", type=float, default=2.5)
    p.add_argument("--hi", type=float, default=3.5)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--grid", type=int, default=200)
    common(p)
    p.set_defaults(func=cmd_find_tau)

    p = sub.add_parser("run", help="execute a .qproto program")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=None, help="Born-sample every measurement")
    p.add_argument("--report", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("validate", help="closed-form propagator vs dense exponential")
    p.add_argument("--cutoff", type=int, default=24)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--support", type=int, default=None, help="max occupation of random states (default cutoff-4)")
    p.add_argument("--report", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"noonqed {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ProtocolAbort, ProgramError) as exc:
        print(f"noonqed {args.command}: aborted at {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"noonqed {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except ValueError as exc:
        print(f"noonqed {args.command}: invalid argument: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
