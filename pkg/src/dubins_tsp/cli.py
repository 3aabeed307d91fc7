"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from . import io as fileio
from .bench import run_sweep, summarize, to_csv
from .bounding import DtspSettings, descend_with_flips, solve_dtsp
from .errors import (
    DubinsTSPError,
    Infeasible,
    InvalidInstance,
    InvalidSequence,
    MixingFailure,
    NumericalDegeneracy,
    SeparationTooSmall,
    TooLarge,
    TooManyFlips,
)
from .etsp import solve_etsp
from .instances import GenSpec, generate
from .plot import render_svg
from .tour import DescentSettings, TourConfig, evaluate, seed_angles

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2, 3

log = logging.getLogger("dubins_tsp")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _descent_settings(args) -> DescentSettings:
    return DescentSettings(alpha0=args.alpha0, epsilon=args.epsilon, rel_tol=args.rel_tol,
                           max_iters=args.max_iters, fixed_step=args.fixed_step)


def _add_descent_flags(p):
    g = p.add_argument_group("descent")
    g.add_argument("--rel-tol", type=float, default=1e-3,
                   help="stop when the gap certificate is below this fraction of the length")
    g.add_argument("--epsilon", type=float, default=None,
                   help="absolute gradient-norm tolerance (overrides --rel-tol)")
    g.add_argument("--alpha0", type=float, default=None, help="initial step (default 0.1/rho)")
    g.add_argument("--max-iters", type=int, default=10_000)
    g.add_argument("--fixed-step", action="store_true", help="no line search; always step alpha0")
    g.add_argument("--flip-cap", type=int, default=12)


def cmd_generate(args):
    spec = GenSpec(n=args.n, box_side=args.box, min_separation=args.sep, rho=args.rho,
                   seed=args.seed, burn_in=args.burn_in, thinning=args.thinning)
    inst = generate(spec)
    gen = {"n": spec.n, "box_side": spec.box_side, "min_separation": spec.min_separation,
           "rho": spec.rho, "seed": spec.seed, "burn_in": spec.burn_in,
           "thinning": spec.thinning}
    fileio.write_instance(args.output, inst, gen)
    print(f"wrote {inst.n} points (scale {inst.scale:.4g}) to {args.output}")


def cmd_solve(args):
    inst = fileio.read_instance(args.instance)
    settings = _descent_settings(args)
    summary = {}
    if args.seed_only or args.sequence_only:
        if args.sequence_only:
            seq = [i - 1 for i in args.sequence_only]
        else:
            seq = list(solve_etsp(inst.points).sequence)
        if sorted(seq) != list(range(inst.n)):
            raise InvalidSequence(f"--sequence-only must be a permutation of 1..{inst.n}")
        if args.seed_only:
            config = TourConfig(seq, seed_angles(inst, seq))
            ev = evaluate(inst, config)
            trace = None
            mode = "seed"
        else:
            res = descend_with_flips(inst, seq, settings, args.flip_cap)
            config, ev, trace = res.config, res.evaluation, res.trace
            summary = {"flips": [i + 1 for i in res.flips], "converged": res.converged}
            mode = "sequence"
        explored = None
    else:
        result = solve_dtsp(inst, DtspSettings(descent=settings, flip_cap=args.flip_cap))
        config, ev, trace = result.best_config, result.best_eval, result.best.trace
        explored = result.sequences_explored
        summary = {
            "flips": [i + 1 for i in result.best.flips],
            "converged": result.best.converged,
            "sequences_explored": explored,
            "explored": [
                {"sequence": [i + 1 for i in r.etsp.sequence], "etsp_length": r.etsp.length,
                 "dubins_length": r.length, "flips": [i + 1 for i in r.flips]}
                for r in result.per_sequence
            ],
        }
        mode = "bounding"
    meta = {"mode": mode, "rel_tol": settings.rel_tol, "epsilon": settings.epsilon,
            "alpha0": settings.step_for(inst.rho), "max_iters": settings.max_iters,
            "fixed_step": settings.fixed_step, "flip_cap": args.flip_cap}
    data = fileio.solution_to_dict(inst, config, ev, instance_path=args.instance,
                                   settings=meta, trace=trace, extra=summary)
    if args.output:
        fileio.write_solution(args.output, data)
    cert = "n/a (arc >= pi)" if ev.gap_bound is None else f"{ev.gap_bound:.6g}"
    print(f"length {ev.length:.10g}")
    if explored is not None:
        print(f"sequences explored {explored}")
    print(f"certificate {cert}")
    print("sequence " + ",".join(str(i + 1) for i in config.sequence))


def _load_solution(args):
    data = fileio.read_solution(args.solution)
    path = args.instance or (data.get("instance") or {}).get("path")
    if not path:
        raise InvalidInstance("solution does not name its instance; pass --instance")
    p = Path(path)
    if not p.exists():
        p = Path(args.solution).parent / path
    inst = fileio.read_instance(p)
    if fileio.instance_hash(inst) != data["instance"]["sha256"]:
        raise CliError(f"instance {p} does not match the solution's hash", EXIT_INVALID)
    return inst, data, fileio.config_from_solution(data)


def cmd_evaluate(args):
    inst, data, config = _load_solution(args)
    ev = evaluate(inst, config)
    stored = float(data["length"])
    rel = abs(ev.length - stored) / stored
    print(f"length {ev.length:.17g} (stored {stored:.17g}, relative difference {rel:.3g})")
    if rel > 1e-9:
        raise CliError("re-evaluated length differs from the stored length", EXIT_NUMERIC)


def cmd_plot(args):
    inst, data, config = _load_solution(args)
    svg = render_svg(inst, config, evaluate(inst, config))
    Path(args.output).write_text(svg)
    print(f"wrote {args.output}")


def cmd_bench(args):
    if args.scales:
        scales = args.scales
    else:
        count = int(math.floor((args.scale_max - args.scale_min) / args.scale_step + 1e-9)) + 1
        scales = [args.scale_min + k * args.scale_step for k in range(count)]
    base = GenSpec(n=args.n, box_side=args.box, min_separation=args.sep, rho=args.rho,
                   seed=args.seed, burn_in=args.burn_in, thinning=args.thinning)
    base.check()
    settings = DtspSettings(descent=_descent_settings(args), flip_cap=args.flip_cap)
    records = run_sweep(base, scales, args.instances, settings, jobs=args.jobs)
    rows = summarize(records, scales)
    text = to_csv(rows)
    failures = sum(r["failures"] for r in rows)
    if failures:
        print(f"{failures} instance(s) failed and were excluded", file=sys.stderr)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def build_parser():
    p = _Parser(prog="dubins-tsp", description="Dubins traveling salesman solver")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="sample a random long-path instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--box", type=float, required=True)
    g.add_argument("--sep", type=float, required=True)
    g.add_argument("--rho", type=float, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--burn-in", type=int, default=10_000)
    g.add_argument("--thinning", type=int, default=100)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("instance")
    s.add_argument("-o", "--output")
    s.add_argument("--sequence-only", type=_ints, metavar="I,J,...",
                      help="descend this 1-based visiting order without the bounding loop")
    s.add_argument("--seed-only", action="store_true",
                   help="report the seed configuration without descent")
    _add_descent_flags(s)
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("evaluate", help="re-evaluate a solution file")
    e.add_argument("solution")
    e.add_argument("--instance")
    e.set_defaults(func=cmd_evaluate)

    pl = sub.add_parser("plot", help="render a solution as SVG")
    pl.add_argument("solution")
    pl.add_argument("-o", "--output", required=True)
    pl.add_argument("--instance")
    pl.set_defaults(func=cmd_plot)

    b = sub.add_parser("bench", help="scale sweep statistics as CSV")
    b.add_argument("--scales", type=_floats, help="explicit comma-separated scales")
    b.add_argument("--scale-min", type=float, default=4.0)
    b.add_argument("--scale-max", type=float, default=40.0)
    b.add_argument("--scale-step", type=float, default=4.0)
    b.add_argument("--instances", type=int, default=50)
    b.add_argument("--n", type=int, default=9)
    b.add_argument("--box", type=float, default=12.0)
    b.add_argument("--sep", type=float, default=4.0)
    b.add_argument("--rho", type=float, default=1.0)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--burn-in", type=int, default=10_000)
    b.add_argument("--thinning", type=int, default=100)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("-o", "--output")
    _add_descent_flags(b)
    b.set_defaults(func=cmd_bench)
    return p


_INVALID = (InvalidInstance, InvalidSequence, SeparationTooSmall, Infeasible, TooLarge,
            TooManyFlips, ValueError, KeyError, OSError)
_NUMERIC = (NumericalDegeneracy, MixingFailure, ArithmeticError)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except _NUMERIC as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except _INVALID as exc:
        print(f"invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except DubinsTSPError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
