"""Command-line front door.

Exit codes: 0 YES/success, 1 NO/failed check, 2 promise violation,
3 usage or parse error, 4 resource cap.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import sys
import time
from fractions import Fraction

from ._numeric import format_number, parse_rational
from .common import BudgetExhausted, CapExceeded, Decision, ParseError, ReductionError
from .cost import all_exponents
from .generate import PlantSpec, generate_certified_no, generate_planted_yes
from .graph import GapSpec, normalize_weights, read_graph, write_graph
from .lattice import as_float, decide_cvp, read_cvp, write_cvp
from .mitm import split_columns, solve_binary_cvp_mitm
from .oracles import brute_binary_cvp, brute_boxed_cvp, certify_lemmas
from .pipeline import bench, run_pipeline
from .reduction import DEFAULT_SLACK, ReductionParams, choose_iota, limit_gamma, reduce_graph

EXIT = {Decision.YES: 0, Decision.NO: 1, Decision.PROMISE_VIOLATION: 2}
EXIT_USAGE, EXIT_CAP = 3, 4

log = logging.getLogger("maxcut_cvp")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            yield fh


def _emit(lines, path) -> None:
    with _output(path) as fh:
        for line in lines:
            fh.write(line + "\n")


def _load_graph(path):
    with open(path, encoding="ascii") as fh:
        return read_graph(fh)


def _load_cvp(path):
    with open(path, encoding="ascii") as fh:
        return read_cvp(fh)


def cmd_gen(args) -> int:
    plant = PlantSpec(args.n, args.m, args.eps, args.c, args.p, args.seed, args.wmax)
    if args.kind == "yes":
        g = generate_planted_yes(plant)
    else:
        g = generate_certified_no(plant, args.attempts)
    with _output(args.out) as fh:
        write_graph(fh, g, plant.gap)
    print(f"generated {args.kind} instance n={g.n} m={g.m}", file=sys.stderr)
    return 0


def cmd_reduce(args) -> int:
    g, spec = _load_graph(args.inp)
    g = normalize_weights(g)
    iota = args.iota if args.iota is not None else choose_iota(g, spec, args.slack)
    inst = reduce_graph(g, spec, ReductionParams(iota, args.mode))
    if args.float:
        inst = as_float(inst)
    stamp = limit_gamma(spec) if args.stamp == "limit" else None
    with _output(args.out) as fh:
        write_cvp(fh, inst, gamma=stamp)
    print(f"reduced n={g.n} m={g.m} -> d={inst.d} rank={inst.n} iota={format_number(iota)} "
          f"gamma={float(inst.gamma):.6g}", file=sys.stderr)
    return 0


def cmd_solve(args) -> int:
    inst = _load_cvp(args.inp)
    if args.float:
        inst = as_float(inst)
    lines = []
    if args.algo == "mitm":
        res = solve_binary_cvp_mitm(inst, split_columns(inst.n, args.a), args.backend,
                                    args.seed, args.audit)
        decision = res.decision
        lines.append(f"decision {decision}")
        if res.witness is not None:
            lines.append("witness " + " ".join(map(str, res.witness)))
            lines.append(f"dist_pow {format_number(res.witness_dist_pow)}")
        for key, value in res.stats.items():
            lines.append(f"stat {key} {format_number(value) if isinstance(value, float) else value}")
    else:
        if args.oracle == "binary":
            dist, argmin = brute_binary_cvp(inst, threads=args.threads)
        else:
            dist, argmin = brute_boxed_cvp(inst, args.lo, args.hi)
        decision = decide_cvp(inst, dist)
        lines += [f"decision {decision}", f"dist_pow {format_number(dist)}",
                  "argmin " + " ".join(map(str, argmin))]
    _emit(lines, args.out)
    print(f"solve: {decision}", file=sys.stderr)
    return EXIT[decision]


def _spec_with_overrides(spec: GapSpec, args) -> GapSpec:
    return GapSpec(args.eps if args.eps is not None else spec.epsilon,
                   args.c if args.c is not None else spec.c,
                   args.p if args.p is not None else spec.p)


def cmd_certify(args) -> int:
    g, spec = _load_graph(args.graph)
    spec = _spec_with_overrides(spec, args)
    g = normalize_weights(g)
    iota = args.iota if args.iota is not None else choose_iota(g, spec, args.slack)
    report = certify_lemmas(g, spec, ReductionParams(iota), box=(args.lo, args.hi))
    _emit([f"iota {format_number(iota)}"] + report.lines(), args.out)
    print("certify: " + ("all pass" if report.ok else "FAILURES"), file=sys.stderr)
    return 0 if report.ok else 1


def cmd_pipeline(args) -> int:
    g, spec = _load_graph(args.inp)
    report = run_pipeline(g, spec, iota=args.iota, slack=args.slack, mode=args.mode,
                          solver=args.algo, backend=args.backend, a=args.a, seed=args.seed,
                          audit=args.audit, threads=args.threads, float_mode=args.float)
    _emit(report.lines(), args.out)
    print(f"pipeline: {report.decision}", file=sys.stderr)
    return EXIT[report.decision]


def cmd_bench(args) -> int:
    spec = GapSpec(args.eps, args.c, args.p)
    ns = range(args.n_min, args.n_max + 1, args.n_step)
    seeds = range(args.seed, args.seed + args.repeats)
    lines = []
    records = bench(ns, seeds, spec, backend=args.backend, a=args.a, slack=args.slack,
                    degree=args.degree)
    while True:
        t0 = time.perf_counter()
        rec = next(records, None)
        if rec is None:
            break
        lines.append(" ".join(f"{k}={v}" for k, v in rec.items()))
        # wall-clock stays on stderr so the output file is reproducible
        print(f"bench n={rec['n']} seed={rec['seed']} {time.perf_counter() - t0:.3f}s",
              file=sys.stderr)
    _emit(lines, args.out)
    return 0


def cmd_cost(args) -> int:
    p = int(args.p)
    lines = [f"exp {name} {format_number(value)}" for name, value in all_exponents(args.gamma, p).items()]
    lines += [f"exp {name}_float {float(value):.15g}" for name, value in all_exponents(args.gamma, p).items()]
    _emit(lines, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    arith = common.add_mutually_exclusive_group()
    arith.add_argument("--exact", dest="float", action="store_false")
    arith.add_argument("--float", dest="float", action="store_true")
    common.set_defaults(float=False)
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="maxcut-cvp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", parents=[common], help="generate a planted YES or certified NO graph")
    p.add_argument("--kind", choices=("yes", "no"), default="yes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--c", type=_rational, default=Fraction(1, 2))
    p.add_argument("--p", type=_rational, default=Fraction(2))
    p.add_argument("--wmax", type=_rational, default=Fraction(1))
    p.add_argument("--attempts", type=int, default=1000)
    p.set_defaults(func=cmd_gen)

    def reduction_flags(q):
        q.add_argument("--iota", type=_rational, default=None)
        q.add_argument("--slack", type=float, default=DEFAULT_SLACK)

    p = sub.add_parser("reduce", parents=[common], help="reduce a graph file to a CVP file")
    p.add_argument("--in", dest="inp", required=True)
    reduction_flags(p)
    p.add_argument("--mode", choices=("auto", "unweighted", "weighted"), default="auto")
    p.add_argument("--stamp", choices=("instance", "limit"), default="instance",
                   help="gamma written to the header: the instance value or its iota limit")
    p.set_defaults(func=cmd_reduce)

    def solver_flags(q):
        q.add_argument("--algo", choices=("oracle", "mitm"), default="oracle")
        q.add_argument("--a", type=_rational, default=Fraction(1, 2))
        q.add_argument("--backend", choices=("exact", "lsh"), default="exact")
        q.add_argument("--audit", action="store_true")

    p = sub.add_parser("solve", parents=[common], help="solve a CVP file")
    p.add_argument("--in", dest="inp", required=True)
    solver_flags(p)
    p.add_argument("--oracle", choices=("binary", "boxed"), default="binary")
    p.add_argument("--lo", type=int, default=-2)
    p.add_argument("--hi", type=int, default=3)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("certify", parents=[common], help="check every reduction lemma on a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--eps", type=_rational, default=None)
    p.add_argument("--c", type=_rational, default=None)
    p.add_argument("--p", type=_rational, default=None)
    p.add_argument("--lo", type=int, default=-2)
    p.add_argument("--hi", type=int, default=3)
    reduction_flags(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("pipeline", parents=[common], help="reduce, solve and map back")
    p.add_argument("--in", dest="inp", required=True)
    reduction_flags(p)
    p.add_argument("--mode", choices=("auto", "unweighted", "weighted"), default="auto")
    solver_flags(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("bench", parents=[common], help="audit-mode query counts over n")
    p.add_argument("--n-min", type=int, default=4)
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--n-step", type=int, default=2)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--degree", type=int, default=2, help="edges per vertex")
    p.add_argument("--eps", type=_rational, default=Fraction(1, 4))
    p.add_argument("--c", type=_rational, default=Fraction(1, 2))
    p.add_argument("--p", type=_rational, default=Fraction(2))
    p.add_argument("--slack", type=float, default=DEFAULT_SLACK)
    p.add_argument("--a", type=_rational, default=Fraction(1, 2))
    p.add_argument("--backend", choices=("exact", "lsh"), default="exact")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("cost", parents=[common], help="print the runtime exponents for gamma")
    p.add_argument("--gamma", type=_rational, required=True)
    p.add_argument("--p", type=int, choices=(1, 2), default=2)
    p.set_defaults(func=cmd_cost)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (CapExceeded, BudgetExhausted, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ParseError, ReductionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
