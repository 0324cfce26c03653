"""Command-line entry point.

Exit codes: 0 all checks passed, 1 a verification failed (the report is still
written), 2 bad input or usage.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .cycles import DEFAULT_MAX_CYCLES
from .errors import BoundViolation, DiamGraphError
from .extremal import SearchConfig, gen_random, gen_spindle, gen_tetrahedron, search_max_diameters
from .geometry import Tolerance
from .graph import restored_counts, verify_bound
from .io import dumps, dumps_pointset, dumps_reports, drawing_to_dict, parse_pointset_document, trace_lines
from .pipeline import GEOMETRIC_CHECKS, analyze, run_checks
from .regions import lemma3_suite
from .svg import DEFAULT_VIEW, render_svg

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _tolerance(args) -> Tolerance:
    try:
        return Tolerance.from_env(eps_unit=args.eps_unit, eps_diam=args.eps_diam,
                                  eps_geo=args.eps_geo)
    except ValueError as exc:
        raise UsageError(f"bad tolerance: {exc}") from None


def _read_input(path: Optional[str]) -> bytes:
    if path in (None, "-"):
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _write(args, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(args, tol):
    ps, _ = parse_pointset_document(_read_input(args.input), tol)
    return ps


def cmd_gen(args, tol) -> int:
    if args.kind == "tetrahedron":
        ps = gen_tetrahedron()
    elif args.kind == "spindle":
        ps = gen_spindle(args.n if args.n is not None else 10)
    else:
        ps = gen_random(args.n if args.n is not None else 25, args.dim, args.model, args.seed, tol)
    meta = {"generator": args.kind}
    if args.kind == "random":
        meta.update(seed=args.seed, model=args.model)
    _write(args, dumps_pointset(ps, meta))
    return EXIT_OK


def cmd_graph(args, tol) -> int:
    ps = _load(args, tol)
    a = analyze(ps, tol, draw=False)
    report = verify_bound(a.graph)
    n, m = restored_counts(a.core, a.record)
    extra = {
        "graph": {"n": a.graph.n, "edges": [list(e) for e in a.graph.edges],
                  "input_diameter": a.graph.scale},
        "core": {"n": a.core.n, "edges": a.core.m, "removed": len(a.record.removals),
                 "restored": {"n": n, "edges": m}},
    }
    _write(args, dumps_reports([report], **extra))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_cover(args, tol) -> int:
    ps = _load(args, tol)
    a = analyze(ps, tol)
    if a.drawing is None:
        raise UsageError("drawings are only defined for points in R^3")
    _write(args, dumps(drawing_to_dict(a.drawing)) + "\n")
    return EXIT_OK


def cmd_verify(args, tol) -> int:
    flags = {"bound": args.bound, "lemma1": args.lemma1, "lemma2": args.lemma2,
             "lemma3": args.lemma3, "crossings": args.crossings, "euler": args.euler,
             "odd_cycles": args.odd_cycles}
    wanted = {k for k, on in flags.items() if on}
    if args.all or not wanted:
        wanted = set(flags)
    reports = []
    geometric = [c for c in GEOMETRIC_CHECKS if c in wanted]
    if geometric:
        ps = _load(args, tol)
        if ps.dimension != 3:
            raise UsageError("geometric checks need points in R^3")
        reports.extend(run_checks(analyze(ps, tol), geometric, max_cycles=args.max_cycles))
    if "lemma3" in wanted:
        reports.append(lemma3_suite(args.dim, args.trials, args.seed, tol))
    _write(args, dumps_reports(reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_search(args, tol) -> int:
    init = None
    if args.init:
        init, _ = parse_pointset_document(_read_input(args.init), tol)
    cfg = SearchConfig(
        n=args.n, iterations=args.iterations, step_scale=args.step, t_start=args.t_start,
        t_decay=args.t_decay, delta=args.delta, seed=args.seed, restarts=args.restarts,
        init=init, trace_every=args.trace_every, workers=args.workers,
    )
    try:
        res = search_max_diameters(cfg, tol)
    except BoundViolation as exc:
        sys.stderr.write(f"diamgraph: {exc}\n")
        return EXIT_FAIL
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(trace_lines(res.trace))
    meta = {"generator": "search", "count": res.count, "bound": 2 * cfg.n - 2,
            "success_rate": res.success_rate, "restarts": res.restarts, "seed": cfg.seed,
            "iterations": cfg.iterations}
    _write(args, dumps_pointset(res.best, meta))
    return EXIT_OK


def _view(text: str):
    try:
        parts = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("view must be three comma separated numbers") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("view must have three components")
    return tuple(parts)


def cmd_render(args, tol) -> int:
    ps = _load(args, tol)
    a = analyze(ps, tol)
    if a.drawing is None:
        raise UsageError("drawings are only defined for points in R^3")
    _write(args, render_svg(a.drawing, args.view, args.size))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps-unit", type=float, default=None, help="unit-norm slack")
    common.add_argument("--eps-diam", type=float, default=None,
                        help="relative slack for 'distance equals the diameter'")
    common.add_argument("--eps-geo", type=float, default=None, help="angular slack")
    common.add_argument("-o", "--output", default=None, help="write to a file instead of stdout")

    parser = argparse.ArgumentParser(
        prog="diamgraph",
        description="Diameter graphs of point sets and their antipodal double-cover drawings.",
        epilog="Tolerance precedence: command-line flag > DIAMGRAPH_EPS > built-in default.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a point set")
    p.add_argument("kind", choices=["tetrahedron", "spindle", "random"])
    p.add_argument("-n", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model", choices=["ball", "sphere"], default="ball")
    p.add_argument("--dim", type=int, default=3)
    p.set_defaults(func=cmd_gen)

    for name, func, text in (("graph", cmd_graph, "diameter graph and the 2n-2 bound"),
                             ("cover", cmd_cover, "double-cover drawing as JSON")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("input", nargs="?", default="-")
        p.set_defaults(func=func)

    p = sub.add_parser("verify", parents=[common], help="run verification checks")
    p.add_argument("input", nargs="?", default="-")
    for flag in ("bound", "lemma1", "lemma2", "lemma3", "crossings", "euler", "odd-cycles", "all"):
        p.add_argument(f"--{flag}", action="store_true")
    p.add_argument("--trials", type=int, default=1000, help="random instances per dimension")
    p.add_argument("--dim", type=int, nargs="+", default=[2, 3, 4, 5, 8])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-cycles", type=int, default=DEFAULT_MAX_CYCLES)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", parents=[common], help="annealing search for many diameters")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--iterations", type=int, default=20_000)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--t-start", type=float, default=0.5)
    p.add_argument("--t-decay", type=float, default=None)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--trace", default=None, help="write line-delimited JSON trace here")
    p.add_argument("--trace-every", type=int, default=1000)
    p.add_argument("--init", default=None, help="starting point set (JSON)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("render", parents=[common], help="SVG picture of the drawing")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--view", type=_view, default=DEFAULT_VIEW)
    p.add_argument("--size", type=int, default=600)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, _tolerance(args))
    except (UsageError, DiamGraphError, ValueError) as exc:
        sys.stderr.write(f"diamgraph: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
