"""Command-line front end: ``kcut <command> ...``.

Every run prints a provenance header (version, command, seed, config),
then the command's records, then the elapsed time on its own line so the
rest of the output is byte-identical across runs with the same inputs.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__, families
from .io import ParseError, cut_line, cut_record, read_family, read_graph, summary_line
from .multigraph import DisconnectedGraphError, GraphError

EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_DISCONNECTED = 3
EXIT_ORACLE = 4


class Report:
    """Collects output records and renders them as text or JSON lines."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.records: list[tuple[str, dict]] = []

    def add(self, text: str, record: dict | None = None) -> None:
        if record is None:
            record = {"type": "line", "text": text}
        self.records.append((text, record))

    def check(self, c) -> None:
        self.add(c.line(), {"type": "check", "name": c.name, "status": c.status,
                            "witness": c.witness})

    def render(self, elapsed: float) -> str:
        if self.fmt == "json":
            lines = [json.dumps(r, sort_keys=True) for _, r in self.records]
            lines.append(json.dumps({"type": "elapsed", "seconds": round(elapsed, 3)}))
        else:
            lines = [t for t, _ in self.records]
            lines.append(f"elapsed {elapsed:.3f}s")
        return "\n".join(lines) + "\n"


def _config_items(args) -> list[tuple[str, object]]:
    skip = {"func", "command", "seed", "format", "output"}
    return sorted((k, v) for k, v in vars(args).items() if k not in skip)


def _header(report: Report, args) -> None:
    items = _config_items(args)
    report.add(f"# kcut {__version__}", {"type": "header", "version": __version__})
    report.add(f"# command {args.command}", {"type": "command", "command": args.command})
    report.add(f"# seed {args.seed}", {"type": "seed", "seed": args.seed})
    text = " ".join(f"{k}={_fmt(v)}" for k, v in items)
    report.add(f"# config {text}", {"type": "config", **{k: _jsonable(v) for k, v in items}})


def _fmt(v) -> str:
    if v is None:
        return "default"
    if isinstance(v, (list, tuple)):
        return ",".join(str(x) for x in v)
    return str(v)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    return v


def _alpha(text: str) -> Fraction:
    try:
        a = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if a < 1:
        raise argparse.ArgumentTypeError(f"alpha must be at least 1, got {text}")
    return a


def _int_range(text: str) -> list[int]:
    try:
        if ":" in text:
            a, b = text.split(":")
            return list(range(int(a), int(b) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:B or a,b,c, got {text!r}") from None


def _load_graph(args):
    if args.graph is not None and args.family is not None:
        raise GraphError("give either a graph file or --family, not both")
    if args.graph is not None:
        return read_graph(args.graph)
    if args.family is not None:
        if args.n is None:
            raise GraphError("--family needs -n")
        return families.make(args.family, args.n, seed=args.graph_seed)
    raise GraphError("no input graph: give a file or --family NAME -n N")


def _solver_config(args, alpha=1):
    from .recursive import SolverConfig
    return SolverConfig(k=args.k, alpha=alpha, floor_override=args.floor,
                        repetitions=args.reps, seed=args.seed, threads=args.threads,
                        max_seconds=args.max_seconds)


def _figure_dir(args) -> Path | None:
    if getattr(args, "figures", None) is None:
        return None
    d = Path(args.figures)
    d.mkdir(parents=True, exist_ok=True)
    return d


# -- commands -----------------------------------------------------------------

def cmd_mincut(args, report: Report) -> int:
    from .recursive import solve_min_k_cut

    g = _load_graph(args)
    res = solve_min_k_cut(g, _solver_config(args))
    report.add(summary_line(res.lambda_k, res.count, res.repetitions, res.capped),
               {"type": "summary", "lambda_k": res.lambda_k, "count": res.count,
                "repetitions": res.repetitions, "capped": res.capped})
    if args.list:
        for c in res.cuts:
            report.add(cut_line(c), cut_record(c))
    if args.oracle:
        return _oracle_min(g, args.k, res, report)
    return 0


def _oracle_min(g, k, res, report) -> int:
    from .oracle import EXACT_MAX_N, exact_lambda_k

    if g.n > EXACT_MAX_N:
        raise GraphError(f"--oracle needs n <= {EXACT_MAX_N}")
    ex = exact_lambda_k(g, k)
    found = {c.key for c in res.cuts}
    want = {c.key for c in ex.cuts}
    ok = ex.lambda_k == res.lambda_k and found == want
    text = (f"oracle {'match' if ok else 'mismatch'} lambda_k {ex.lambda_k} "
            f"count {ex.count} missing {len(want - found)} extra {len(found - want)}")
    report.add(text, {"type": "oracle", "match": ok, "lambda_k": ex.lambda_k,
                      "count": ex.count, "missing": len(want - found),
                      "extra": len(found - want)})
    return 0 if ok else EXIT_ORACLE


def cmd_enumerate(args, report: Report) -> int:
    from .recursive import enumerate_near_min_cuts

    g = _load_graph(args)
    res = enumerate_near_min_cuts(g, _solver_config(args, args.alpha))
    cuts = res.cuts.cuts()
    for c in cuts:
        report.add(cut_line(c), cut_record(c))
    report.add(summary_line(res.lambda_k, res.count, res.repetitions, res.capped),
               {"type": "summary", "lambda_k": res.lambda_k, "count": res.count,
                "repetitions": res.repetitions, "capped": res.capped,
                "alpha": str(args.alpha)})
    figdir = _figure_dir(args)
    if figdir is not None:
        from .plotting import cut_weight_figure
        cut_weight_figure([c.weight for c in cuts], figdir / "cut_weights.png")
    if args.oracle:
        from .oracle import EXACT_MAX_N, all_k_cuts, exact_lambda_k

        if g.n > EXACT_MAX_N:
            raise GraphError(f"--oracle needs n <= {EXACT_MAX_N}")
        lam = exact_lambda_k(g, args.k).lambda_k
        bound = math.floor(args.alpha * lam)
        want = {c.key for c in all_k_cuts(g, args.k, max_weight=bound)}
        found = {c.key for c in cuts}
        ok = want == found
        report.add(f"oracle {'match' if ok else 'mismatch'} count {len(want)} "
                   f"missing {len(want - found)} extra {len(found - want)}",
                   {"type": "oracle", "match": ok, "count": len(want),
                    "missing": len(want - found), "extra": len(found - want)})
        return 0 if ok else EXIT_ORACLE
    return 0


def cmd_classify(args, report: Report) -> int:
    from .oracle import census_slope_spread, classify_two_cuts, medium_cut_census

    if args.n_range is not None:
        if args.family is None:
            raise GraphError("census mode needs --family")
        rows = medium_cut_census(args.family, args.n_range, args.k, args.constant,
                                 seed=args.graph_seed)
        report.add("family\tn\tk\tcount", {"type": "census_header"})
        for r in rows:
            report.add(r.line(), {"type": "census", "family": r.family, "n": r.n,
                                  "k": r.k, "count": r.count})
        spread = census_slope_spread(rows)
        report.add(f"slope_spread {'none' if spread is None else f'{spread:.3f}'}",
                   {"type": "slope_spread", "value": spread})
        figdir = _figure_dir(args)
        if figdir is not None:
            from .plotting import census_figure
            census_figure(rows, figdir / f"census_{args.family}_k{args.k}.png")
        return 0
    g = _load_graph(args)
    st = classify_two_cuts(g, args.k, epsilon=args.epsilon)
    rec = {"type": "classify", "lambda_k": st.lambda_k, "lambda_bar": str(st.lambda_bar),
           "small_threshold": str(st.small_threshold), "medium_upper": str(st.medium_upper),
           "small": st.n_small, "medium": st.n_medium, "large": st.n_large,
           "good": st.n_good}
    report.add(f"lambda_k {st.lambda_k} lambda_bar {st.lambda_bar} "
               f"small_threshold {st.small_threshold} medium_upper {st.medium_upper}", rec)
    report.add(f"small {st.n_small} medium {st.n_medium} large {st.n_large} "
               f"good {st.n_good} total {st.total}", {"type": "counts"})
    for t in st.shores("small") + st.shores("medium"):
        kind = "small" if t.weight * (args.k - 1) < st.lambda_k else "medium"
        shore = ",".join(str(v) for v in sorted(t.shore))
        report.add(f"{kind} weight {t.weight} shore {shore}",
                   {"type": "two_cut", "kind": kind, "weight": t.weight,
                    "shore": sorted(t.shore)})
    return 0


def cmd_verify(args, report: Report) -> int:
    suite = args.suite
    checks = []
    figdir = _figure_dir(args)
    if suite == "extremal":
        from .harness import extremal_sweep
        ks = args.k_list or [3, 4]
        summary = extremal_sweep(args.count, args.n_max, ks, args.max_weight, args.seed)
        checks = [s.check() for s in summary.values()]
    elif suite == "analysis":
        from .analysis import analysis_report, check_expected_r_bound
        from .contraction import AnalysisParams, Rng
        checks = analysis_report(include_rk4=not args.quick)
        g = families.cycle(12)
        params = AnalysisParams.make(3, 3, 0)
        res = check_expected_r_bound(g, {}, [5, 6, 7], params, args.trials or 2000,
                                     Rng(args.seed))
        checks += [r.check() for r in res]
        if figdir is not None:
            from .plotting import F_figure, f_bound_figure, r_bound_figure
            for d in (0.01, 0.1, 0.5):
                F_figure(d, figdir / f"F_delta{d:g}.png")
            f_bound_figure(100, (0.1, 0.5), figdir / "f_bound.png")
            r_bound_figure(res, figdir / "r_bound_cycle12.png")
    elif suite == "sunflower":
        from .harness import sunflower_suite
        for s in sunflower_suite(args.trials or 100, args.seed):
            checks.append(s.check())
    elif suite == "survival":
        from .harness import survival_experiment
        g = families.make(args.family or "cycle", args.n or 8, seed=args.graph_seed)
        k = args.k_list[0] if args.k_list else 2
        taus = args.tau or [4]
        rows = survival_experiment(g, k, taus, args.trials or 100000, args.seed)
        checks = [r.check() for r in rows]
        if figdir is not None:
            from .plotting import survival_figure
            survival_figure([r.tau for r in rows], [r.frequency for r in rows],
                            [r.stderr for r in rows],
                            [float(r.exact) if r.exact is not None else float("nan")
                             for r in rows], figdir / "survival.png")
    for c in checks:
        report.check(c)
    failed = sum(c.status == "fail" for c in checks)
    report.add(f"summary checks {len(checks)} failed {failed}",
               {"type": "summary", "checks": len(checks), "failed": failed})
    return 0 if failed == 0 else EXIT_FAIL


def cmd_sunflower(args, report: Report) -> int:
    from .sunflower import (SetFamily, find_many_sunflowers, find_sunflower,
                            find_sunflower_nonempty_core)

    universe, sets = read_family(args.family_file)
    fam = SetFamily(universe, sets)

    def emit(sf):
        members = ",".join(str(i) for i in sf.members)
        core = ",".join(str(x) for x in sorted(sf.core)) or "-"
        report.add(f"sunflower members {members} core {core}",
                   {"type": "sunflower", "members": list(sf.members), "core": sorted(sf.core)})

    if args.s is not None:
        res = find_many_sunflowers(fam, args.r, args.s)
        for sf in res.sunflowers:
            emit(sf)
        report.add(f"found {len(res.sunflowers)} requested {args.s} "
                   f"shortfall {str(res.shortfall).lower()}",
                   {"type": "summary", "found": len(res.sunflowers), "requested": args.s,
                    "shortfall": res.shortfall})
        return 0
    finder = find_sunflower_nonempty_core if args.nonempty else find_sunflower
    sf = finder(fam, args.r)
    if sf is None:
        report.add("sunflower none", {"type": "sunflower", "members": None})
    else:
        emit(sf)
    return 0


def cmd_schedule(args, report: Report) -> int:
    from .recursive import SolverConfig, default_repetitions, plan_schedule

    cfg = SolverConfig(k=args.k, alpha=args.alpha, floor_override=args.floor)
    sched = plan_schedule(args.n, cfg)
    for line in sched.lines():
        report.add(line, {"type": "schedule_line", "text": line})
    reps = default_repetitions(sched, cfg.max_repetitions)
    capped = reps > cfg.max_repetitions
    reps = min(reps, cfg.max_repetitions)
    report.add(f"default_repetitions {reps} capped {str(capped).lower()}",
               {"type": "repetitions", "value": reps, "capped": capped})
    return 0


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--format", choices=("text", "json"), default="text",
                        help="text records or JSON lines (default text)")
    common.add_argument("--output", help="write to this file instead of stdout")
    common.add_argument("--figures", metavar="DIR", help="also render figures into DIR")

    graph = argparse.ArgumentParser(add_help=False)
    graph.add_argument("graph", nargs="?", help="graph file ('p kcut n m' format)")
    graph.add_argument("--family", choices=families.FAMILIES, help="built-in graph family")
    graph.add_argument("-n", type=int, help="vertex count for --family")
    graph.add_argument("--graph-seed", type=int, default=0, help="seed for --family random")

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("-k", type=int, required=True, help="number of parts")
    solver.add_argument("--reps", type=int, help="outer repetitions (default: schedule based)")
    solver.add_argument("--floor", type=int, help="last recursion level size (default ceil(20 a k^2))")
    solver.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker processes (default: all cores)")
    solver.add_argument("--max-seconds", type=float, help="stop early and flag the result")
    solver.add_argument("--oracle", action="store_true", help="cross-check by brute force (n <= 14)")

    p = argparse.ArgumentParser(prog="kcut", description="Minimum k-cut tools.")
    p.add_argument("--version", action="version", version=f"kcut {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("mincut", parents=[common, graph, solver], help="minimum k-cut weight")
    s.add_argument("--list", action="store_true", help="also print every minimum cut")
    s.set_defaults(func=cmd_mincut)

    s = sub.add_parser("enumerate", parents=[common, graph, solver],
                       help="all k-cuts of weight <= alpha * lambda_k")
    s.add_argument("-a", "--alpha", type=_alpha, default=Fraction(1), help="alpha >= 1 (default 1)")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("classify", parents=[common, graph],
                       help="small/medium/large 2-cuts, or a census with --n-range")
    s.add_argument("-k", type=int, required=True)
    s.add_argument("--epsilon", type=Fraction, help="count good cuts for this epsilon")
    s.add_argument("--n-range", type=_int_range, help="census sizes, A:B or a,b,c")
    s.add_argument("--constant", type=float, help="fail if a count exceeds constant*n")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("verify", parents=[common], help="run a named check suite")
    s.add_argument("suite", choices=("extremal", "analysis", "sunflower", "survival"))
    s.add_argument("-k", dest="k_list", type=int, action="append", help="k (repeatable)")
    s.add_argument("--n-max", type=int, default=7, help="extremal: largest n (default 7)")
    s.add_argument("--count", type=int, default=100, help="extremal: graphs (default 100)")
    s.add_argument("--max-weight", type=int, default=3, help="extremal: edge weights 1..W")
    s.add_argument("--family", choices=families.FAMILIES, help="survival: graph family")
    s.add_argument("-n", type=int, help="survival: vertex count")
    s.add_argument("--graph-seed", type=int, default=0)
    s.add_argument("--tau", type=int, nargs="+", help="survival: stopping sizes")
    s.add_argument("--trials", type=int, help="Monte Carlo trials / random families")
    s.add_argument("--quick", action="store_true", help="analysis: skip the RK4 cross-check")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("sunflower", parents=[common], help="extract sunflowers from a family file")
    s.add_argument("family_file")
    s.add_argument("-r", type=int, required=True, help="petal count")
    s.add_argument("-s", type=int, help="find this many sunflowers with distinct nonempty cores")
    s.add_argument("--nonempty", action="store_true", help="require a nonempty core")
    s.set_defaults(func=cmd_sunflower)

    s = sub.add_parser("schedule", parents=[common], help="print the recursion schedule")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-k", type=int, required=True)
    s.add_argument("-a", "--alpha", type=_alpha, default=Fraction(1))
    s.add_argument("--floor", type=int)
    s.set_defaults(func=cmd_schedule)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    report = Report(args.format)
    _header(report, args)
    t0 = time.perf_counter()
    try:
        code = args.func(args, report)
    except ParseError as e:
        print(f"kcut: parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DisconnectedGraphError as e:
        print(f"kcut: {e}", file=sys.stderr)
        return EXIT_DISCONNECTED
    except (GraphError, ValueError, OSError) as e:
        print(f"kcut: {e}", file=sys.stderr)
        return EXIT_USAGE
    text = report.render(time.perf_counter() - t0)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
