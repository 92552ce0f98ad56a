"""Command-line interface.

Exit codes: 0 success (``verify``: every check passed), 1 a verification
check failed, 2 bad input, 3 exhaustive cap exceeded without ``--heuristic``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bounds, frechet
from .bounds import DEFAULT_SEED, BoundReport
from .frechet import CapExceededError, Metric, Order
from .graph import GraphError, parse_graph, parse_sample, serialize_sample
from .random_graphs import parse_model, sample_ier_many

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _load_sample(path: str):
    try:
        return parse_sample(_read(path))
    except GraphError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"random seed (default {DEFAULT_SEED})")
    p.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
    p.add_argument("--format", choices=("json", "table"), default="json")


def _solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--sample", required=True, help="sample JSON file")
    p.add_argument("--metric", choices=[m.value for m in Metric], default=Metric.HAMMING.value)
    p.add_argument("--heuristic", action="store_true", help="use local search instead of exhaustive search")
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--max-iters", type=int, default=1000)
    p.add_argument("--cap", type=int, default=frechet.EXHAUSTIVE_CAP, help="largest n for exhaustive search")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frechetgraph", description="Fréchet mean and median graphs and their edge-count bounds."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_ in (("median", "sample Fréchet median graphs"), ("mean", "sample Fréchet mean graphs")):
        p = sub.add_parser(name, help=help_)
        _solver_flags(p)
        _common(p)

    p = sub.add_parser("eval", help="evaluate the Fréchet function at a graph")
    p.add_argument("--sample", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--metric", choices=[m.value for m in Metric], default=Metric.HAMMING.value)
    p.add_argument("--q", type=int, choices=(1, 2), default=2)
    _common(p)

    p = sub.add_parser("sample", help="draw graphs from an inhomogeneous Erdős–Rényi model")
    p.add_argument("--model", required=True, help="edge probability JSON file")
    p.add_argument("--count", type=int, required=True)
    _common(p)

    p = sub.add_parser("verify", help="check the edge-count bounds on random samples")
    p.add_argument("--suite", choices=("theorem1", "lemmas", "tightness", "sparsity", "all"), default="all")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--N", type=int, default=5)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--heuristic", action="store_true", help="solve means with local search")
    _common(p)
    return parser


# ---------------------------------------------------------------- rendering


def _table_solver(obj: dict) -> str:
    lines = [
        f"method       {obj['method']}",
        f"metric       {obj['metric']}",
        f"q            {obj['q']}",
        f"exact        {obj['exact']}",
        f"f_value      {obj['f_value']!r}",
        f"evaluations  {obj['evaluations']}",
        f"minimizers   {len(obj['minimizers'])}",
    ]
    lines += [f"  {g['edges']}" for g in obj["minimizers"]]
    return "\n".join(lines)


def _table_report(obj: dict) -> str:
    width = max([len(c["name"]) for c in obj["checks"]] + [4])
    lines = [f"{'name':<{width}}  {'lhs':>14}  {'rhs':>14}  strict  pass"]
    for c in obj["checks"]:
        lines.append(
            f"{c['name']:<{width}}  {c['lhs']:>14.6g}  {c['rhs']:>14.6g}  {str(c['strict']):<6}  {c['pass']}"
        )
    lines.append(f"all_pass: {obj['all_pass']}")
    return "\n".join(lines)


def _emit(args, obj, table: str | None = None) -> None:
    text = table if args.format == "table" and table is not None else json.dumps(obj, indent=2)
    if args.output == "-":
        sys.stdout.write(text + "\n")
    else:
        Path(args.output).write_text(text + "\n", encoding="utf-8")


# ---------------------------------------------------------------- commands


def _cmd_solve(args, q: Order) -> int:
    s = _load_sample(args.sample)
    rep = frechet.solve(
        s,
        Metric(args.metric),
        q,
        heuristic=args.heuristic,
        cap=args.cap,
        restarts=args.restarts,
        max_iters=args.max_iters,
        seed=args.seed,
    )
    obj = rep.to_obj()
    obj["seed"] = args.seed
    _emit(args, obj, _table_solver(obj))
    return EXIT_OK


def cmd_eval(args) -> int:
    s = _load_sample(args.sample)
    try:
        g = parse_graph(_read(args.graph))
    except GraphError as exc:
        raise InputError(f"{args.graph}: {exc}") from exc
    value = frechet.frechet_function(g, s, Metric(args.metric), args.q)
    obj = {"metric": args.metric, "q": args.q, "f_value": value}
    _emit(args, obj, repr(value))
    return EXIT_OK


def cmd_sample(args) -> int:
    try:
        model = parse_model(_read(args.model))
    except GraphError as exc:
        raise InputError(f"{args.model}: {exc}") from exc
    if args.count < 1:
        raise InputError("--count must be positive")
    s = sample_ier_many(model, args.count, args.seed)
    obj = json.loads(serialize_sample(s))
    obj["seed"] = args.seed
    _emit(args, obj)
    return EXIT_OK


def run_verify(
    suite: str, *, trials: int, n: int, N: int, seed: int, jobs: int = 1, heuristic: bool = False
) -> BoundReport:
    """Library entry point behind ``verify``; the CLI prints exactly this report."""
    policy = bounds.SolverPolicy.HEURISTIC if heuristic else bounds.SolverPolicy.EXACT
    parts: list[tuple[str, BoundReport]] = []
    campaign = [x for x in ("theorem1", "lemmas") if suite in (x, "all")]
    if campaign:
        parts.append(
            ("campaign", bounds.run_campaign(trials, n, N, seed=seed, policy=policy, suites=campaign, jobs=jobs))
        )
    if suite in ("tightness", "all"):
        parts.append(("tightness", bounds.tightness_experiment(max(n, 2), N).report))
    if suite in ("sparsity", "all"):
        samples = bounds.ier_growth_sequence(N=N, seed=seed)
        parts.append(("sparsity", bounds.verify_corollary_sparsity(samples, seed=seed).report))
    meta = {"suite": suite, "seed": seed, "trials": trials, "n": n, "N": N, "policy": policy.value}
    meta.update({name: rep.meta for name, rep in parts})
    checks = [c for name, rep in parts for c in (bounds.prefixed_check(c, name + "/") for c in rep.checks)]
    return BoundReport(meta, checks)


def cmd_verify(args) -> int:
    if args.trials < 0 or args.n < 1 or args.N < 1 or args.jobs < 1:
        raise InputError("--trials must be >= 0 and --n, --N, --jobs >= 1")
    report = run_verify(
        args.suite, trials=args.trials, n=args.n, N=args.N, seed=args.seed, jobs=args.jobs, heuristic=args.heuristic
    )
    obj = report.to_obj()
    _emit(args, obj, _table_report(obj))
    return EXIT_OK if report.all_pass else EXIT_FAIL


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "median": lambda a: _cmd_solve(a, Order.MEDIAN),
        "mean": lambda a: _cmd_solve(a, Order.MEAN),
        "eval": cmd_eval,
        "sample": cmd_sample,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except (InputError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceededError as exc:
        print(f"error: {exc}; pass --heuristic for local search", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
