"""Command-line interface for binbench.

Usage:
    binbench [global flags] oracle --instance FILE [--mode exact|fractional|ffd|round] [--plan]
    binbench [global flags] run --policy NAME (--dist D | --ground-set G | --instance FILE) [--T N]
    binbench [global flags] bench [--grid FILE] [--policy P ...] [--dist D ...] [--T N ...] [--trials N]
    binbench [global flags] verify --check prop2|prop3|prop6|prop1|ce|lemma1|prop4|queue
    binbench [global flags] ce --dist D [--T N ...]
    binbench [global flags] runs list|show ID|delete ID

Global flags: --seed, --out, --budget-ms, --config, --data-dir, --timing, --verbose.

Option resolution priority:
    1. command-line flag (highest)
    2. key of the JSON file given with --config (keys mirror the long flag names)
    3. built-in default
"""

from __future__ import annotations

import argparse
import asyncio
import json
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Optional

from binbench.config import DEFAULT_BASE_SEED, DEFAULT_TRIALS, DEFAULT_WORKERS, EXACT_NODE_LIMIT
from binbench.distributions import (
    GroundSet,
    TwoPoint,
    derive_seed,
    get_distribution,
    ground_set_family,
    list_ground_families,
    sample_permutation,
)
from binbench.harness import (
    ExperimentGrid,
    OptReference,
    cell_arrivals,
    cell_seed,
    compute_reference,
    default_reference,
    emit_plot_data,
    load_grid,
    resolve_source,
    run_bench,
    write_csv,
    write_records,
    write_report,
)
from binbench.harness.grid import Source
from binbench.lp import LpError, write_lp
from binbench.model import Instance, PackingError, read_instance, validate_state
from binbench.oracle import (
    ExactBudget,
    OracleError,
    configuration_lp,
    round_plan,
    solve_exact,
    solve_ffd,
    solve_fractional,
)
from binbench.policies import (
    IdentityViolation,
    LevelLpError,
    PhaseTrace,
    UnknownPolicy,
    get_all_policies,
    get_policy,
)
from binbench.theory import (
    CheckReport,
    estimate_ce,
    verify_lemma1,
    verify_prop1,
    verify_prop2,
    verify_prop3,
    verify_prop4,
    verify_prop6,
    verify_queue_bound,
)

log = logging.getLogger(__name__)

_DEFAULTS: dict[str, Any] = {
    "seed": DEFAULT_BASE_SEED,
    "oracle": "exact",
    "workers": DEFAULT_WORKERS,
    "node_limit": EXACT_NODE_LIMIT,
    "timing": False,
    "verbose": False,
}

_ERRORS = (ValueError, UnknownPolicy, LpError, OracleError, PackingError, LevelLpError, IdentityViolation, OSError)

CHECKS = ("prop2", "prop3", "prop6", "prop1", "ce", "lemma1", "prop4", "queue")


# ── Option resolution ───────────────────────────────────────────────────────


def load_config(path: str | Path) -> dict[str, Any]:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ValueError(f"config {path}: not valid JSON ({e})") from None
    if not isinstance(data, dict):
        raise ValueError(f"config {path}: expected a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def apply_config(args: argparse.Namespace) -> argparse.Namespace:
    """Fill flags left unset from the config file, then from built-in defaults.

    ``args.explicit`` records the options set by a flag or by the config file.
    """
    config = load_config(args.config) if getattr(args, "config", None) else {}
    for key, value in config.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    args.explicit = {k for k, v in vars(args).items() if v is not None}
    for key, value in _DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    return args


def _single(value: Any) -> Any:
    return value[0] if isinstance(value, list) else value


def _as_list(value: Any) -> list:
    if value is None:
        return []
    return value if isinstance(value, list) else [value]


def _budget(args: argparse.Namespace) -> ExactBudget:
    return ExactBudget(node_limit=args.node_limit, time_limit_ms=args.budget_ms)


def _ground(spec: str, T: Optional[int]) -> GroundSet:
    """A ground set from a family name (needs ``T``) or an instance file."""
    if spec in list_ground_families():
        if T is None:
            raise ValueError(f"ground-set family {spec!r} needs --T")
        return ground_set_family(spec, T)
    return GroundSet(read_instance(spec))


# ── Commands ────────────────────────────────────────────────────────────────


def cmd_oracle(args: argparse.Namespace) -> None:
    """Solve an instance offline and print the objective."""
    instance = read_instance(args.instance)
    mode = args.mode or "exact"
    if mode == "fractional":
        plan = solve_fractional(instance)
        print(f"opt_f {plan.value!r}")
        print(f"lower_bound {plan.lower_bound!r}")
        print(f"certified {str(plan.certified).lower()}")
        print(f"method {plan.method}")
        if args.plan:
            for config, weight in plan.support():
                print(f"{weight!r} x {' '.join(str(c) for c in config.counts)}")
        if args.lp_dump:
            write_lp(configuration_lp(plan), args.lp_dump)
        return

    if mode == "exact":
        plan = solve_exact(instance, _budget(args))
    elif mode == "ffd":
        plan = solve_ffd(instance)
    elif mode == "round":
        plan = round_plan(solve_fractional(instance), instance)
    else:
        raise ValueError(f"unknown oracle mode {mode!r}")
    print(f"objective {plan.n_bins}")
    print(f"method {plan.method}")
    print(f"optimal {str(plan.optimal).lower()}")
    if args.plan:
        for line in plan.assignment_lines():
            print(line)


def _run_arrivals(args: argparse.Namespace) -> tuple[Instance, Optional[Source], int]:
    T = _single(args.T)
    if args.instance:
        instance = read_instance(args.instance)
        return instance, None, len(instance)
    if args.ground_set and args.ground_set not in list_ground_families():
        ground = GroundSet(read_instance(args.ground_set))
        T = len(ground) if T is None else T
        if len(ground) != T:
            raise ValueError(f"ground set has {len(ground)} items but --T is {T}")
        return sample_permutation(ground, cell_seed(args.seed, T, 0)), None, T
    if T is None:
        raise ValueError("--T is required with --dist or --ground-set")
    if args.ground_set:
        source = resolve_source(args.ground_set)
        return cell_arrivals(source, T, cell_seed(args.seed, T, 0)), source, T
    dist = _single(args.dist)
    if dist is None:
        raise ValueError("one of --dist, --ground-set or --instance is required")
    source = resolve_source(dist)
    return cell_arrivals(source, T, cell_seed(args.seed, T, 0)), source, T


def cmd_run(args: argparse.Namespace) -> None:
    """Run one policy on one arrival sequence and print its trace."""
    policy = get_policy(_single(args.policy) or "overflow")
    arrivals, source, T = _run_arrivals(args)
    if args.B is not None and arrivals.capacity_den != args.B:
        raise ValueError(f"--B {args.B} does not match the capacity {arrivals.capacity_den} of the arrivals")
    if policy.integer_sizes_only and source is not None and not source.integer_sized:
        raise ValueError(f"policy {policy.name} needs integer sizes")
    support = source.support(T) if source is not None and source.integer_sized else None
    if support is None and policy.integer_sizes_only:
        support = arrivals.distinct()[0]

    result = policy.run(
        arrivals, T,
        seed=derive_seed(args.seed, T, 0, 1),
        stop_at=args.stop_at,
        oracle=args.oracle,
        budget=_budget(args),
        support=support,
    )
    problem = validate_state(result.state)
    if problem is not None:
        raise PackingError(f"final state is inconsistent: {problem.message}")

    print(f"policy {result.policy}")
    print(f"T {result.T}")
    print(f"placed {result.placed}")
    print(f"bins {result.bins_used}")
    for key in sorted(result.extra):
        print(f"{key} {result.extra[key]}")
    if result.trace and isinstance(result.trace[0], PhaseTrace):
        print("phase start end plan_bins method opened overflow queue identity")
        for p in result.trace:
            print(f"{p.k} {p.start} {p.end} {p.plan_bins} {p.plan_method} "
                  f"{p.opened_plan_bins} {p.overflow} {p.queue_final} {'ok' if p.identity_holds else 'BROKEN'}")
    elif result.trace and args.trace:
        print("t objective level probability")
        for step in result.trace:
            print(f"{step.t} {step.objective:.6f} {step.level} {step.probability:.6f}")
    if args.regret:
        n = result.placed
        kind = default_reference(source, T) if source is not None else OptReference.EXACT
        ref = compute_reference(arrivals.prefix(n), kind, _budget(args))
        print(f"reference {ref.kind.value} {ref.value}")
        print(f"regret {result.bins_used - ref.value}")


def _grid_from_args(args: argparse.Namespace) -> ExperimentGrid:
    if args.grid:
        grid = load_grid(args.grid)
    else:
        sources = _as_list(args.dist) + _as_list(args.ground_set)
        grid = ExperimentGrid(
            policies=_as_list(args.policy) or [p.name for p in get_all_policies() if not p.integer_sizes_only],
            sources=sources,
            T_values=[int(T) for T in _as_list(args.T)],
            trials=args.trials or 1,
            oracle_mode=args.oracle,
        )
    # flags and config keys win over the grid file
    overrides = {"seed": "base_seed", "budget_ms": "budget_ms", "stop_at": "stop_at",
                 "opt_reference": "opt_reference", "workers": "workers", "node_limit": "node_limit"}
    changes = {field: getattr(args, key) for key, field in overrides.items() if key in args.explicit}
    changes["timing"] = grid.timing or args.timing
    return replace(grid, **changes)


def cmd_bench(args: argparse.Namespace) -> None:
    """Run an experiment grid and write one CSV row per record."""
    grid = _grid_from_args(args)
    records = run_bench(grid)
    if args.out:
        write_csv(records, args.out)
        print(f"{len(records)} records written to {args.out}", file=sys.stderr)
    else:
        write_records(records, sys.stdout)
    if args.plot_data:
        Path(args.plot_data).write_text(emit_plot_data(records, args.group_by or "T"))
    if args.report:
        write_report(records, args.report, grid.to_dict(), args.group_by or "T")
    if args.db:
        run_id = asyncio.run(_save_bench(grid, records, args.label or ""))
        print(f"saved bench run {run_id}", file=sys.stderr)


async def _save_bench(grid: ExperimentGrid, records: list, label: str) -> int:
    from binbench.store import ResultStore

    store = ResultStore()
    try:
        return await store.save_bench(grid.to_dict(), records, label)
    finally:
        await store.close()


def _ce_report(dist_name: str, T_grid: list[int]) -> CheckReport:
    """Against a known limit: max sqrt(T) * |ratio - CE| <= 2. Otherwise the ratios must settle."""
    dist = get_distribution(dist_name)
    est = estimate_ce(dist, T_grid)
    details: dict[str, Any] = {"T": list(est.T_values), "ratios": list(est.ratios), "dist": dist.spec_id}
    if est.limit is not None:
        details["limit"] = est.limit
        statistic = max(d * T**0.5 for T, d in zip(est.T_values, est.deviations()))
        bound = 2.0
    else:
        statistic = max((abs(b - a) for a, b in zip(est.ratios, est.ratios[1:])), default=0.0)
        bound = 1.0 / est.T_values[0]
    return CheckReport("ce", statistic, bound, 0.0, len(T_grid), statistic > bound, details)


def cmd_verify(args: argparse.Namespace) -> None:
    """Run one Monte-Carlo check and print its report as JSON."""
    check = args.check
    seed = args.seed
    budget = _budget(args)
    T = _single(args.T)
    if check == "prop2":
        report = verify_prop2(args.N or 50, args.trials or DEFAULT_TRIALS, seed, rademacher=args.rademacher)
    elif check == "queue":
        report = verify_queue_bound(args.kind, args.size or T or 64, args.trials or DEFAULT_TRIALS, seed,
                                    block=args.block or 2)
    elif check == "prop3":
        dist = get_distribution(_single(args.dist) or "bounded-waste")
        report = verify_prop3(dist, T or 12, args.trials or 200, seed, budget)
    elif check == "prop4":
        dist = get_distribution(_single(args.dist) or "bounded-waste")
        report = verify_prop4(dist, T or 12, args.trials or 200, seed, budget=budget)
    elif check == "prop6":
        ground = _ground(_single(args.ground_set) or "two-atom", T or 16)
        report = verify_prop6(ground, args.k if args.k is not None else 1, args.trials or 200, seed, budget)
    elif check == "prop1":
        report = verify_prop1(count=args.count or 200, seed=seed)
    elif check == "lemma1":
        dist = get_distribution(_single(args.dist) or "bounded-waste")
        report = verify_lemma1(dist, [int(t) for t in _as_list(args.T)] or list(range(1, 21)), budget)
    elif check == "ce":
        report = _ce_report(_single(args.dist) or "two-point", [int(t) for t in _as_list(args.T)] or [16, 64, 256, 1024])
    else:
        raise ValueError(f"unknown check {check!r}; expected one of {', '.join(CHECKS)}")
    print(json.dumps(report.to_dict(), sort_keys=True))


def cmd_ce(args: argparse.Namespace) -> None:
    """Print OPT_f(quantile instance) / T over a grid of horizons."""
    dist = get_distribution(_single(args.dist) or "two-point")
    T_grid = [int(t) for t in _as_list(args.T)] or [16, 64, 256, 1024, 4096]
    est = estimate_ce(dist, T_grid)
    print("T ratio")
    for T, r in zip(est.T_values, est.ratios):
        print(f"{T} {r:.9f}")
    if isinstance(dist, TwoPoint):
        print(f"limit {est.limit}")


def cmd_runs(args: argparse.Namespace) -> None:
    """List, show or delete saved bench runs."""
    asyncio.run(_runs(args))


async def _runs(args: argparse.Namespace) -> None:
    from binbench.store import ResultStore

    store = ResultStore()
    try:
        if args.action == "list":
            runs = await store.list_bench_runs()
            if not runs:
                print("No saved bench runs.")
            for r in runs:
                cfg = r["config"]
                print(f"  {r['id']}  {r['created_at'][:19]}  {r['n_records']} records  "
                      f"{','.join(cfg.get('policies', []))} on {','.join(cfg.get('sources', []))}"
                      f"{'  ' + r['label'] if r['label'] else ''}")
        elif args.action == "show":
            if await store.get_bench_run(args.run_id) is None:
                raise ValueError(f"no bench run {args.run_id}")
            write_records(await store.get_trial_records(args.run_id), sys.stdout)
        elif args.action == "delete":
            if not await store.delete_bench_run(args.run_id):
                raise ValueError(f"no bench run {args.run_id}")
            print(f"Deleted bench run {args.run_id}")
    finally:
        await store.close()


# ── Argument parser ─────────────────────────────────────────────────────────


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="binbench",
        description="Online bin packing experiments: policies, offline oracles, regret benches and bound checks.",
    )
    parser.add_argument("--seed", type=int, default=None, help=f"Base seed (default: {DEFAULT_BASE_SEED})")
    parser.add_argument("--out", default=None, help="CSV output path (bench); stdout when omitted")
    parser.add_argument("--budget-ms", type=int, default=None, help="Wall-clock budget per exact oracle call")
    parser.add_argument("--node-limit", type=int, default=None, help=f"Node budget per exact oracle call (default: {EXACT_NODE_LIMIT})")
    parser.add_argument("--config", default=None, help="JSON file whose keys mirror the long flag names")
    parser.add_argument("--data-dir", default=None, help="Directory for bench history. Default: ~/.binbench. Env: BINBENCH_DATA_DIR")
    parser.add_argument("--timing", action="store_true", default=None, help="Record runtime_ms in bench output")
    parser.add_argument("--verbose", "-v", action="store_true", default=None, help="Debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    # oracle
    p_oracle = sub.add_parser("oracle", help="Solve an instance file offline")
    p_oracle.add_argument("--instance", required=True, help="Instance file ('capacity <DEN>' then one size per line)")
    p_oracle.add_argument("--mode", choices=["exact", "fractional", "ffd", "round"], default=None)
    p_oracle.add_argument("--plan", action="store_true", help="Also print the plan")
    p_oracle.add_argument("--lp-dump", default=None, help="Write the configuration LP as text (fractional mode)")
    p_oracle.set_defaults(func=cmd_oracle)

    # run
    p_run = sub.add_parser("run", help="Run one policy on one arrival sequence")
    p_run.add_argument("--policy", default=None, help="Policy name (default: overflow)")
    p_run.add_argument("--dist", default=None, help="Preset name or distribution spec file")
    p_run.add_argument("--ground-set", default=None, help="Ground-set family or instance file (random order)")
    p_run.add_argument("--instance", default=None, help="Instance file packed in file order")
    p_run.add_argument("--T", type=int, default=None, help="Horizon")
    p_run.add_argument("--B", type=int, default=None, help="Expected bin capacity of the arrivals")
    p_run.add_argument("--oracle", choices=["exact", "approx"], default=None, help="Offline oracle for overflow")
    p_run.add_argument("--stop-at", type=int, default=None, help="Stop after this many items")
    p_run.add_argument("--trace", action="store_true", help="Print every LP step (lp-adaptive)")
    p_run.add_argument("--regret", action="store_true", help="Also compute the offline reference and the regret")
    p_run.set_defaults(func=cmd_run)

    # bench
    p_bench = sub.add_parser("bench", help="Run an experiment grid")
    p_bench.add_argument("--grid", default=None, help="JSON experiment grid")
    p_bench.add_argument("--policy", action="append", default=None, help="Policy (repeatable)")
    p_bench.add_argument("--dist", action="append", default=None, help="Distribution (repeatable)")
    p_bench.add_argument("--ground-set", action="append", default=None, help="Ground-set family (repeatable)")
    p_bench.add_argument("--T", type=int, nargs="+", default=None, help="Horizons, ascending")
    p_bench.add_argument("--trials", type=int, default=None)
    p_bench.add_argument("--oracle", choices=["exact", "approx"], default=None)
    p_bench.add_argument("--opt-reference", choices=[r.value for r in OptReference], default=None)
    p_bench.add_argument("--stop-at", type=int, default=None)
    p_bench.add_argument("--workers", type=int, default=None)
    p_bench.add_argument("--plot-data", default=None, help="Write mean regret ± SE per group to this file")
    p_bench.add_argument("--group-by", choices=["T", "B", "J"], default=None)
    p_bench.add_argument("--report", default=None, help="Write a Markdown summary to this file")
    p_bench.add_argument("--db", action="store_true", help="Save the run to the bench history")
    p_bench.add_argument("--label", default=None, help="Label for the saved run")
    p_bench.set_defaults(func=cmd_bench)

    # verify
    p_verify = sub.add_parser("verify", help="Monte-Carlo check of a queue or benchmark inequality")
    p_verify.add_argument("--check", choices=CHECKS, required=True)
    p_verify.add_argument("--trials", type=int, default=None)
    p_verify.add_argument("--N", type=int, default=None, help="Half-length of the sign sequence (prop2)")
    p_verify.add_argument("--T", type=int, nargs="+", default=None)
    p_verify.add_argument("--dist", default=None)
    p_verify.add_argument("--ground-set", default=None)
    p_verify.add_argument("--k", type=int, default=None, help="Subsample exponent (prop6)")
    p_verify.add_argument("--kind", choices=["multinomial", "hypergeometric"], default="multinomial")
    p_verify.add_argument("--size", type=int, default=None, help="Queue length n (queue)")
    p_verify.add_argument("--block", type=int, default=None, help="Balls per colour (hypergeometric queue)")
    p_verify.add_argument("--count", type=int, default=None, help="Random instances (prop1)")
    p_verify.add_argument("--rademacher", action="store_true", help="Add the symmetrised estimate (prop2)")
    p_verify.set_defaults(func=cmd_verify)

    # ce
    p_ce = sub.add_parser("ce", help="Estimate CE(F) from quantile instances")
    p_ce.add_argument("--dist", default=None)
    p_ce.add_argument("--T", type=int, nargs="+", default=None)
    p_ce.set_defaults(func=cmd_ce)

    # runs
    p_runs = sub.add_parser("runs", help="Saved bench runs")
    p_runs.add_argument("action", choices=["list", "show", "delete"])
    p_runs.add_argument("run_id", type=int, nargs="?", default=None)
    p_runs.set_defaults(func=cmd_runs)

    return parser


def main(argv: Optional[list[str]] = None) -> None:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        apply_config(args)
    except (ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(1)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    # Set data dir env var before any store initialization
    if args.data_dir:
        os.environ["BINBENCH_DATA_DIR"] = str(Path(args.data_dir).expanduser().resolve())
    if args.command == "runs" and args.action != "list" and args.run_id is None:
        parser.error(f"runs {args.action} needs a run id")

    try:
        args.func(args)
    except _ERRORS as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    main()
