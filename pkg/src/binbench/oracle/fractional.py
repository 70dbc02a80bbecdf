"""The configuration LP relaxation ``OPT_f``.

``min Σ z_j`` subject to ``Σ_j a_ij z_j >= b_i`` over configurations ``j``.
Small instances enumerate every maximal configuration; larger ones start
from singleton columns and price new ones with an unbounded knapsack.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from binbench.config import (
    COVERAGE_TOL,
    FULL_ENUMERATION_MAX_COLUMNS,
    KNAPSACK_DP_MAX_CAPACITY,
    KNAPSACK_NODE_LIMIT,
    MAX_CONFIGURATIONS,
    OPT_COMPARE_TOL,
    PRICING_TOL,
)
from binbench.lp import Constraint, LinearProgram, PricedColumn, Relation, solve_lp, solve_lp_with_columns
from binbench.model import Instance
from binbench.oracle.configurations import (
    Configuration,
    OracleError,
    TooManyConfigurations,
    enumerate_configurations,
    singleton_configurations,
)

log = logging.getLogger(__name__)


@dataclass
class FractionalPlan:
    capacity_den: int
    sizes: tuple[int, ...]
    demands: tuple[int, ...]
    configurations: list[Configuration] = field(default_factory=list)
    weights: np.ndarray = field(default_factory=lambda: np.zeros(0))
    value: float = 0.0
    #: False when pricing stopped without proving that no improving column exists.
    certified: bool = True
    #: A valid lower bound on the LP optimum; equals ``value`` when certified.
    lower_bound: float = 0.0
    method: str = ""
    pricing_rounds: int = 0

    def support(self, tol: float = COVERAGE_TOL) -> list[tuple[Configuration, float]]:
        return [(c, float(w)) for c, w in zip(self.configurations, self.weights) if w > tol]

    def coverage(self) -> np.ndarray:
        cover = np.zeros(len(self.sizes))
        for c, w in zip(self.configurations, self.weights):
            cover += w * np.asarray(c.counts, dtype=float)
        return cover

    def covers(self, tol: float = COVERAGE_TOL) -> bool:
        return bool(np.all(self.coverage() >= np.asarray(self.demands, dtype=float) - tol))

    def rounded_bound(self) -> int:
        """``ceil(lower_bound)``, a valid lower bound on ``OPT``."""
        return max(0, math.ceil(self.lower_bound - OPT_COMPARE_TOL))


# ── Knapsack pricing ────────────────────────────────────────────────────────


@dataclass
class KnapsackResult:
    value: float
    counts: tuple[int, ...]
    #: Upper bound on the true optimum; equals ``value`` when the search finished.
    bound: float
    certified: bool = True


def knapsack_dp(values: Sequence[float], sizes: Sequence[int], capacity: int) -> KnapsackResult:
    """Unbounded integer knapsack by dynamic programming over capacities.

    ``best[c]`` is the best value of a multiset of total size at most ``c``.
    """
    usable = [i for i, (v, s) in enumerate(zip(values, sizes)) if v > 0 and s <= capacity]
    counts = [0] * len(sizes)
    if not usable:
        return KnapsackResult(0.0, tuple(counts), 0.0)
    s_arr = np.array([sizes[i] for i in usable], dtype=np.int64)
    v_arr = np.array([values[i] for i in usable], dtype=float)
    best = np.zeros(capacity + 1)
    choice = np.full(capacity + 1, -1, dtype=np.int64)  # -1: same as c - 1
    for c in range(1, capacity + 1):
        best[c] = best[c - 1]
        fit = np.flatnonzero(s_arr <= c)
        if fit.size:
            cand = best[c - s_arr[fit]] + v_arr[fit]
            k = int(np.argmax(cand))
            if cand[k] > best[c]:
                best[c] = cand[k]
                choice[c] = fit[k]
    c = capacity
    while c > 0:
        k = int(choice[c])
        if k < 0:
            c -= 1
        else:
            counts[usable[k]] += 1
            c -= int(s_arr[k])
    value = float(best[capacity])
    return KnapsackResult(value, tuple(counts), value)


def knapsack_bnb(
    values: Sequence[float], sizes: Sequence[int], capacity: int, node_limit: int = KNAPSACK_NODE_LIMIT
) -> KnapsackResult:
    """Unbounded integer knapsack by depth-first branch and bound.

    Items are taken in decreasing value density; the bound at a node is the
    fractional fill with the best remaining density.
    """
    n = len(sizes)
    order = sorted(
        (i for i in range(n) if values[i] > 0 and sizes[i] <= capacity),
        key=lambda i: (-values[i] / sizes[i], i),
    )
    if not order:
        return KnapsackResult(0.0, tuple([0] * n), 0.0)
    vals = [values[i] for i in order]
    szs = [sizes[i] for i in order]
    root_bound = capacity * vals[0] / szs[0]
    best_value = 0.0
    best_counts = [0] * len(order)
    counts = [0] * len(order)
    nodes = 0
    exhausted = False

    def recurse(pos: int, residual: int, acc: float) -> None:
        nonlocal best_value, best_counts, nodes, exhausted
        nodes += 1
        if nodes > node_limit:
            exhausted = True
            return
        if acc > best_value:
            best_value = acc
            best_counts = list(counts)
        if pos == len(order):
            return
        if acc + residual * vals[pos] / szs[pos] <= best_value + 1e-12:
            return
        for t in range(residual // szs[pos], -1, -1):
            counts[pos] = t
            recurse(pos + 1, residual - t * szs[pos], acc + t * vals[pos])
            if exhausted:
                break
        counts[pos] = 0

    recurse(0, capacity, 0.0)
    full = [0] * n
    for k, i in enumerate(order):
        full[i] = best_counts[k]
    if exhausted:
        log.warning("knapsack pricing hit the node limit (%d); bound not certified", node_limit)
        return KnapsackResult(best_value, tuple(full), max(best_value, root_bound), certified=False)
    return KnapsackResult(best_value, tuple(full), best_value)


def price_configuration(duals: Sequence[float], sizes: Sequence[int], capacity: int) -> KnapsackResult:
    values = [max(0.0, float(y)) for y in duals]
    if capacity <= KNAPSACK_DP_MAX_CAPACITY:
        return knapsack_dp(values, sizes, capacity)
    return knapsack_bnb(values, sizes, capacity)


# ── Solving ─────────────────────────────────────────────────────────────────


def _master(sizes: Sequence[int], demands: Sequence[int], configs: Sequence[Configuration]) -> LinearProgram:
    m = len(sizes)
    A = np.array([c.counts for c in configs], dtype=float).T.reshape(m, len(configs))
    rows = [Constraint(A[i], Relation.GE, float(demands[i])) for i in range(m)]
    return LinearProgram(np.ones(len(configs)), rows, [c.label(sizes) for c in configs])


def configuration_lp(plan: FractionalPlan) -> LinearProgram:
    """The master LP over the plan's configurations, e.g. for an LP dump."""
    return _master(plan.sizes, plan.demands, plan.configurations)


def _check(plan: FractionalPlan) -> FractionalPlan:
    if not plan.covers():
        raise OracleError(f"fractional plan misses coverage by more than {COVERAGE_TOL}")
    return plan


def solve_fractional(instance: Instance, method: str = "auto") -> FractionalPlan:
    """Solve the configuration LP for ``instance``.

    ``method`` is ``enumerate``, ``columns`` or ``auto`` (enumerate when the
    maximal configurations number at most ``FULL_ENUMERATION_MAX_COLUMNS``).
    """
    sizes, demands = instance.distinct()
    C = instance.capacity_den
    if not sizes:
        return FractionalPlan(C, sizes, demands, method="empty")

    if method in ("auto", "enumerate"):
        limit = FULL_ENUMERATION_MAX_COLUMNS if method == "auto" else MAX_CONFIGURATIONS
        try:
            configs = enumerate_configurations(sizes, C, limit=limit)
        except TooManyConfigurations:
            if method == "enumerate":
                raise
            log.debug("too many configurations for full enumeration; using column generation")
        else:
            sol = solve_lp(_master(sizes, demands, configs))
            if not sol.optimal:
                raise OracleError(f"configuration LP returned {sol.status.value}")
            return _check(FractionalPlan(
                C, sizes, demands, list(configs), sol.primal, sol.objective,
                lower_bound=sol.objective, method="enumerate",
            ))

    configs = singleton_configurations(sizes, C)
    state = {"certified": True, "bound": 0.0}

    def price(duals: np.ndarray) -> Optional[PricedColumn]:
        result = price_configuration(duals, sizes, C)
        state["certified"] = result.certified
        state["bound"] = result.bound
        if result.value > 1.0 + PRICING_TOL:
            config = Configuration(result.counts)
            configs.append(config)
            return PricedColumn(1.0, np.asarray(result.counts, dtype=float), config.label(sizes))
        return None

    run = solve_lp_with_columns(_master(sizes, demands, configs), price)
    sol = run.solution
    if not sol.optimal:
        raise OracleError(f"configuration LP returned {sol.status.value}")
    value = float(sol.objective)
    lower = value
    if not state["certified"]:
        # Farley: dual objective / max(1, best knapsack value bound)
        lower = min(value, float(sol.dual_objective) / max(1.0, state["bound"]))
        log.warning("pricing not certified; OPT_f lower bound %.6f against LP value %.6f", lower, value)
    log.debug("OPT_f=%.6f after %d pricing rounds (%d sizes)", value, run.rounds, len(sizes))
    return _check(FractionalPlan(
        C, sizes, demands, configs, sol.primal, value,
        certified=bool(state["certified"]), lower_bound=lower,
        method="columns", pricing_rounds=run.rounds,
    ))
