"""Exact ``OPT`` by branch and bound.

Two searches share one entry point:

- integer-size instances on a small grid branch on configuration counts,
  bounded by the configuration LP;
- everything else assigns items to bins largest first, bounded by the
  volume of what is left and by L2 at the root.

Both start from the FFD packing as incumbent and stop as soon as the
incumbent meets the root lower bound.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from binbench.config import (
    CONFIG_PATH_MAX_DEN,
    EXACT_MAX_ITEMS,
    EXACT_NODE_LIMIT,
    EXACT_TIME_LIMIT_MS,
    FULL_ENUMERATION_MAX_COLUMNS,
    OPT_COMPARE_TOL,
)
from binbench.lp import Constraint, LinearProgram, Relation, solve_lp
from binbench.model import Instance
from binbench.oracle.configurations import OracleError, TooManyConfigurations, enumerate_configurations
from binbench.oracle.heuristics import first_fit_decreasing, lower_bound_l2, solve_ffd
from binbench.oracle.plan import IntegralPlan, instantiate

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExactBudget:
    node_limit: int = EXACT_NODE_LIMIT
    time_limit_ms: Optional[int] = EXACT_TIME_LIMIT_MS
    #: Let the assignment search run on more than ``EXACT_MAX_ITEMS`` items.
    allow_large: bool = False


class BudgetExceeded(OracleError):
    """The search stopped before proving optimality; ``incumbent`` is the best plan found."""

    def __init__(self, incumbent: IntegralPlan, nodes: int, reason: str) -> None:
        self.incumbent = incumbent
        self.nodes = nodes
        self.reason = reason
        self.optimal = False
        super().__init__(f"exact solver stopped ({reason}) after {nodes} nodes; incumbent {incumbent.n_bins} bins")


class _Search:
    def __init__(self, instance: Instance, budget: ExactBudget, incumbent: IntegralPlan) -> None:
        self.instance = instance
        self.budget = budget
        self.incumbent = incumbent
        self.nodes = 0
        self.deadline = (
            time.monotonic() + budget.time_limit_ms / 1000.0 if budget.time_limit_ms else None
        )

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget.node_limit:
            raise BudgetExceeded(self.incumbent, self.nodes, "node limit")
        if self.deadline is not None and self.nodes % 64 == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded(self.incumbent, self.nodes, "time limit")

    def offer(self, bins: list[list[int]], method: str) -> None:
        if len(bins) < self.incumbent.n_bins:
            inst = self.instance
            self.incumbent = IntegralPlan(inst.capacity_den, inst.sizes, bins, method=method)
            log.debug("new incumbent with %d bins after %d nodes", len(bins), self.nodes)


# ── Configuration branch and bound ──────────────────────────────────────────


def _config_search(search: _Search, root_bound: int) -> IntegralPlan:
    instance = search.instance
    C = instance.capacity_den
    sizes, demands = instance.distinct()
    configs = enumerate_configurations(sizes, C, limit=FULL_ENUMERATION_MAX_COLUMNS)
    A = np.array([c.counts for c in configs], dtype=float).T.reshape(len(sizes), len(configs))
    base = [Constraint(A[i], Relation.GE, float(demands[i])) for i in range(len(sizes))]
    n = len(configs)

    def unit(j: int) -> np.ndarray:
        e = np.zeros(n)
        e[j] = 1.0
        return e

    stack: list[tuple[tuple[int, Relation, int], ...]] = [()]
    while stack:
        if search.incumbent.n_bins <= root_bound:
            break
        fixes = stack.pop()
        search.tick()
        rows = base + [Constraint(unit(j), rel, float(v)) for j, rel, v in fixes]
        sol = solve_lp(LinearProgram(np.ones(n), rows))
        if not sol.optimal:
            continue
        bound = math.ceil(sol.objective - OPT_COMPARE_TOL)
        if bound >= search.incumbent.n_bins:
            continue
        z = sol.primal
        floors = np.floor(z + OPT_COMPARE_TOL).astype(int)
        # rounding heuristic: floored bins plus FFD on what they miss
        bins, leftover = instantiate(instance, sizes, [(configs[j], int(k)) for j, k in enumerate(floors) if k > 0])
        bins.extend(first_fit_decreasing(instance.sizes, leftover, C))
        search.offer(bins, "exact")
        frac = z - floors
        fractional = np.flatnonzero(frac > OPT_COMPARE_TOL)
        if fractional.size == 0:
            continue
        # most fractional first, lowest index on ties
        j = int(fractional[np.argmin(np.abs(frac[fractional] - 0.5))])
        down = fixes + ((j, Relation.LE, int(floors[j])),)
        up = fixes + ((j, Relation.GE, int(floors[j]) + 1),)
        stack.append(down)
        stack.append(up)
    return search.incumbent


# ── Assignment branch and bound ─────────────────────────────────────────────


def _assignment_search(search: _Search, root_bound: int) -> IntegralPlan:
    instance = search.instance
    C = instance.capacity_den
    sizes = instance.sizes
    order = sorted(range(len(instance)), key=lambda i: (-sizes[i], i))
    suffix = [0] * (len(order) + 1)
    for k in range(len(order) - 1, -1, -1):
        suffix[k] = suffix[k + 1] + sizes[order[k]]
    loads: list[int] = []
    bins: list[list[int]] = []

    def done() -> bool:
        return search.incumbent.n_bins <= root_bound

    def recurse(k: int) -> None:
        search.tick()
        if k == len(order):
            search.offer([list(b) for b in bins], "exact")
            return
        lower = max(len(loads), -(-(sum(loads) + suffix[k]) // C))
        if lower >= search.incumbent.n_bins:
            return
        item = order[k]
        s = sizes[item]
        tried: set[int] = set()
        for b in range(len(loads)):
            # bins with equal load are interchangeable for the rest of the search
            if loads[b] + s > C or loads[b] in tried:
                continue
            tried.add(loads[b])
            loads[b] += s
            bins[b].append(item)
            recurse(k + 1)
            bins[b].pop()
            loads[b] -= s
            if done():
                return
        if len(loads) + 1 < search.incumbent.n_bins:
            loads.append(s)
            bins.append([item])
            recurse(k + 1)
            bins.pop()
            loads.pop()

    recurse(0)
    return search.incumbent


def solve_exact(instance: Instance, budget: Optional[ExactBudget] = None) -> IntegralPlan:
    """A provably optimal packing of ``instance``.

    Raises :class:`BudgetExceeded` (carrying the best plan found) when the
    node or time budget runs out, or when the instance is too large for the
    assignment search and ``budget.allow_large`` is not set.
    """
    budget = budget or ExactBudget()
    C = instance.capacity_den
    if not len(instance):
        return IntegralPlan(C, instance.sizes, [], optimal=True, method="exact")

    incumbent = solve_ffd(instance)
    root_bound = lower_bound_l2(instance)
    search = _Search(instance, budget, incumbent)

    if incumbent.n_bins > root_bound:
        plan = None
        if C <= CONFIG_PATH_MAX_DEN:
            try:
                plan = _config_search(search, root_bound)
            except TooManyConfigurations:
                log.debug("configuration search refused; falling back to item assignment")
        if plan is None:
            if len(instance) > EXACT_MAX_ITEMS and not budget.allow_large:
                raise BudgetExceeded(
                    search.incumbent, search.nodes, f"{len(instance)} items exceed the limit of {EXACT_MAX_ITEMS}"
                )
            plan = _assignment_search(search, root_bound)
    else:
        plan = incumbent

    return IntegralPlan(C, instance.sizes, plan.bins, optimal=True, method="exact")
