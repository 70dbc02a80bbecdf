"""Offline oracles: exact OPT, the configuration LP, rounding, FFD and lower bounds."""

from __future__ import annotations

import logging
from typing import Optional

from binbench.model import Instance
from binbench.oracle.configurations import (
    Configuration,
    OracleError,
    TooManyConfigurations,
    enumerate_configurations,
    singleton_configurations,
)
from binbench.oracle.exact import BudgetExceeded, ExactBudget, solve_exact
from binbench.oracle.fractional import (
    FractionalPlan,
    KnapsackResult,
    configuration_lp,
    knapsack_bnb,
    knapsack_dp,
    price_configuration,
    solve_fractional,
)
from binbench.oracle.heuristics import first_fit_decreasing, lower_bound_l2, round_plan, solve_ffd
from binbench.oracle.plan import IntegralPlan, instantiate, validate_plan

log = logging.getLogger(__name__)

ORACLE_MODES = ("exact", "approx")


def plan_for(
    instance: Instance, mode: str = "exact", budget: Optional[ExactBudget] = None
) -> tuple[IntegralPlan, bool]:
    """An integral plan for ``instance`` and whether the approximate fallback was used.

    ``exact`` tries :func:`solve_exact` and falls back to rounding the
    configuration LP when the budget runs out; ``approx`` rounds directly.
    """
    if mode not in ORACLE_MODES:
        raise ValueError(f"unknown oracle mode {mode!r}; expected one of {ORACLE_MODES}")
    if mode == "exact":
        try:
            return solve_exact(instance, budget), False
        except BudgetExceeded as e:
            log.warning("exact oracle gave up (%s) on %d items; rounding OPT_f instead", e.reason, len(instance))
    return round_plan(solve_fractional(instance), instance), mode == "exact"


__all__ = [
    "Configuration", "OracleError", "TooManyConfigurations", "enumerate_configurations",
    "singleton_configurations", "BudgetExceeded", "ExactBudget", "solve_exact",
    "FractionalPlan", "KnapsackResult", "configuration_lp", "knapsack_bnb", "knapsack_dp", "price_configuration",
    "solve_fractional", "first_fit_decreasing", "lower_bound_l2", "round_plan", "solve_ffd",
    "IntegralPlan", "instantiate", "validate_plan", "ORACLE_MODES", "plan_for",
]
