"""Online policy registry and factory.

Usage::

    from binbench.policies import get_policy, get_all_policies

    result = get_policy("best-fit").run(arrivals)
    print(result.bins_used)

    for policy in get_all_policies():
        print(policy.name, policy.integer_sizes_only)
"""

from __future__ import annotations

from binbench.policies.base import HorizonMismatch, OnlinePolicy, RunResult, StepFunction, StepPolicy
from binbench.policies.baselines import (
    BestFit,
    FirstFit,
    NextFit,
    SumOfSquares,
    best_fit_step,
    first_fit_step,
    next_fit_step,
    sum_of_squares_delta,
    sum_of_squares_step,
)
from binbench.policies.level_lp import (
    LevelChoice,
    LevelLpError,
    LevelLpModel,
    StaticLevelSolution,
    arrival_levels,
    build_level_lp,
    build_static_level_lp,
    select_level,
    solve_static_level_lp,
)
from binbench.policies.lp_adaptive import LpAdaptivePolicy, LpStep, run_lp_adaptive_policy
from binbench.policies.overflow import (
    IdentityViolation,
    OverflowPolicy,
    PhaseTrace,
    phase_tokens,
    run_overflow_policy,
)
from binbench.policies.slot_book import (
    PhaseSchedule,
    PlanMismatch,
    SlotBook,
    build_slot_book,
    phase_boundaries,
    vacancy_search,
)


class UnknownPolicy(KeyError):
    def __init__(self, name: str, known: list[str]) -> None:
        self.name = name
        self.known = known
        super().__init__(f"unknown policy {name!r}; expected one of {', '.join(known)}")

    def __str__(self) -> str:
        return self.args[0]


# Singleton instances keyed by policy name
_REGISTRY: dict[str, OnlinePolicy] = {}


def _ensure_registry() -> None:
    if not _REGISTRY:
        for cls in (OverflowPolicy, LpAdaptivePolicy, BestFit, FirstFit, NextFit, SumOfSquares):
            instance = cls()
            _REGISTRY[instance.name] = instance


def get_policy(name: str) -> OnlinePolicy:
    """Return the registered policy called ``name``."""
    _ensure_registry()
    try:
        return _REGISTRY[name.lower()]
    except KeyError:
        raise UnknownPolicy(name, sorted(_REGISTRY)) from None


def get_all_policies() -> list[OnlinePolicy]:
    _ensure_registry()
    return list(_REGISTRY.values())


def register_policy(policy: OnlinePolicy) -> None:
    """Register a custom policy implementation."""
    _ensure_registry()
    _REGISTRY[policy.name] = policy


__all__ = [
    "HorizonMismatch", "OnlinePolicy", "RunResult", "StepFunction", "StepPolicy",
    "BestFit", "FirstFit", "NextFit", "SumOfSquares", "best_fit_step", "first_fit_step",
    "next_fit_step", "sum_of_squares_delta", "sum_of_squares_step",
    "LevelChoice", "LevelLpError", "LevelLpModel", "StaticLevelSolution", "arrival_levels",
    "build_level_lp", "build_static_level_lp", "select_level", "solve_static_level_lp",
    "LpAdaptivePolicy", "LpStep", "run_lp_adaptive_policy",
    "IdentityViolation", "OverflowPolicy", "PhaseTrace", "phase_tokens", "run_overflow_policy",
    "PhaseSchedule", "PlanMismatch", "SlotBook", "build_slot_book", "phase_boundaries", "vacancy_search",
    "UnknownPolicy", "get_policy", "get_all_policies", "register_policy",
]
