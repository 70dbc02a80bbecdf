"""Adaptive overflow policy.

The horizon is cut into geometric phases. At the start of each phase the
items seen so far are packed offline; the plan's item sizes become slots
that the phase's online items fill, each item taking the least vacant slot
at least its size. Items with no such slot open overflow bins.

Plan bins are opened lazily, when the first online item lands in them.
The accounting that charges every plan bin up front is reported alongside.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from binbench.model import NEW_BIN, Instance, PackingState, Placement, place_item
from binbench.oracle import ExactBudget, plan_for
from binbench.policies.base import OnlinePolicy, RunResult
from binbench.policies.slot_book import build_slot_book, phase_boundaries, vacancy_search
from binbench.theory.queue import lindley_final

log = logging.getLogger(__name__)


class IdentityViolation(RuntimeError):
    """A phase opened a different number of overflow bins than its queue replay predicts."""

    def __init__(self, k: int, overflow: int, queue_final: int) -> None:
        self.k = k
        self.overflow = overflow
        self.queue_final = queue_final
        super().__init__(f"phase {k}: {overflow} overflow bins but queue replay gives {queue_final}")

    def __reduce__(self):
        return (IdentityViolation, (self.k, self.overflow, self.queue_final))


@dataclass(frozen=True)
class PhaseTrace:
    k: int
    #: Items ``start+1 .. end`` (1-based) arrive online in this phase.
    start: int
    end: int
    plan_bins: int
    plan_method: str
    fallback: bool
    opened_plan_bins: int
    overflow: int
    #: Lindley final value of the phase's merged token string.
    queue_final: int

    @property
    def identity_holds(self) -> bool:
        return self.overflow == self.queue_final

    @property
    def bins_opened(self) -> int:
        return self.opened_plan_bins + self.overflow


def phase_tokens(history: Sequence[int], online: Sequence[int]) -> list[int]:
    """Slots (``-1``) and online items (``+1``) merged by ascending size, items first on ties."""
    merged = sorted([(s, 0) for s in online] + [(s, 1) for s in history])
    return [1 if kind == 0 else -1 for _, kind in merged]


def run_overflow_policy(
    arrivals: Instance,
    T: Optional[int] = None,
    oracle: str = "exact",
    seed: int = 0,
    budget: Optional[ExactBudget] = None,
    stop_at: Optional[int] = None,
) -> RunResult:
    T, n = OnlinePolicy.horizon(arrivals, T, stop_at)
    state = PackingState(arrivals.capacity_den)
    result = RunResult("overflow", state, T, n)
    if n == 0:
        result.extra["plan_accounting_bins"] = 0
        return result

    place_item(state, arrivals[0], NEW_BIN, item_id=0)
    schedule = phase_boundaries(T)
    charged = 1
    for k in range(1, schedule.K + 1):
        start, end = schedule.boundaries[k - 1], schedule.boundaries[k]
        if start >= n:
            break
        stop = min(end, n)
        history = arrivals.prefix(start)
        plan, fallback = plan_for(history, oracle, budget)
        book = build_slot_book(history, plan)
        opened: dict[int, int] = {}
        overflow = 0
        for t in range(start, stop):
            x = arrivals[t]
            s = vacancy_search(book, x)
            if s is None:
                place_item(state, x, NEW_BIN, item_id=t)
                overflow += 1
                continue
            book.occupy(s)
            plan_bin = book.slot_bin[s]
            if plan_bin in opened:
                place_item(state, x, Placement.existing(opened[plan_bin]), item_id=t)
            else:
                opened[plan_bin] = len(state.bins)
                place_item(state, x, NEW_BIN, item_id=t)

        q = lindley_final(phase_tokens(history.sizes, arrivals.sizes[start:stop]))
        phase = PhaseTrace(
            k=k, start=start, end=stop, plan_bins=plan.n_bins, plan_method=plan.method,
            fallback=fallback, opened_plan_bins=len(opened), overflow=overflow, queue_final=q,
        )
        if not phase.identity_holds:
            raise IdentityViolation(k, overflow, q)
        result.trace.append(phase)
        charged += plan.n_bins + overflow
        log.debug(
            "phase %d [%d, %d): plan %d bins (%s), opened %d, overflow %d",
            k, start, stop, plan.n_bins, plan.method, len(opened), overflow,
        )

    result.extra["plan_accounting_bins"] = charged
    result.extra["fallbacks"] = sum(1 for p in result.trace if p.fallback)
    return result


class OverflowPolicy(OnlinePolicy):
    name = "overflow"

    def __init__(self, oracle: str = "exact", budget: Optional[ExactBudget] = None) -> None:
        self.oracle = oracle
        self.budget = budget

    def run(
        self,
        arrivals: Instance,
        T: Optional[int] = None,
        seed: int = 0,
        stop_at: Optional[int] = None,
        **options: Any,
    ) -> RunResult:
        return run_overflow_policy(
            arrivals, T,
            oracle=options.get("oracle", self.oracle),
            seed=seed,
            budget=options.get("budget", self.budget),
            stop_at=stop_at,
        )
