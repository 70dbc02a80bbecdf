"""LP-adaptive policy for integer-size distributions.

On every arrival the level LP is re-solved with the current level histogram
and the empirical size distribution (which includes the new item). The item
then goes to a level sampled from the LP's placements of its type.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Sequence

from binbench.config import LP_WARM_START, LP_WARM_START_VERIFY, WARM_START_AGREEMENT_TOL
from binbench.distributions import UnknownSize, make_rng
from binbench.lp import LpSolution, solve_lp
from binbench.model import NEW_BIN, Instance, PackingState, Placement, place_item
from binbench.policies.base import OnlinePolicy, RunResult
from binbench.policies.level_lp import LevelLpError, LevelLpModel, build_level_lp, select_level

log = logging.getLogger(__name__)


def _agrees(model: LevelLpModel, warm: LpSolution, cold: LpSolution) -> bool:
    """Same objective and same placement weights for the arriving item, within ``WARM_START_AGREEMENT_TOL``."""
    if not (warm.optimal and cold.optimal):
        return warm.status is cold.status
    if abs(cold.objective - warm.objective) > WARM_START_AGREEMENT_TOL:
        return False
    pairs = zip(model.arrival_weights(warm.primal), model.arrival_weights(cold.primal))
    return all(abs(w - c) <= WARM_START_AGREEMENT_TOL for (_, w), (_, c) in pairs)


@dataclass(frozen=True)
class LpStep:
    t: int
    objective: float
    level: int
    probability: float
    degenerate: bool
    warm_started: bool
    iterations: int


def run_lp_adaptive_policy(
    arrivals: Instance,
    T: Optional[int] = None,
    seed: int = 0,
    support: Optional[Sequence[int]] = None,
    stop_at: Optional[int] = None,
    warm_start: bool = LP_WARM_START,
    verify_warm_start: bool = LP_WARM_START_VERIFY,
) -> RunResult:
    T, n = OnlinePolicy.horizon(arrivals, T, stop_at)
    B = arrivals.capacity_den
    support = tuple(range(1, B)) if support is None else tuple(support)
    position = {s: j for j, s in enumerate(support)}
    counts = [0] * len(support)

    state = PackingState(B)
    rng = make_rng(seed)
    result = RunResult("lp-adaptive", state, T, n)
    basis: Optional[tuple[int, ...]] = None
    disagreements = 0

    for t in range(1, n + 1):
        x = arrivals[t - 1]
        j = position.get(x)
        if j is None:
            raise UnknownSize(x, t - 1)
        counts[j] += 1
        pmf = [Fraction(c, t) for c in counts]

        model = build_level_lp(state, x, pmf, T, t, support)
        sol = solve_lp(model.lp, warm_basis=basis if warm_start else None)
        if verify_warm_start and sol.warm_started:
            cold = solve_lp(model.lp)
            if not _agrees(model, sol, cold):
                log.warning("step %d: warm start disagrees with cold solve; keeping the cold answer", t)
                disagreements += 1
                sol = cold
        if not sol.optimal:
            raise LevelLpError(t, sol.status.value)
        basis = sol.basis

        choice = select_level(model, sol, rng)
        if choice.level == 0:
            placement = NEW_BIN
        else:
            placement = Placement.existing(state.lowest_bin_at(choice.level))
        place_item(state, x, placement, item_id=t - 1)
        result.trace.append(LpStep(
            t, sol.objective, choice.level, choice.probability,
            choice.degenerate, sol.warm_started, sol.iterations,
        ))
        if t % 500 == 0:
            log.debug("lp-adaptive: %d/%d items, %d bins", t, n, state.opened_total)

    result.extra["degenerate_fallbacks"] = sum(1 for s in result.trace if s.degenerate)
    result.extra["lp_iterations"] = sum(s.iterations for s in result.trace)
    result.extra["warm_start_disagreements"] = disagreements
    return result


class LpAdaptivePolicy(OnlinePolicy):
    name = "lp-adaptive"
    integer_sizes_only = True

    def __init__(self, support: Optional[Sequence[int]] = None) -> None:
        self.support = support

    def run(
        self,
        arrivals: Instance,
        T: Optional[int] = None,
        seed: int = 0,
        stop_at: Optional[int] = None,
        **options: Any,
    ) -> RunResult:
        return run_lp_adaptive_policy(
            arrivals, T, seed=seed,
            support=options.get("support", self.support),
            stop_at=stop_at,
        )
