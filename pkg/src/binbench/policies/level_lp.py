"""Level LP for the LP-adaptive policy.

Variable ``v(j, h)`` is the (expected) number of remaining type-``j`` items
to be packed into bins currently at level ``h``; ``h = 0`` means a new bin.
Only levels ``h <= B - s_j`` exist for type ``j``. The LP minimises the
number of new bins subject to:

* per level ``1 <= h <= B-1``: bins present at ``h`` (now, or created by
  placements that end at ``h``) cover the placements into ``h``;
* the arriving item gets at least ``1/T`` mass on the levels it can use now;
* each type's total mass equals its expected remaining count.

The static variant drops the state and arrival terms and uses the true
probabilities; its optimum ``OPT_I(F)`` is the bins-per-item rate of the
best stationary packing.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from binbench.config import LEVEL_MASS_TOL
from binbench.lp import LinearProgram, LpSolution, Relation, solve_lp
from binbench.model import PackingState

log = logging.getLogger(__name__)


class LevelLpError(Exception):
    """The level LP did not reach an optimum."""

    def __init__(self, t: int, status: str) -> None:
        self.t = t
        self.status = status
        super().__init__(f"level LP at step {t} ended {status}")


@dataclass
class LevelLpModel:
    B: int
    support: tuple[int, ...]
    lp: LinearProgram
    #: ``(type index j, level h) -> variable index``.
    index: dict[tuple[int, int], int]
    #: ``H_t``; empty for the static model.
    levels: tuple[int, ...] = ()
    x_type: Optional[int] = None

    def var(self, j: int, h: int) -> Optional[int]:
        return self.index.get((j, h))

    def value(self, primal: np.ndarray, j: int, h: int) -> float:
        k = self.index.get((j, h))
        return 0.0 if k is None else float(primal[k])

    def arrival_weights(self, primal: np.ndarray) -> list[tuple[int, float]]:
        """``(h, v*(X_t, h))`` over the levels of ``H_t`` the arriving item fits."""
        if self.x_type is None:
            raise ValueError("static model has no arriving item")
        return [(h, max(0.0, self.value(primal, self.x_type, h))) for h in self.levels
                if (self.x_type, h) in self.index]


def _variables(support: Sequence[int], B: int) -> tuple[dict[tuple[int, int], int], list[str]]:
    index: dict[tuple[int, int], int] = {}
    names: list[str] = []
    for j, s in enumerate(support):
        if not 1 <= s <= B:
            raise ValueError(f"size {s} outside [1, {B}]")
        for h in range(B - s + 1):
            index[(j, h)] = len(names)
            names.append(f"v({s},{h})")
    return index, names


def _level_rows(
    lp: LinearProgram,
    support: Sequence[int],
    index: dict[tuple[int, int], int],
    B: int,
    histogram: Optional[dict[int, int]],
) -> None:
    n = lp.n_vars
    for h in range(1, B):
        row = np.zeros(n)
        for j, s in enumerate(support):
            into = index.get((j, h - s))
            if into is not None:
                row[into] += 1.0
            out = index.get((j, h))
            if out is not None:
                row[out] -= 1.0
        have = 0 if histogram is None else histogram.get(h, 0)
        lp.add_constraint(row, Relation.GE, -float(have))


def _objective(support: Sequence[int], index: dict[tuple[int, int], int], n: int) -> np.ndarray:
    c = np.zeros(n)
    for j in range(len(support)):
        c[index[(j, 0)]] = 1.0
    return c


def arrival_levels(state: PackingState) -> tuple[int, ...]:
    """``H_t = {0} ∪ {h : N_t(h) > 0}``."""
    return (0, *state.nonempty_levels())


def build_level_lp(
    state: PackingState,
    x: int,
    pmf: Sequence[Fraction | float],
    T: int,
    t: int,
    support: Optional[Sequence[int]] = None,
) -> LevelLpModel:
    """The level LP at step ``t`` (1-based) after observing item ``x``.

    ``pmf`` is the empirical distribution over ``support`` including ``x``.
    ``support`` defaults to every size ``1..B-1``.
    """
    B = state.capacity_den
    support = tuple(range(1, B)) if support is None else tuple(support)
    if len(pmf) != len(support):
        raise ValueError(f"pmf has {len(pmf)} entries for {len(support)} sizes")
    if not 1 <= t <= T:
        raise ValueError(f"step t={t} outside [1, {T}]")
    try:
        x_type = support.index(x)
    except ValueError:
        raise ValueError(f"item {x} is not in the support {support}") from None

    index, names = _variables(support, B)
    n = len(names)
    lp = LinearProgram(_objective(support, index, n), names=names)
    _level_rows(lp, support, index, B, state.level_histogram)

    levels = arrival_levels(state)
    row = np.zeros(n)
    for h in levels:
        k = index.get((x_type, h))
        if k is not None:
            row[k] = 1.0
    lp.add_constraint(row, Relation.GE, 1.0 / T)

    remaining = T - t + 1
    for j, p in enumerate(pmf):
        row = np.zeros(n)
        for h in range(B - support[j] + 1):
            row[index[(j, h)]] = 1.0
        lp.add_constraint(row, Relation.EQ, float(remaining * Fraction(p)))
    return LevelLpModel(B, support, lp, index, levels, x_type)


def build_static_level_lp(support: Sequence[int], probs: Sequence[Fraction | float], B: int) -> LevelLpModel:
    support = tuple(support)
    if len(probs) != len(support):
        raise ValueError(f"{len(probs)} probabilities for {len(support)} sizes")
    index, names = _variables(support, B)
    n = len(names)
    lp = LinearProgram(_objective(support, index, n), names=names)
    _level_rows(lp, support, index, B, None)
    for j, p in enumerate(probs):
        row = np.zeros(n)
        for h in range(B - support[j] + 1):
            row[index[(j, h)]] = 1.0
        lp.add_constraint(row, Relation.EQ, float(p))
    return LevelLpModel(B, support, lp, index)


@dataclass(frozen=True)
class StaticLevelSolution:
    #: ``OPT_I(F)``: new bins per item.
    value: float
    #: ``B·OPT_I(F) - E[X]``, expected wasted space per item in grid units.
    waste_rate: float
    solution: LpSolution


def solve_static_level_lp(support: Sequence[int], probs: Sequence[Fraction | float], B: int) -> StaticLevelSolution:
    model = build_static_level_lp(support, probs, B)
    sol = solve_lp(model.lp)
    if not sol.optimal:
        raise LevelLpError(0, sol.status.value)
    mean = float(sum(Fraction(p) * s for s, p in zip(support, probs)))
    return StaticLevelSolution(sol.objective, B * sol.objective - mean, sol)


@dataclass(frozen=True)
class LevelChoice:
    level: int
    probability: float
    degenerate: bool = False


def select_level(model: LevelLpModel, solution: LpSolution, rng: np.random.Generator) -> LevelChoice:
    """Sample a level of ``H_t`` in proportion to ``v*(X_t, h)``.

    Mass below ``LEVEL_MASS_TOL`` falls back to a new bin.
    """
    weights = model.arrival_weights(solution.primal)
    total = sum(w for _, w in weights)
    if total < LEVEL_MASS_TOL:
        log.warning("level mass %.3g below tolerance; opening a new bin", total)
        return LevelChoice(0, 1.0, degenerate=True)
    levels = [h for h, _ in weights]
    p = np.array([w for _, w in weights]) / total
    k = int(rng.choice(len(levels), p=p))
    return LevelChoice(levels[k], float(p[k]))
