"""Column generation driver over a kept simplex tableau.

The caller supplies a feasible restricted master LP and a pricing callback.
Each round hands the row duals to the callback and appends the column it
returns to the tableau, which re-optimizes from the current basis. The loop
ends when the callback returns ``None``, meaning no column with reduced cost
below ``-PRICING_TOL`` exists.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from binbench.config import COLGEN_ROUNDS_BASE, COLGEN_ROUNDS_PER_ROW
from binbench.lp.simplex import (
    IterationLimit,
    LinearProgram,
    LpSolution,
    SimplexTableau,
    solve_lp,
    within_tolerance,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PricedColumn:
    cost: float
    column: np.ndarray
    label: Optional[str] = None


PricingCallback = Callable[[np.ndarray], Optional[PricedColumn]]


@dataclass
class ColumnGenerationResult:
    solution: LpSolution
    lp: LinearProgram
    columns: list[PricedColumn] = field(default_factory=list)
    rounds: int = 0
    #: Times the kept tableau drifted out of tolerance and was rebuilt from phase one.
    rebuilds: int = 0


def default_round_limit(n_rows: int) -> int:
    return COLGEN_ROUNDS_PER_ROW * n_rows + COLGEN_ROUNDS_BASE


def solve_lp_with_columns(
    base: LinearProgram,
    price: PricingCallback,
    max_rounds: Optional[int] = None,
) -> ColumnGenerationResult:
    """Grow ``base`` with priced columns until pricing finds none.

    Raises :class:`IterationLimit` after ``max_rounds`` added columns
    (default ``10·m + 1000``).
    """
    limit = default_round_limit(base.n_rows) if max_rounds is None else max_rounds
    tableau = SimplexTableau(base)
    columns: list[PricedColumn] = []
    rebuilds = 0
    rebuilt_at = -1
    while True:
        while tableau.optimal:
            priced = price(tableau.duals())
            if priced is None:
                break
            if len(columns) >= limit:
                raise IterationLimit(limit, "column generation rounds")
            tableau.add_column(priced.cost, priced.column, priced.label)
            columns.append(priced)
            if len(columns) % 100 == 0:
                log.info("column generation: %d rounds, %d pivots", len(columns), tableau.iterations)

        sol = tableau.solution()
        if not sol.optimal or within_tolerance(sol):
            break
        lp = tableau.linear_program()
        if rebuilt_at == len(columns):
            # a fresh tableau drifted too; solve_lp retries with Bland's rule or raises
            sol = solve_lp(lp)
            break
        log.warning(
            "kept tableau out of tolerance after %d rounds (primal %.2e, slackness %.2e); rebuilding",
            len(columns), sol.primal_residual, sol.slackness_residual,
        )
        rebuilds += 1
        rebuilt_at = len(columns)
        tableau = SimplexTableau(lp)

    log.debug("column generation finished after %d rounds", len(columns))
    return ColumnGenerationResult(
        solution=sol, lp=tableau.linear_program(), columns=columns, rounds=len(columns), rebuilds=rebuilds,
    )
