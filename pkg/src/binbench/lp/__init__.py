"""Linear programming: dense two-phase simplex and a column generation driver."""

from binbench.lp.column_generation import (
    ColumnGenerationResult,
    PricedColumn,
    PricingCallback,
    default_round_limit,
    solve_lp_with_columns,
)
from binbench.lp.dump import dump_lp, parse_lp_text, write_lp
from binbench.lp.simplex import (
    Constraint,
    IterationLimit,
    LinearProgram,
    LpError,
    LpSolution,
    LpStatus,
    NumericalFailure,
    Relation,
    SimplexTableau,
    solve_lp,
    within_tolerance,
)

__all__ = [
    "ColumnGenerationResult", "PricedColumn", "PricingCallback", "default_round_limit",
    "solve_lp_with_columns", "dump_lp", "parse_lp_text", "write_lp",
    "Constraint", "IterationLimit", "LinearProgram", "LpError", "LpSolution", "LpStatus",
    "NumericalFailure", "Relation", "SimplexTableau", "solve_lp", "within_tolerance",
]
