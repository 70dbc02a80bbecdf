"""Queue dynamics, token generators, bound evaluators and Monte-Carlo checks."""

from binbench.theory.bounds import (
    ce_lower_slack,
    ceil_log2,
    permutation_regret_bound,
    phase_allowance,
    phase_total_bound,
    queue_bound,
    relaxation_slack,
    sign_permutation_bound,
    stochastic_regret_bound,
    subsample_rhs,
)
from binbench.theory.checks import (
    CeEstimate,
    CheckReport,
    estimate_ce,
    exact_prop2_mean,
    mean_and_stderr,
    random_integer_instances,
    subsample_ground_set,
    verify_lemma1,
    verify_prop1,
    verify_prop2,
    verify_prop3,
    verify_prop4,
    verify_prop6,
    verify_queue_bound,
)
from binbench.theory.queue import QueueTrajectory, lindley_final, lindley_queue, queue_finals
from binbench.theory.tokens import (
    TokenKind,
    TokenSequence,
    draw,
    hypergeometric_increments,
    multinomial_increments,
    rademacher_weights,
    sign_permutations,
)

__all__ = [
    "ce_lower_slack", "ceil_log2", "permutation_regret_bound", "phase_allowance", "phase_total_bound",
    "queue_bound", "relaxation_slack", "sign_permutation_bound", "stochastic_regret_bound", "subsample_rhs",
    "CeEstimate", "CheckReport", "estimate_ce", "exact_prop2_mean", "mean_and_stderr",
    "random_integer_instances", "subsample_ground_set", "verify_lemma1", "verify_prop1", "verify_prop2",
    "verify_prop3", "verify_prop4", "verify_prop6", "verify_queue_bound",
    "QueueTrajectory", "lindley_final", "lindley_queue", "queue_finals",
    "TokenKind", "TokenSequence", "draw", "hypergeometric_increments", "multinomial_increments",
    "rademacher_weights", "sign_permutations",
]
