"""Monte-Carlo checks of the queue and benchmark inequalities.

Every check returns a :class:`CheckReport`. A statistical check is flagged
only when the sample mean exceeds the bound by more than
``VERDICT_STDERR_BAND`` standard errors; a violation is a report value, not
an exception.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Iterator, Optional, Sequence

import numpy as np

from binbench.config import EXHAUSTIVE_MAX_N, OPT_COMPARE_TOL, VERDICT_STDERR_BAND
from binbench.distributions import (
    DistributionSpec,
    GroundSet,
    TwoPoint,
    derive_seed,
    make_rng,
    pad_ground_set,
    quantile_instance,
    sample_iid,
)
from binbench.model import Instance
from binbench.oracle import ExactBudget, solve_exact, solve_fractional
from binbench.theory.bounds import (
    ce_lower_slack,
    queue_bound,
    relaxation_slack,
    sign_permutation_bound,
    subsample_rhs,
)
from binbench.theory.queue import lindley_queue, queue_finals
from binbench.theory.tokens import (
    TokenKind,
    hypergeometric_increments,
    multinomial_increments,
    rademacher_weights,
    sign_permutations,
)

log = logging.getLogger(__name__)

_BATCH = 1000


@dataclass
class CheckReport:
    check: str
    statistic: float
    bound: float
    stderr: float = 0.0
    trials: int = 0
    violation: bool = False
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "violation" if self.violation else "ok"

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["verdict"] = self.verdict
        return data


def mean_and_stderr(values: Sequence[float] | np.ndarray) -> tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("no samples")
    if arr.size == 1:
        return float(arr[0]), 0.0
    return float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(arr.size))


def _flag(mean: float, stderr: float, bound: float) -> bool:
    return mean - VERDICT_STDERR_BAND * stderr > bound


def _batches(trials: int) -> Iterator[int]:
    done = 0
    while done < trials:
        n = min(_BATCH, trials - done)
        yield n
        done += n


# ── Queue bounds ───────────────────────────────────────────────────────────


def exact_prop2_mean(N: int) -> Fraction:
    """``E[Q_2N]`` over all ``C(2N, N)`` equally likely sign orders."""
    if not 1 <= N <= EXHAUSTIVE_MAX_N:
        raise ValueError(f"exhaustive enumeration supports 1 <= N <= {EXHAUSTIVE_MAX_N}, got {N}")
    total = 0
    count = 0
    for plus in combinations(range(2 * N), N):
        tokens = [-1] * (2 * N)
        for i in plus:
            tokens[i] = 1
        total += lindley_queue(tokens).final
        count += 1
    return Fraction(total, count)


def verify_prop2(N: int, trials: int, seed: int, rademacher: bool = False) -> CheckReport:
    """Mean final queue over random sign orders against ``2√(2N)``.

    With ``rademacher`` the symmetrised estimate ``2·E|Σ ξ_n r_n|`` is added
    to the details as a diagnostic.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rng = make_rng(derive_seed(seed, N))
    finals = []
    sym = []
    for n in _batches(trials):
        tokens = sign_permutations(N, n, rng)
        finals.append(queue_finals(tokens))
        if rademacher:
            r = rademacher_weights(tokens.shape, rng)
            sym.append(np.abs((tokens * r).sum(axis=1)))
    mean, se = mean_and_stderr(np.concatenate(finals))
    bound = sign_permutation_bound(N)
    details: dict[str, Any] = {"N": N}
    if rademacher:
        details["rademacher_estimate"] = 2 * float(np.concatenate(sym).mean())
    if N <= EXHAUSTIVE_MAX_N:
        details["exact_mean"] = float(exact_prop2_mean(N))
    return CheckReport("prop2", mean, bound, se, trials, _flag(mean, se, bound), details)


def verify_queue_bound(
    kind: TokenKind | str, size: int, trials: int, seed: int, block: int = 2
) -> CheckReport:
    """``E[Q_n] <= 2√n`` for multinomial (``n = T``) or hypergeometric (``n = tau``) increments."""
    kind = TokenKind(kind)
    if kind is TokenKind.SIGN_PERMUTATION:
        return verify_prop2(size, trials, seed)
    rng = make_rng(derive_seed(seed, size, block))
    finals = []
    for n in _batches(trials):
        if kind is TokenKind.MULTINOMIAL:
            tokens = multinomial_increments(size, n, rng)
        else:
            tokens = hypergeometric_increments(size, block, n, rng)
        finals.append(queue_finals(tokens))
    mean, se = mean_and_stderr(np.concatenate(finals))
    bound = queue_bound(size)
    details: dict[str, Any] = {"kind": kind.value, "size": size}
    if kind is TokenKind.HYPERGEOMETRIC:
        details["block"] = block
    return CheckReport(f"queue-{kind.value}", mean, bound, se, trials, _flag(mean, se, bound), details)


# ── Benchmark inequalities ─────────────────────────────────────────────────


def _opt(instance: Instance, budget: Optional[ExactBudget]) -> int:
    return solve_exact(instance, budget).n_bins


def verify_prop3(
    dist: DistributionSpec, T: int, trials: int, seed: int, budget: Optional[ExactBudget] = None
) -> CheckReport:
    """``E[OPT(X_T)] <= OPT(shifted quantile instance) + 2√T``."""
    reference = _opt(quantile_instance(dist, T, shifted=True), budget)
    samples = [_opt(sample_iid(dist, T, derive_seed(seed, T, i)), budget) for i in range(trials)]
    mean, se = mean_and_stderr(samples)
    bound = reference + 2 * math.sqrt(T)
    return CheckReport(
        "prop3", mean, bound, se, trials, _flag(mean, se, bound),
        {"T": T, "dist": dist.spec_id, "quantile_opt": reference},
    )


def subsample_ground_set(ground: GroundSet, k: int, seed: int) -> Instance:
    """``ceil(T/2^k)`` items drawn without replacement from ``ground``.

    The ground set is padded with full-bin items to a multiple of ``2^k``;
    padded items drawn are skipped and the draw continues.
    """
    T = len(ground)
    tau = -(-T // 2**k)
    padded = pad_ground_set(ground, 2**k)
    order = make_rng(seed).permutation(len(padded))
    sizes = ground.instance.sizes
    picked = [sizes[int(i)] for i in order if i < T][:tau]
    return Instance(ground.instance.capacity_den, tuple(picked))


def verify_prop6(
    ground: GroundSet, k: int, trials: int, seed: int, budget: Optional[ExactBudget] = None
) -> CheckReport:
    T = len(ground)
    tau = -(-T // 2**k)
    ground_opt = _opt(ground.instance, budget)
    samples = [_opt(subsample_ground_set(ground, k, derive_seed(seed, k, i)), budget) for i in range(trials)]
    mean, se = mean_and_stderr(samples)
    bound = subsample_rhs(ground_opt, T, k)
    return CheckReport(
        "prop6", mean, bound, se, trials, _flag(mean, se, bound),
        {"T": T, "k": k, "tau": tau, "ground_opt": ground_opt, "padded_size": tau * 2**k},
    )


@dataclass(frozen=True)
class CeEstimate:
    T_values: tuple[int, ...]
    ratios: tuple[float, ...]
    #: Known value of ``CE(F)`` when there is one (two-point: 1/2).
    limit: Optional[float] = None

    def deviations(self) -> list[float]:
        if self.limit is None:
            raise ValueError("no known limit to compare against")
        return [abs(r - self.limit) for r in self.ratios]


def estimate_ce(dist: DistributionSpec, T_grid: Sequence[int]) -> CeEstimate:
    """``OPT_f(shifted quantile instance) / T`` for every ``T`` of the grid."""
    T_grid = tuple(T_grid)
    if list(T_grid) != sorted(T_grid):
        raise ValueError("T_grid must be ascending")
    ratios = []
    for T in T_grid:
        plan = solve_fractional(quantile_instance(dist, T, shifted=True))
        ratios.append(plan.value / T)
        log.info("CE estimate at T=%d: %.6f (%d pricing rounds)", T, ratios[-1], plan.pricing_rounds)
    limit = 0.5 if isinstance(dist, TwoPoint) else None
    return CeEstimate(T_grid, tuple(ratios), limit)


def verify_lemma1(
    dist: DistributionSpec, T_values: Sequence[int], budget: Optional[ExactBudget] = None
) -> CheckReport:
    """``OPT(unshifted) <= OPT(shifted) <= OPT(unshifted) + 1`` for every ``T``."""
    gaps = {}
    below = []
    for T in T_values:
        low = _opt(quantile_instance(dist, T, shifted=False), budget)
        high = _opt(quantile_instance(dist, T, shifted=True), budget)
        gaps[T] = high - low
        if high < low:
            below.append(T)
    worst = max(gaps.values()) if gaps else 0
    return CheckReport(
        "lemma1", float(worst), 1.0, 0.0, len(gaps), worst > 1 or bool(below),
        {"gaps": gaps, "shifted_below_unshifted": below, "dist": dist.spec_id},
    )


def verify_prop4(
    dist: DistributionSpec,
    T: int,
    trials: int,
    seed: int,
    ce_T: Optional[int] = None,
    budget: Optional[ExactBudget] = None,
) -> CheckReport:
    """``T·CE(F) - E[OPT(X_T)] <= 4log²T + 17logT + 12``.

    ``CE(F)`` is taken as the ``OPT_f`` ratio of the quantile instance at
    ``ce_T`` (default ``16·T``).
    """
    ce_T = ce_T or 16 * T
    ce = estimate_ce(dist, [ce_T]).ratios[0]
    samples = [_opt(sample_iid(dist, T, derive_seed(seed, T, i)), budget) for i in range(trials)]
    mean, se = mean_and_stderr(samples)
    statistic = T * ce - mean
    bound = ce_lower_slack(T)
    return CheckReport(
        "prop4", statistic, bound, se, trials, _flag(statistic, se, bound),
        {"T": T, "ce": ce, "ce_T": ce_T, "mean_opt": mean, "dist": dist.spec_id},
    )


def random_integer_instances(count: int, seed: int, max_items: int = 40, max_capacity: int = 12) -> list[Instance]:
    rng = make_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(2, max_items + 1))
        B = int(rng.integers(2, max_capacity + 1))
        out.append(Instance(B, tuple(int(v) for v in rng.integers(1, B, size=n))))
    return out


def verify_prop1(
    instances: Optional[Sequence[Instance]] = None, count: int = 200, seed: int = 0
) -> CheckReport:
    """``OPT_f <= OPT <= OPT_f + 4log²n + 17log n + 11`` on every instance.

    The statistic is the largest ``OPT - OPT_f - slack(n)``; it must stay at or below 0.
    """
    if instances is None:
        instances = random_integer_instances(count, seed)
    budget = ExactBudget(allow_large=True)
    left = 0
    right = 0
    worst = -math.inf
    largest_gap = 0.0
    for inst in instances:
        opt = _opt(inst, budget)
        opt_f = solve_fractional(inst).value
        if opt_f > opt + OPT_COMPARE_TOL:
            left += 1
        excess = opt - opt_f - relaxation_slack(len(inst))
        if excess > 0:
            right += 1
        worst = max(worst, excess)
        largest_gap = max(largest_gap, opt - opt_f)
    return CheckReport(
        "prop1", float(worst), 0.0, 0.0, len(instances), bool(left or right),
        {"left_violations": left, "right_violations": right, "largest_gap": largest_gap},
    )
