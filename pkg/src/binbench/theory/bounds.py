"""Closed-form right-hand sides of the regret and benchmark bounds."""

from __future__ import annotations

import math
from typing import Sequence


def ceil_log2(n: int) -> int:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return (n - 1).bit_length()


def _polylog(n: int, a: float, b: float, c: float) -> float:
    lg = math.log2(n)
    return a * lg * lg + b * lg + c


def stochastic_regret_bound(T: int) -> float:
    """Overflow policy regret bound for i.i.d. arrivals."""
    L = ceil_log2(T)
    return 10 * math.sqrt(T) + 2 * L**3 + 13 * L**2 + 43 * L + 13


def permutation_regret_bound(T: int) -> float:
    """Overflow policy regret bound for the random permutation model."""
    L = ceil_log2(T)
    return 12 * math.sqrt(T) + 2 * L**3 + 9 * L**2 + 31 * L + 1


def relaxation_slack(n: int) -> float:
    """Additive gap allowed between ``OPT`` and ``OPT_f`` on ``n`` items."""
    return _polylog(max(n, 1), 4, 17, 11)


def ce_lower_slack(T: int) -> float:
    """Allowed excess of ``T·CE(F)`` over ``E[OPT]``."""
    return _polylog(T, 4, 17, 12)


def queue_bound(n: int) -> float:
    """``E[Q_n] <= 2√n`` for the exchangeable increments of length ``n``."""
    return 2 * math.sqrt(n)


def sign_permutation_bound(N: int) -> float:
    return 2 * math.sqrt(2 * N)


def phase_allowance(T_prev: int) -> float:
    """Expected bins a phase may use beyond its plan: ``2√(2 T_{k-1})``."""
    return 2 * math.sqrt(2 * T_prev)


def phase_total_bound(boundaries: Sequence[int], plan_opts: Sequence[float]) -> float:
    """``1 + Σ_k (OPT(X_{T_{k-1}}) + 2√(2 T_{k-1}))`` over the phases ``k = 1..K``."""
    if len(plan_opts) != len(boundaries) - 1:
        raise ValueError(f"{len(plan_opts)} plan values for {len(boundaries) - 1} phases")
    return 1 + sum(opt + phase_allowance(boundaries[k - 1]) for k, opt in enumerate(plan_opts, start=1))


def subsample_rhs(ground_opt: int, T: int, k: int) -> float:
    """Bound on ``E[OPT]`` of ``tau = ceil(T/2^k)`` items drawn without replacement."""
    tau = -(-T // 2**k)
    return ground_opt / 2**k + 2 * math.sqrt(tau) + _polylog(tau, 4, 17, 13)
