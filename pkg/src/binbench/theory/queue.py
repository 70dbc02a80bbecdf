"""The Lindley recursion ``Q_n = max(0, Q_{n-1} + ξ_n)`` with ``Q_0 = 0``.

Closed form: ``Q_n = S_n - min_{0<=k<=n} S_k`` for partial sums ``S``. When
the tokens sum to zero this is the largest negative partial sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class QueueTrajectory:
    trajectory: tuple[int, ...]
    final: int
    max_negative_partial_sum: int


def lindley_queue(tokens: Sequence[int]) -> QueueTrajectory:
    q = 0
    path = [0]
    s = 0
    worst = 0
    for xi in tokens:
        q = max(0, q + int(xi))
        path.append(q)
        s += int(xi)
        worst = max(worst, -s)
    if s == 0:
        assert q == worst, f"queue identity broken: final {q}, max negative partial sum {worst}"
    return QueueTrajectory(tuple(path), q, worst)


def lindley_final(tokens: Sequence[int] | np.ndarray) -> int:
    arr = np.asarray(tokens, dtype=np.int64)
    if arr.size == 0:
        return 0
    s = np.cumsum(arr)
    return int(s[-1] - min(0, int(s.min())))


def queue_finals(tokens: np.ndarray) -> np.ndarray:
    """Final queue length of every row of a 2-D token array."""
    tokens = np.asarray(tokens, dtype=np.int64)
    if tokens.shape[1] == 0:
        return np.zeros(tokens.shape[0], dtype=np.int64)
    s = np.cumsum(tokens, axis=1)
    return s[:, -1] - np.minimum(0, s.min(axis=1))
