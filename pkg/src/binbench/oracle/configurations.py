"""Bin configurations: multiplicity vectors of distinct sizes that fit one bin."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from binbench.config import MAX_CONFIGURATIONS

log = logging.getLogger(__name__)


class OracleError(Exception):
    """Base class for offline oracle failures."""


class TooManyConfigurations(OracleError):
    def __init__(self, limit: int, sizes: Sequence[int], capacity: int) -> None:
        self.limit = limit
        self.sizes = tuple(sizes)
        self.capacity = capacity
        super().__init__(
            f"more than {limit} maximal configurations for {len(self.sizes)} sizes at capacity {capacity}"
        )


@dataclass(frozen=True)
class Configuration:
    """``counts[i]`` items of the ``i``-th distinct size in one bin."""

    counts: tuple[int, ...]

    def load(self, sizes: Sequence[int]) -> int:
        return sum(t * s for t, s in zip(self.counts, sizes))

    def fits(self, sizes: Sequence[int], capacity: int) -> bool:
        return any(self.counts) and all(t >= 0 for t in self.counts) and self.load(sizes) <= capacity

    def is_maximal(self, sizes: Sequence[int], capacity: int) -> bool:
        return capacity - self.load(sizes) < min(sizes)

    def items(self) -> int:
        return sum(self.counts)

    def label(self, sizes: Sequence[int]) -> str:
        """Whitespace-free name such as ``2x4+1x2``: count, then size, largest sizes first."""
        parts = sorted(((s, t) for s, t in zip(sizes, self.counts) if t), key=lambda p: -p[0])
        return "+".join(f"{t}x{s}" for s, t in parts) or "empty"


def singleton_configurations(sizes: Sequence[int], capacity: int) -> list[Configuration]:
    """One configuration per size that fits: ``floor(capacity / s_i)`` copies of it."""
    out = []
    for i, s in enumerate(sizes):
        if s <= capacity:
            counts = [0] * len(sizes)
            counts[i] = capacity // s
            out.append(Configuration(tuple(counts)))
    return out


def enumerate_configurations(
    sizes: Sequence[int], capacity: int, limit: int = MAX_CONFIGURATIONS
) -> list[Configuration]:
    """All maximal configurations over distinct ``sizes``.

    A configuration is maximal when no size still fits in the residual space.
    Every feasible configuration is dominated by a maximal one, so under
    covering constraints the maximal ones suffice. Sizes larger than the
    capacity get count 0 everywhere; if none fit the result is empty.

    Raises :class:`TooManyConfigurations` once more than ``limit`` are found.
    Output order is lexicographically descending in the counts of the
    largest sizes first, which is deterministic.
    """
    sizes = tuple(sizes)
    fitting = [i for i, s in enumerate(sizes) if s <= capacity]
    if not fitting:
        return []
    smallest = min(sizes[i] for i in fitting)
    # largest sizes first keeps the recursion shallow
    order = sorted(fitting, key=lambda i: -sizes[i])
    out: list[Configuration] = []
    counts = [0] * len(sizes)

    def recurse(pos: int, residual: int) -> None:
        if pos == len(order):
            if residual < smallest:
                if len(out) >= limit:
                    raise TooManyConfigurations(limit, sizes, capacity)
                out.append(Configuration(tuple(counts)))
            return
        i = order[pos]
        for t in range(residual // sizes[i], -1, -1):
            counts[i] = t
            recurse(pos + 1, residual - t * sizes[i])
        counts[i] = 0

    recurse(0, capacity)
    log.debug("enumerated %d maximal configurations for %d sizes", len(out), len(sizes))
    return out
