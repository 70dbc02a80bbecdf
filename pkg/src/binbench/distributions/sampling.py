"""Quantiles, quantile instances, samplers, and empirical frequencies."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from binbench.distributions.base import DistributionSpec, UnknownSize
from binbench.distributions.rng import make_rng
from binbench.model import Instance


def quantile(dist: DistributionSpec, alpha: Fraction | int | str) -> Fraction:
    """``inf {y : F(y) >= alpha}`` with ``F^{-1}(0) = 0`` and ``F^{-1}(1) = 1``."""
    alpha = Fraction(alpha)
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if alpha == 0:
        return Fraction(0)
    if alpha == 1:
        return Fraction(1)
    return dist.interior_quantile(alpha)


def quantile_instance(dist: DistributionSpec, T: int, shifted: bool = True) -> Instance:
    """The ``T`` quantiles at ``i/T`` for ``i = 1..T`` (shifted) or ``0..T-1``.

    Zero quantiles are dropped. Quantiles off the size grid round up, so every
    item is at least its true quantile.
    """
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    den = dist.den
    start = 1 if shifted else 0
    values = []
    for i in range(start, start + T):
        q = quantile(dist, Fraction(i, T))
        if q == 0:
            continue
        values.append(math.ceil(q * den))
    return Instance(den, tuple(values))


def sample_iid(dist: DistributionSpec, T: int, seed: int) -> Instance:
    if T < 0:
        raise ValueError(f"T must be >= 0, got {T}")
    if T == 0:
        return Instance(dist.den, ())
    values = dist.sample_values(T, make_rng(seed))
    return Instance(dist.den, tuple(int(v) for v in values))


@dataclass(frozen=True)
class GroundSet:
    """The adversarial multiset of the random permutation model, stored ascending."""

    instance: Instance

    def __post_init__(self) -> None:
        object.__setattr__(self, "instance", self.instance.sorted())

    def __len__(self) -> int:
        return len(self.instance)

    @classmethod
    def from_values(cls, values: Sequence[int], den: int) -> "GroundSet":
        return cls(Instance(den, tuple(values)))


def sample_permutation(ground: GroundSet, seed: int) -> Instance:
    """A uniformly random arrival order of the ground set."""
    order = make_rng(seed).permutation(len(ground))
    sizes = ground.instance.sizes
    return Instance(ground.instance.capacity_den, tuple(sizes[int(i)] for i in order))


def pad_ground_set(ground: GroundSet, multiple: int) -> GroundSet:
    """Append full-bin items until the size is a multiple of ``multiple``."""
    extra = (-len(ground)) % multiple
    den = ground.instance.capacity_den
    return GroundSet(ground.instance.extend([den] * extra))


def empirical_pmf(history: Sequence[int] | Instance, support: Sequence[int]) -> tuple[Fraction, ...]:
    """``p̂_j = (# of s_j among the history) / t``."""
    sizes = history.sizes if isinstance(history, Instance) else tuple(history)
    t = len(sizes)
    if t < 1:
        raise ValueError("empirical_pmf needs at least one observation")
    position = {s: j for j, s in enumerate(support)}
    counts = [0] * len(support)
    for i, s in enumerate(sizes):
        j = position.get(s)
        if j is None:
            raise UnknownSize(s, i)
        counts[j] += 1
    return tuple(Fraction(c, t) for c in counts)
