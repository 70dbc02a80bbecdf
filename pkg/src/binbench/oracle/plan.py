"""Integral plans: concrete item-to-bin assignments."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from binbench.model import Instance
from binbench.oracle.configurations import Configuration


@dataclass
class IntegralPlan:
    """Bins as lists of item ids, where an item id is the item's index in the instance."""

    capacity_den: int
    sizes: tuple[int, ...]
    bins: list[list[int]] = field(default_factory=list)
    optimal: bool = False
    method: str = ""

    @property
    def n_bins(self) -> int:
        return len(self.bins)

    @property
    def bin_of(self) -> dict[int, int]:
        return {item: b for b, items in enumerate(self.bins) for item in items}

    def loads(self) -> list[int]:
        return [sum(self.sizes[i] for i in items) for items in self.bins]

    def assignment_lines(self) -> list[str]:
        """``item_id -> bin_index`` lines in item order."""
        bin_of = self.bin_of
        return [f"{i} -> {bin_of[i]}" for i in sorted(bin_of)]


def validate_plan(plan: IntegralPlan, instance: Instance) -> Optional[str]:
    """Return a description of the first broken invariant, or ``None``."""
    if plan.sizes != instance.sizes:
        return "plan sizes differ from the instance"
    if plan.capacity_den != instance.capacity_den:
        return "plan capacity differs from the instance"
    seen: set[int] = set()
    for b, items in enumerate(plan.bins):
        if not items:
            return f"bin {b} is empty"
        for i in items:
            if not 0 <= i < len(instance):
                return f"bin {b} holds unknown item {i}"
            if i in seen:
                return f"item {i} is assigned twice"
            seen.add(i)
        load = sum(instance.sizes[i] for i in items)
        if load > instance.capacity_den:
            return f"bin {b} load {load} exceeds capacity {instance.capacity_den}"
    if len(seen) != len(instance):
        missing = sorted(set(range(len(instance))) - seen)
        return f"items {missing[:5]} are not assigned"
    return None


def items_by_size(instance: Instance, sizes: Sequence[int]) -> list[list[int]]:
    """Item ids of each distinct size, ascending id."""
    position = {s: k for k, s in enumerate(sizes)}
    groups: list[list[int]] = [[] for _ in sizes]
    for i, s in enumerate(instance.sizes):
        groups[position[s]].append(i)
    return groups


def instantiate(
    instance: Instance,
    sizes: Sequence[int],
    configurations: Iterable[tuple[Configuration, int]],
) -> tuple[list[list[int]], list[int]]:
    """Turn ``(configuration, copies)`` pairs into bins of concrete items.

    Bins are built configuration by configuration; within a bin the largest
    size class is filled first, and each class hands out its lowest item ids
    first. Slots with no item left stay empty and bins that end up empty are
    dropped. Returns ``(bins, leftover item ids)``.
    """
    groups = items_by_size(instance, sizes)
    cursor = [0] * len(sizes)
    classes = sorted(range(len(sizes)), key=lambda k: -sizes[k])
    bins: list[list[int]] = []
    for config, copies in configurations:
        for _ in range(copies):
            items: list[int] = []
            for k in classes:
                take = min(config.counts[k], len(groups[k]) - cursor[k])
                if take > 0:
                    items.extend(groups[k][cursor[k]:cursor[k] + take])
                    cursor[k] += take
            if items:
                bins.append(items)
    leftover = [i for k in range(len(sizes)) for i in groups[k][cursor[k]:]]
    return bins, sorted(leftover)
