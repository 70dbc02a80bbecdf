"""Online packing state shared by every policy.

Bins are append-only: they are never compacted or reordered, so a bin index
stays valid for the whole run. Full bins stay in the list but drop out of the
level histogram.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


class PackingError(Exception):
    """Base class for illegal placements."""


class CapacityExceeded(PackingError):
    def __init__(self, bin_index: int, load: int, item: int, capacity: int) -> None:
        self.bin_index = bin_index
        self.load = load
        self.item = item
        self.capacity = capacity
        super().__init__(
            f"item {item} does not fit bin {bin_index} (load {load}, capacity {capacity})"
        )


class BadIndex(PackingError):
    def __init__(self, bin_index: int, open_bins: int) -> None:
        self.bin_index = bin_index
        self.open_bins = open_bins
        super().__init__(f"bin {bin_index} does not exist ({open_bins} open bins)")


@dataclass(frozen=True)
class Placement:
    """Where an item goes: an existing bin (``bin_index``) or a new bin (``None``)."""

    bin_index: Optional[int] = None

    @property
    def is_new(self) -> bool:
        return self.bin_index is None

    @classmethod
    def existing(cls, bin_index: int) -> "Placement":
        return cls(bin_index)


NEW_BIN = Placement(None)


@dataclass
class Bin:
    load: int = 0
    item_ids: list[int] = field(default_factory=list)
    item_sizes: list[int] = field(default_factory=list)


class PackingState:
    """Open bins, their loads, and the level histogram ``N(h)``.

    ``level_histogram[h]`` counts bins with load ``h`` for ``0 < h < DEN``.
    ``bins_at_level`` indexes the same bins by level so policies can find the
    lowest-index bin at a level without scanning.
    """

    def __init__(self, capacity_den: int) -> None:
        self.capacity_den = capacity_den
        self.bins: list[Bin] = []
        self.level_histogram: dict[int, int] = {}
        self.bins_at_level: dict[int, set[int]] = {}
        self.opened_total = 0
        self._next_item_id = 0

    def __len__(self) -> int:
        return len(self.bins)

    def residual(self, bin_index: int) -> int:
        return self.capacity_den - self.bins[bin_index].load

    def lowest_bin_at(self, level: int) -> Optional[int]:
        members = self.bins_at_level.get(level)
        return min(members) if members else None

    def nonempty_levels(self) -> list[int]:
        return sorted(self.level_histogram)

    def loads(self) -> list[int]:
        return [b.load for b in self.bins]

    def _leave_level(self, level: int, bin_index: int) -> None:
        if 0 < level < self.capacity_den:
            self.level_histogram[level] -= 1
            if self.level_histogram[level] == 0:
                del self.level_histogram[level]
            members = self.bins_at_level[level]
            members.discard(bin_index)
            if not members:
                del self.bins_at_level[level]

    def _enter_level(self, level: int, bin_index: int) -> None:
        if 0 < level < self.capacity_den:
            self.level_histogram[level] = self.level_histogram.get(level, 0) + 1
            self.bins_at_level.setdefault(level, set()).add(bin_index)

    def copy(self) -> "PackingState":
        other = PackingState(self.capacity_den)
        other.bins = [Bin(b.load, list(b.item_ids), list(b.item_sizes)) for b in self.bins]
        other.level_histogram = dict(self.level_histogram)
        other.bins_at_level = {h: set(m) for h, m in self.bins_at_level.items()}
        other.opened_total = self.opened_total
        other._next_item_id = self._next_item_id
        return other


def place_item(
    state: PackingState, item: int, placement: Placement, item_id: Optional[int] = None
) -> PackingState:
    """Pack ``item`` according to ``placement``; mutates and returns ``state``.

    ``item_id`` defaults to the arrival counter of the state.
    """
    if item_id is None:
        item_id = state._next_item_id
    state._next_item_id = max(state._next_item_id, item_id + 1)

    if placement.is_new:
        if item > state.capacity_den:
            raise CapacityExceeded(len(state.bins), 0, item, state.capacity_den)
        index = len(state.bins)
        state.bins.append(Bin(item, [item_id], [item]))
        state.opened_total += 1
        state._enter_level(item, index)
        return state

    index = placement.bin_index
    if index < 0 or index >= len(state.bins):
        raise BadIndex(index, len(state.bins))
    target = state.bins[index]
    if target.load + item > state.capacity_den:
        raise CapacityExceeded(index, target.load, item, state.capacity_den)
    state._leave_level(target.load, index)
    target.load += item
    target.item_ids.append(item_id)
    target.item_sizes.append(item)
    state._enter_level(target.load, index)
    return state


def bins_used(state: PackingState) -> int:
    return state.opened_total


@dataclass(frozen=True)
class Violation:
    """First inconsistency found by :func:`validate_state`."""

    kind: str
    message: str
    level: Optional[int] = None
    bin_index: Optional[int] = None


def validate_state(state: PackingState) -> Optional[Violation]:
    """Recompute loads and the histogram from scratch; ``None`` means ok."""
    recount: dict[int, int] = {}
    for i, b in enumerate(state.bins):
        if b.load != sum(b.item_sizes):
            return Violation("load", f"bin {i} load {b.load} != sum {sum(b.item_sizes)}", bin_index=i)
        if b.load > state.capacity_den:
            return Violation("capacity", f"bin {i} load {b.load} exceeds {state.capacity_den}", bin_index=i)
        if not b.item_ids:
            return Violation("empty", f"bin {i} holds no item", bin_index=i)
        if 0 < b.load < state.capacity_den:
            recount[b.load] = recount.get(b.load, 0) + 1

    for h in sorted(set(recount) | set(state.level_histogram)):
        if recount.get(h, 0) != state.level_histogram.get(h, 0):
            return Violation(
                "histogram",
                f"level {h}: histogram says {state.level_histogram.get(h, 0)}, bins say {recount.get(h, 0)}",
                level=h,
            )
        members = state.bins_at_level.get(h, set())
        if len(members) != recount.get(h, 0) or any(state.bins[i].load != h for i in members):
            return Violation("index", f"level {h}: level index out of sync", level=h)

    if state.opened_total != len(state.bins):
        return Violation("opened", f"opened_total {state.opened_total} != {len(state.bins)} bins")
    return None
