"""Classical online rules: Best Fit, First Fit, Next Fit, Sum-of-Squares.

Each rule is a pure function of the current state and the arriving item.
"""

from __future__ import annotations

from binbench.model import NEW_BIN, PackingState, Placement
from binbench.policies.base import StepPolicy


def best_fit_step(state: PackingState, x: int) -> Placement:
    """The fullest bin that still fits ``x``; lowest index among equally full bins."""
    room = state.capacity_den - x
    levels = [h for h in state.level_histogram if h <= room]
    if not levels:
        return NEW_BIN
    return Placement.existing(state.lowest_bin_at(max(levels)))


def first_fit_step(state: PackingState, x: int) -> Placement:
    room = state.capacity_den - x
    for i, b in enumerate(state.bins):
        if b.load <= room:
            return Placement.existing(i)
    return NEW_BIN


def next_fit_step(state: PackingState, x: int) -> Placement:
    """Only the most recently opened bin is active; earlier bins are closed for good."""
    if state.bins and state.bins[-1].load + x <= state.capacity_den:
        return Placement.existing(len(state.bins) - 1)
    return NEW_BIN


def sum_of_squares_delta(state: PackingState, source: int, x: int) -> int:
    """Change of ``Σ_h N(h)²`` when a bin at level ``source`` (0 = new bin) receives ``x``."""
    hist = state.level_histogram
    target = source + x
    delta = 0
    if source > 0:
        n = hist[source]
        delta += (n - 1) ** 2 - n ** 2
    if target < state.capacity_den:
        n = hist.get(target, 0)
        delta += (n + 1) ** 2 - n ** 2
    return delta


def sum_of_squares_step(state: PackingState, x: int) -> Placement:
    """Minimise ``Σ_{h=1}^{B-1} N(h)²`` after packing.

    Ties prefer the placement leaving the fuller bin, then the lower source level.
    """
    room = state.capacity_den - x
    best_key = (sum_of_squares_delta(state, 0, x), -x, 0)
    best_level = 0
    for h in state.level_histogram:
        if h > room:
            continue
        key = (sum_of_squares_delta(state, h, x), -(h + x), h)
        if key < best_key:
            best_key, best_level = key, h
    if best_level == 0:
        return NEW_BIN
    return Placement.existing(state.lowest_bin_at(best_level))


class BestFit(StepPolicy):
    def __init__(self) -> None:
        super().__init__("best-fit", best_fit_step)


class FirstFit(StepPolicy):
    def __init__(self) -> None:
        super().__init__("first-fit", first_fit_step)


class NextFit(StepPolicy):
    def __init__(self) -> None:
        super().__init__("next-fit", next_fit_step)


class SumOfSquares(StepPolicy):
    def __init__(self) -> None:
        super().__init__("sum-of-squares", sum_of_squares_step, integer_sizes_only=True)
