"""Phase schedule and slot book for the overflow policy.

A slot book lists the items of an offline plan in ascending size (ties by
arrival index) together with the plan bin each one sits in. Online items
claim the least vacant slot at least as large as themselves. Vacant slots
are found with ``bisect`` plus a path-compressed "next vacant index" array,
so each query costs ``O(log n)`` amortised.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Optional

from binbench.model import Instance
from binbench.oracle import IntegralPlan, validate_plan


class PlanMismatch(ValueError):
    """The offline plan does not pack exactly the history items."""

    def __init__(self, reason: str) -> None:
        self.reason = reason
        super().__init__(f"plan does not match the history: {reason}")


@dataclass(frozen=True)
class PhaseSchedule:
    T: int
    K: int
    #: ``T_0, ..., T_K`` with ``T_k = ceil(T / 2^(K-k))``.
    boundaries: tuple[int, ...]


def phase_boundaries(T: int) -> PhaseSchedule:
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    K = (T - 1).bit_length()  # ceil(log2 T)
    return PhaseSchedule(T, K, tuple(-(-T // 2 ** (K - k)) for k in range(K + 1)))


@dataclass
class SlotBook:
    sorted_sizes: list[int]
    slot_item: list[int]
    slot_bin: list[int]
    vacancy: list[bool] = field(default_factory=list)
    _next: list[int] = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        n = len(self.sorted_sizes)
        if not self.vacancy:
            self.vacancy = [True] * n
        # _next[i] points at a candidate vacant index >= i; n is the sentinel
        self._next = list(range(n + 1))

    def __len__(self) -> int:
        return len(self.sorted_sizes)

    def _find(self, i: int) -> int:
        root = i
        while self._next[root] != root:
            root = self._next[root]
        while self._next[i] != root:
            self._next[i], i = root, self._next[i]
        return root

    def first_vacant_from(self, i: int) -> Optional[int]:
        s = self._find(i)
        return None if s >= len(self.sorted_sizes) else s

    def occupy(self, s: int) -> None:
        if not self.vacancy[s]:
            raise ValueError(f"slot {s} is already occupied")
        self.vacancy[s] = False
        self._next[s] = s + 1

    def vacant_count(self) -> int:
        return sum(self.vacancy)


def build_slot_book(history: Instance, plan: IntegralPlan) -> SlotBook:
    """Slots for every history item, ascending by ``(size, arrival index)``."""
    problem = validate_plan(plan, history)
    if problem is not None:
        raise PlanMismatch(problem)
    bin_of = plan.bin_of
    order = sorted(range(len(history)), key=lambda i: (history.sizes[i], i))
    return SlotBook(
        sorted_sizes=[history.sizes[i] for i in order],
        slot_item=order,
        slot_bin=[bin_of[i] for i in order],
    )


def vacancy_search(book: SlotBook, x: int) -> Optional[int]:
    """The least vacant slot whose size is at least ``x``, or ``None``."""
    return book.first_vacant_from(bisect_left(book.sorted_sizes, x))
