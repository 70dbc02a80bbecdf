"""Base class and run result shared by every online policy."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from binbench.model import Instance, PackingState, Placement, place_item

log = logging.getLogger(__name__)

StepFunction = Callable[[PackingState, int], Placement]


class HorizonMismatch(ValueError):
    def __init__(self, T: int, arrivals: int) -> None:
        self.T = T
        self.arrivals = arrivals
        super().__init__(f"horizon T={T} but {arrivals} arrivals were given")


@dataclass
class RunResult:
    policy: str
    state: PackingState
    T: int
    #: Items actually packed; smaller than ``T`` when the run stopped early.
    placed: int
    trace: list[Any] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def bins_used(self) -> int:
        return self.state.opened_total


class OnlinePolicy(ABC):
    """An online packing rule. Subclasses see one item at a time, in arrival order."""

    #: Registry key, e.g. ``best-fit``.
    name: str = ""
    #: True when the rule only makes sense on an integer grid ``DEN = B``.
    integer_sizes_only: bool = False

    @abstractmethod
    def run(
        self,
        arrivals: Instance,
        T: Optional[int] = None,
        seed: int = 0,
        stop_at: Optional[int] = None,
        **options: Any,
    ) -> RunResult:
        """Pack ``arrivals`` (``T`` items) and return the final state.

        ``stop_at`` ends the run after that many items, with the policy still
        believing the horizon is ``T``.
        """

    @staticmethod
    def horizon(arrivals: Instance, T: Optional[int], stop_at: Optional[int]) -> tuple[int, int]:
        """Validate ``T`` and ``stop_at``; return ``(T, number of items to pack)``."""
        T = len(arrivals) if T is None else T
        if T != len(arrivals):
            raise HorizonMismatch(T, len(arrivals))
        n = T if stop_at is None else stop_at
        if not 0 <= n <= T:
            raise ValueError(f"stop_at must lie in [0, {T}], got {stop_at}")
        return T, n

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class StepPolicy(OnlinePolicy):
    """A policy given by a pure step function ``(state, item) -> Placement``."""

    def __init__(self, name: str, step: StepFunction, integer_sizes_only: bool = False) -> None:
        self.name = name
        self.step = step
        self.integer_sizes_only = integer_sizes_only

    def run(
        self,
        arrivals: Instance,
        T: Optional[int] = None,
        seed: int = 0,
        stop_at: Optional[int] = None,
        **options: Any,
    ) -> RunResult:
        T, n = self.horizon(arrivals, T, stop_at)
        state = PackingState(arrivals.capacity_den)
        for t in range(n):
            x = arrivals[t]
            place_item(state, x, self.step(state, x), item_id=t)
        return RunResult(self.name, state, T, n)
