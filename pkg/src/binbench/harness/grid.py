"""Experiment grids and the records they produce."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from binbench.config import (
    DEFAULT_BASE_SEED,
    DEFAULT_WORKERS,
    EXACT_NODE_LIMIT,
    EXACT_REFERENCE_MAX_B,
    FRACTIONAL_REFERENCE_MAX_T,
)
from binbench.distributions import (
    DistributionSpec,
    GroundSet,
    get_distribution,
    ground_set_family,
    list_ground_families,
)
from binbench.oracle import ORACLE_MODES, ExactBudget


class GridError(ValueError):
    """Invalid experiment grid."""


class OptReference(str, enum.Enum):
    EXACT = "exact"
    FRACTIONAL = "fractional"
    VOLUME = "volume"


@dataclass(frozen=True)
class Source:
    """Where a grid's arrivals come from: an i.i.d. distribution or a ground-set family."""

    name: str
    dist: Optional[DistributionSpec] = None
    family: Optional[str] = None

    @property
    def den(self) -> int:
        if self.dist is not None:
            return self.dist.den
        return ground_set_family(self.family, 1).instance.capacity_den

    @property
    def integer_sized(self) -> bool:
        return self.dist.integer_sized if self.dist is not None else True

    @property
    def permutation_model(self) -> bool:
        return self.family is not None

    def ground(self, T: int) -> GroundSet:
        if self.family is None:
            raise GridError(f"{self.name} is not a ground-set family")
        return ground_set_family(self.family, T)

    def support(self, T: int) -> Optional[tuple[int, ...]]:
        if self.dist is not None:
            return self.dist.support()
        return self.ground(T).instance.distinct()[0]


def resolve_source(name: str) -> Source:
    if name in list_ground_families():
        return Source(name, family=name)
    return Source(name, dist=get_distribution(name))


def default_reference(source: Source, T: int) -> OptReference:
    if source.integer_sized and source.den <= EXACT_REFERENCE_MAX_B:
        return OptReference.EXACT
    if T <= FRACTIONAL_REFERENCE_MAX_T:
        return OptReference.FRACTIONAL
    return OptReference.VOLUME


@dataclass
class ExperimentGrid:
    policies: list[str]
    sources: list[str]
    T_values: list[int]
    trials: int = 1
    base_seed: int = DEFAULT_BASE_SEED
    oracle_mode: str = "exact"
    #: ``None`` picks a reference per (source, T) with :func:`default_reference`.
    opt_reference: Optional[OptReference] = None
    stop_at: Optional[int] = None
    budget_ms: Optional[int] = None
    node_limit: int = EXACT_NODE_LIMIT
    workers: int = DEFAULT_WORKERS
    timing: bool = False
    extra: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.policies:
            raise GridError("grid needs at least one policy")
        if not self.sources:
            raise GridError("grid needs at least one distribution or ground set")
        if not self.T_values:
            raise GridError("grid needs at least one T")
        if self.trials < 1:
            raise GridError(f"trials must be >= 1, got {self.trials}")
        if any(T < 1 for T in self.T_values):
            raise GridError("every T must be >= 1")
        if list(self.T_values) != sorted(self.T_values):
            raise GridError("T_values must be ascending")
        if self.oracle_mode not in ORACLE_MODES:
            raise GridError(f"oracle_mode must be one of {ORACLE_MODES}, got {self.oracle_mode!r}")
        if self.opt_reference is not None:
            self.opt_reference = OptReference(self.opt_reference)
        if self.stop_at is not None and not 0 <= self.stop_at <= self.T_values[0]:
            raise GridError(f"stop_at must lie in [0, {self.T_values[0]}], got {self.stop_at}")
        if self.workers < 1:
            raise GridError(f"workers must be >= 1, got {self.workers}")

    @property
    def budget(self) -> ExactBudget:
        return ExactBudget(node_limit=self.node_limit, time_limit_ms=self.budget_ms)

    def to_dict(self) -> dict[str, Any]:
        return {
            "policies": list(self.policies),
            "sources": list(self.sources),
            "T_values": list(self.T_values),
            "trials": self.trials,
            "base_seed": self.base_seed,
            "oracle_mode": self.oracle_mode,
            "opt_reference": None if self.opt_reference is None else self.opt_reference.value,
            "stop_at": self.stop_at,
            "budget_ms": self.budget_ms,
            "node_limit": self.node_limit,
            "workers": self.workers,
            "timing": self.timing,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentGrid":
        data = dict(data)
        # ``dist`` and ``T`` are accepted as single-source shorthands
        if "dist" in data and "sources" not in data:
            dist = data.pop("dist")
            data["sources"] = dist if isinstance(dist, list) else [dist]
        if "T" in data and "T_values" not in data:
            T = data.pop("T")
            data["T_values"] = T if isinstance(T, list) else [T]
        if isinstance(data.get("policies"), str):
            data["policies"] = [data["policies"]]
        known = set(cls.__dataclass_fields__) - {"extra"}
        extra = {k: data.pop(k) for k in list(data) if k not in known}
        try:
            return cls(**data, extra=extra)
        except TypeError as e:
            raise GridError(f"bad grid: {e}") from None


def load_grid(path: str | Path) -> ExperimentGrid:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise GridError(f"{path}: not valid JSON ({e})") from None
    if not isinstance(data, dict):
        raise GridError(f"{path}: expected a JSON object")
    return ExperimentGrid.from_dict(data)


@dataclass
class TrialRecord:
    policy: str
    dist: str
    T: int
    trial: int
    seed: int
    bins: Optional[int]
    opt: Optional[int] = None
    opt_f: Optional[float] = None
    regret: Optional[int] = None
    runtime_ms: Optional[float] = None
    #: Why a value is missing or came from a fallback; not written to CSV.
    note: str = field(default="", compare=False)
