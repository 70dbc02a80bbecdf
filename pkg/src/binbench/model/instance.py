"""Exact item sizes and instances, plus the plain-text instance file format.

Sizes are integer numerators over a per-instance denominator ``DEN`` (the
bin capacity). All feasibility checks downstream are integer comparisons.

File format::

    capacity <DEN>
    <size value>
    <size value>
    ...
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Sequence


class InstanceFormatError(ValueError):
    """Raised when a size or an instance file violates the exact-size contract."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True, order=True)
class Size:
    """An item size ``value / den`` with ``0 < value < den``."""

    value: int
    den: int = field(compare=False)

    def __post_init__(self) -> None:
        if self.den < 2:
            raise InstanceFormatError(f"denominator must be >= 2, got {self.den}")
        if not 0 < self.value < self.den:
            raise InstanceFormatError(
                f"size {self.value}/{self.den} is outside the open interval (0, 1)"
            )

    @classmethod
    def from_fraction(cls, x: Fraction | float | str, den: int) -> "Size":
        """Quantize ``x`` onto the grid ``1/den`` (round half up)."""
        frac = Fraction(x)
        value = int(frac * den + Fraction(1, 2))
        return cls(value, den)

    def as_fraction(self) -> Fraction:
        return Fraction(self.value, self.den)

    def __float__(self) -> float:
        return self.value / self.den


@dataclass(frozen=True)
class Instance:
    """A finite multiset of sizes in arrival (or sorted) order.

    ``sizes`` holds integer numerators over ``capacity_den``. Values equal to
    ``capacity_den`` are full-bin items; they only arise from quantile value 1
    and from padding, never from sampling.
    """

    capacity_den: int
    sizes: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.capacity_den < 2:
            raise InstanceFormatError(f"capacity must be >= 2, got {self.capacity_den}")
        sizes = tuple(int(s) for s in self.sizes)
        for s in sizes:
            if not 0 < s <= self.capacity_den:
                raise InstanceFormatError(
                    f"size {s} is outside (0, {self.capacity_den}]"
                )
        object.__setattr__(self, "sizes", sizes)

    def __len__(self) -> int:
        return len(self.sizes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.sizes)

    def __getitem__(self, index: int) -> int:
        return self.sizes[index]

    @property
    def total(self) -> int:
        return sum(self.sizes)

    def item(self, index: int) -> Size:
        return Size(self.sizes[index], self.capacity_den)

    def prefix(self, n: int) -> "Instance":
        return Instance(self.capacity_den, self.sizes[:n])

    def sorted(self) -> "Instance":
        return Instance(self.capacity_den, tuple(sorted(self.sizes)))

    def extend(self, more: Iterable[int]) -> "Instance":
        return Instance(self.capacity_den, self.sizes + tuple(more))

    def distinct(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Return ``(sizes ascending, multiplicities)``: the ``s_i`` and ``b_i``."""
        counts: dict[int, int] = {}
        for s in self.sizes:
            counts[s] = counts.get(s, 0) + 1
        keys = tuple(sorted(counts))
        return keys, tuple(counts[k] for k in keys)

    @classmethod
    def from_fractions(cls, values: Sequence[Fraction | float | str], den: int) -> "Instance":
        return cls(den, tuple(Size.from_fraction(v, den).value for v in values))


def volume_bound(instance: Instance) -> int:
    """``ceil(sum of sizes / DEN)``, the trivial lower bound on any packing."""
    return -(-instance.total // instance.capacity_den)


# ── File format ─────────────────────────────────────────────────────────────


def format_instance(instance: Instance) -> str:
    lines = [f"capacity {instance.capacity_den}"]
    lines.extend(str(s) for s in instance.sizes)
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> Instance:
    den: int | None = None
    sizes: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if den is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "capacity":
                raise InstanceFormatError("expected 'capacity <DEN>'", lineno)
            try:
                den = int(parts[1])
            except ValueError:
                raise InstanceFormatError(f"bad capacity {parts[1]!r}", lineno) from None
            continue
        try:
            sizes.append(int(line))
        except ValueError:
            raise InstanceFormatError(f"bad size {line!r}", lineno) from None
    if den is None:
        raise InstanceFormatError("missing capacity header")
    return Instance(den, tuple(sizes))


def read_instance(path: str | Path) -> Instance:
    return parse_instance(Path(path).read_text())


def write_instance(instance: Instance, path: str | Path) -> None:
    Path(path).write_text(format_instance(instance))
