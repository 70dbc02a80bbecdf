"""Base class for item-size distributions.

A distribution knows its grid denominator, its CDF and quantile function in
exact rational arithmetic, and how to draw integer size values from a numpy
generator. Policies never see these objects; only samplers and oracles do.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Any, Optional

import numpy as np


class DistributionSpecError(ValueError):
    """Raised for malformed distribution parameters or spec files."""


class UnknownSize(ValueError):
    def __init__(self, size: int, position: int) -> None:
        self.size = size
        self.position = position
        super().__init__(f"item {position} has size {size}, which is not in the support")

    def __reduce__(self):
        return (UnknownSize, (self.size, self.position))


class DistributionSpec(ABC):
    """Abstract item-size distribution on (0, 1)."""

    #: Short tag used in spec files (``discrete``, ``uniform``, ``two_point``).
    variant: str = ""

    def __init__(self, name: Optional[str] = None) -> None:
        self._name = name

    @property
    @abstractmethod
    def den(self) -> int:
        """Denominator of the size grid samples are quantized onto."""

    @property
    def spec_id(self) -> str:
        return self._name or self.default_id()

    @abstractmethod
    def default_id(self) -> str:
        """Identifier derived from the parameters, used when no preset name is set."""

    @abstractmethod
    def cdf(self, y: Fraction) -> Fraction:
        """``P(X <= y)``."""

    @abstractmethod
    def interior_quantile(self, alpha: Fraction) -> Fraction:
        """``inf {y : F(y) >= alpha}`` for ``0 < alpha < 1``."""

    @abstractmethod
    def sample_values(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Draw ``n`` integer size values over :attr:`den`."""

    @abstractmethod
    def to_dict(self) -> dict[str, Any]:
        """Spec-file representation with rationals as ``"num/den"`` strings."""

    def support(self) -> Optional[tuple[int, ...]]:
        """Integer support values for atomic distributions, else ``None``."""
        return None

    def probabilities(self) -> Optional[tuple[Fraction, ...]]:
        return None

    @property
    def integer_sized(self) -> bool:
        """True when sizes live on a small integer grid ``1..B-1`` with ``DEN = B``."""
        return False

    def mean(self) -> Fraction:
        support, probs = self.support(), self.probabilities()
        if support is None or probs is None:
            raise NotImplementedError(f"{type(self).__name__} has no finite support")
        return sum((Fraction(s, self.den) * p for s, p in zip(support, probs)), Fraction(0))

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.spec_id}>"
