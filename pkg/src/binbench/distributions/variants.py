"""Concrete distributions: discrete integer-size, uniform on (0,1), and two-point."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np

from binbench.config import CONTINUOUS_DEN
from binbench.distributions.base import DistributionSpec, DistributionSpecError


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


class DiscreteDistribution(DistributionSpec):
    """``P(X = s_j / B) = p_j`` with integer ``s_j`` in ``1..B-1``."""

    variant = "discrete"

    def __init__(
        self,
        capacity: int,
        support: Sequence[int],
        probs: Sequence[Fraction | str | int],
        name: Optional[str] = None,
    ) -> None:
        super().__init__(name)
        support = tuple(int(s) for s in support)
        probs = tuple(Fraction(p) for p in probs)
        if capacity < 2:
            raise DistributionSpecError(f"capacity must be >= 2, got {capacity}")
        if not support or len(support) != len(probs):
            raise DistributionSpecError("support and probs must be non-empty and of equal length")
        if any(b <= a for a, b in zip(support, support[1:])):
            raise DistributionSpecError(f"support must be strictly ascending: {support}")
        if support[0] < 1 or support[-1] > capacity - 1:
            raise DistributionSpecError(f"support must lie in 1..{capacity - 1}")
        if any(p <= 0 for p in probs):
            raise DistributionSpecError("probabilities must be positive")
        if sum(probs) != 1:
            raise DistributionSpecError(f"probabilities sum to {sum(probs)}, not 1")
        self._capacity = capacity
        self._support = support
        self._probs = probs
        self._float_probs = np.array([float(p) for p in probs])
        self._float_probs /= self._float_probs.sum()

    @property
    def den(self) -> int:
        return self._capacity

    @property
    def integer_sized(self) -> bool:
        return True

    def default_id(self) -> str:
        atoms = ",".join(f"{s}:{_frac_str(p)}" for s, p in zip(self._support, self._probs))
        return f"discrete-B{self._capacity}-{atoms}"

    def support(self) -> tuple[int, ...]:
        return self._support

    def probabilities(self) -> tuple[Fraction, ...]:
        return self._probs

    def cdf(self, y: Fraction) -> Fraction:
        return sum(
            (p for s, p in zip(self._support, self._probs) if Fraction(s, self._capacity) <= y),
            Fraction(0),
        )

    def interior_quantile(self, alpha: Fraction) -> Fraction:
        acc = Fraction(0)
        for s, p in zip(self._support, self._probs):
            acc += p
            if acc >= alpha:
                return Fraction(s, self._capacity)
        return Fraction(self._support[-1], self._capacity)

    def sample_values(self, n: int, rng: np.random.Generator) -> np.ndarray:
        idx = rng.choice(len(self._support), size=n, p=self._float_probs)
        return np.asarray(self._support, dtype=np.int64)[idx]

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant,
            "capacity": self._capacity,
            "support": list(self._support),
            "probs": [_frac_str(p) for p in self._probs],
        }


class UniformContinuous(DistributionSpec):
    """Uniform on (0, 1), quantized once onto ``1/den``."""

    variant = "uniform"

    def __init__(self, den: int = CONTINUOUS_DEN, name: Optional[str] = None) -> None:
        super().__init__(name)
        if den < 2:
            raise DistributionSpecError(f"den must be >= 2, got {den}")
        self._den = den

    @property
    def den(self) -> int:
        return self._den

    def default_id(self) -> str:
        return "uniform"

    def cdf(self, y: Fraction) -> Fraction:
        return min(max(Fraction(y), Fraction(0)), Fraction(1))

    def interior_quantile(self, alpha: Fraction) -> Fraction:
        return Fraction(alpha)

    def sample_values(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(1, self._den, size=n, dtype=np.int64)

    def mean(self) -> Fraction:
        return Fraction(1, 2)

    def to_dict(self) -> dict[str, Any]:
        return {"variant": self.variant, "den": self._den}


class TwoPoint(DistributionSpec):
    """Atoms at ``1/2 - eps`` and ``1/2 + eps``, each with probability 1/2.

    The default grid is the coarsest one on which both atoms are exact.
    """

    variant = "two_point"

    def __init__(
        self, epsilon: Fraction | str | float, den: Optional[int] = None, name: Optional[str] = None
    ) -> None:
        super().__init__(name)
        eps = Fraction(epsilon)
        if not 0 < eps < Fraction(1, 2):
            raise DistributionSpecError(f"epsilon must lie in (0, 1/2), got {eps}")
        self._eps = eps
        self._den = den or 2 * eps.denominator
        lo = (Fraction(1, 2) - eps) * self._den
        hi = (Fraction(1, 2) + eps) * self._den
        if lo.denominator != 1 or hi.denominator != 1:
            raise DistributionSpecError(f"atoms 1/2±{eps} are not exact on the grid 1/{self._den}")
        self._atoms = (int(lo), int(hi))

    @property
    def den(self) -> int:
        return self._den

    @property
    def epsilon(self) -> Fraction:
        return self._eps

    def default_id(self) -> str:
        return f"two-point-{_frac_str(self._eps)}"

    def support(self) -> tuple[int, ...]:
        return self._atoms

    def probabilities(self) -> tuple[Fraction, ...]:
        return (Fraction(1, 2), Fraction(1, 2))

    def cdf(self, y: Fraction) -> Fraction:
        lo, hi = (Fraction(a, self._den) for a in self._atoms)
        if y < lo:
            return Fraction(0)
        return Fraction(1, 2) if y < hi else Fraction(1)

    def interior_quantile(self, alpha: Fraction) -> Fraction:
        atom = self._atoms[0] if alpha <= Fraction(1, 2) else self._atoms[1]
        return Fraction(atom, self._den)

    def sample_values(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return np.asarray(self._atoms, dtype=np.int64)[rng.integers(0, 2, size=n)]

    def to_dict(self) -> dict[str, Any]:
        return {"variant": self.variant, "epsilon": _frac_str(self._eps), "den": self._den}
