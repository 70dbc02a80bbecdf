"""JSON distribution spec files.

Examples::

    {"variant": "discrete", "capacity": 9, "support": [2, 3], "probs": ["35/48", "13/48"]}
    {"variant": "uniform"}
    {"variant": "two_point", "epsilon": "1/10"}

Rationals are ``"num/den"`` strings so probabilities stay exact.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from binbench.config import CONTINUOUS_DEN
from binbench.distributions.base import DistributionSpec, DistributionSpecError
from binbench.distributions.variants import DiscreteDistribution, TwoPoint, UniformContinuous


def _rational(value: Any, key: str) -> Fraction:
    if isinstance(value, float):
        raise DistributionSpecError(f"{key}: write rationals as \"num/den\" strings, got {value!r}")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise DistributionSpecError(f"{key}: cannot parse {value!r} as a rational") from None


def spec_from_dict(data: dict[str, Any]) -> DistributionSpec:
    variant = data.get("variant")
    name = data.get("name")
    if variant == "discrete":
        try:
            return DiscreteDistribution(
                int(data["capacity"]),
                [int(s) for s in data["support"]],
                [_rational(p, "probs") for p in data["probs"]],
                name=name,
            )
        except KeyError as e:
            raise DistributionSpecError(f"discrete spec is missing {e.args[0]!r}") from None
    if variant == "uniform":
        return UniformContinuous(int(data.get("den", CONTINUOUS_DEN)), name=name)
    if variant == "two_point":
        if "epsilon" not in data:
            raise DistributionSpecError("two_point spec is missing 'epsilon'")
        den = data.get("den")
        return TwoPoint(_rational(data["epsilon"], "epsilon"), int(den) if den else None, name=name)
    raise DistributionSpecError(f"unknown variant {variant!r}")


def load_spec(path: str | Path) -> DistributionSpec:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise DistributionSpecError(f"{path}: invalid JSON ({e})") from None
    if not isinstance(data, dict):
        raise DistributionSpecError(f"{path}: expected a JSON object")
    return spec_from_dict(data)


def dump_spec(dist: DistributionSpec, path: str | Path) -> None:
    data = dist.to_dict()
    if dist.spec_id != dist.default_id():
        data["name"] = dist.spec_id
    Path(path).write_text(json.dumps(data, indent=2) + "\n")
