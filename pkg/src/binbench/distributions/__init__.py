"""Distribution registry and factory.

Usage::

    from binbench.distributions import get_distribution, ground_set_family

    dist = get_distribution("bounded-waste")          # named preset
    dist = get_distribution("specs/my_dist.json")     # spec file
    ground = ground_set_family("two-atom", T=64)
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path
from typing import Callable

from binbench.distributions.base import DistributionSpec, DistributionSpecError, UnknownSize
from binbench.distributions.rng import RNG_NAME, RNG_VERSION, derive_seed, make_rng, trial_seed
from binbench.distributions.sampling import (
    GroundSet,
    empirical_pmf,
    pad_ground_set,
    quantile,
    quantile_instance,
    sample_iid,
    sample_permutation,
)
from binbench.distributions.spec_file import dump_spec, load_spec, spec_from_dict
from binbench.distributions.variants import DiscreteDistribution, TwoPoint, UniformContinuous
from binbench.model import Instance

F = Fraction

_PRESETS: dict[str, Callable[[], DistributionSpec]] = {
    "bounded-waste": lambda: DiscreteDistribution(
        9, [2, 3], [F(35, 48), F(13, 48)], name="bounded-waste"
    ),
    "perfectly-packable": lambda: DiscreteDistribution(
        10, [1, 3, 4, 5, 8], [F(1, 4), F(1, 4), F(1, 8), F(1, 4), F(1, 8)], name="perfectly-packable"
    ),
    "linear-waste": lambda: DiscreteDistribution(
        10, [3, 4, 5, 8], [F(1, 4)] * 4, name="linear-waste"
    ),
    "uniform": lambda: UniformContinuous(name="uniform"),
    "two-point": lambda: TwoPoint(F(1, 10), name="two-point"),
}

_UNIFORM_INT_RE = re.compile(r"^uniform-int-B(\d+)-J(\d+)$")


def uniform_integer(capacity: int, types: int) -> DiscreteDistribution:
    """Uniform over sizes ``1..J`` with bin capacity ``B``."""
    if not 1 <= types <= capacity - 1:
        raise DistributionSpecError(f"need 1 <= J <= B-1, got B={capacity}, J={types}")
    return DiscreteDistribution(
        capacity, list(range(1, types + 1)), [F(1, types)] * types,
        name=f"uniform-int-B{capacity}-J{types}",
    )


def get_distribution(name_or_path: str) -> DistributionSpec:
    """Resolve a preset name, a ``uniform-int-B<b>-J<j>`` family member, or a spec file."""
    if name_or_path in _PRESETS:
        return _PRESETS[name_or_path]()
    m = _UNIFORM_INT_RE.match(name_or_path)
    if m:
        return uniform_integer(int(m.group(1)), int(m.group(2)))
    path = Path(name_or_path)
    if path.is_file():
        return load_spec(path)
    raise DistributionSpecError(
        f"unknown distribution {name_or_path!r} (presets: {', '.join(sorted(_PRESETS))})"
    )


def list_presets() -> list[str]:
    return sorted(_PRESETS)


def register_preset(name: str, factory: Callable[[], DistributionSpec]) -> None:
    _PRESETS[name] = factory


# ── Ground-set families (random permutation model) ──────────────────────────

_GROUND_FAMILIES: dict[str, tuple[int, tuple[int, ...]]] = {
    # name -> (den, atom values); items are split as evenly as possible
    "two-atom": (10, (6, 4)),
    "three-atom": (20, (6, 9, 13)),
}


def ground_set_family(name: str, T: int) -> GroundSet:
    """A ground set of size ``T`` from a named family, atoms in near-equal shares."""
    if name not in _GROUND_FAMILIES:
        raise DistributionSpecError(
            f"unknown ground-set family {name!r} (families: {', '.join(sorted(_GROUND_FAMILIES))})"
        )
    den, atoms = _GROUND_FAMILIES[name]
    k = len(atoms)
    values: list[int] = []
    for i, atom in enumerate(atoms):
        values.extend([atom] * (T // k + (1 if i < T % k else 0)))
    return GroundSet(Instance(den, tuple(values)))


def list_ground_families() -> list[str]:
    return sorted(_GROUND_FAMILIES)


__all__ = [
    "DistributionSpec", "DistributionSpecError", "UnknownSize",
    "DiscreteDistribution", "TwoPoint", "UniformContinuous",
    "GroundSet", "empirical_pmf", "pad_ground_set", "quantile", "quantile_instance",
    "sample_iid", "sample_permutation",
    "RNG_NAME", "RNG_VERSION", "derive_seed", "make_rng", "trial_seed",
    "dump_spec", "load_spec", "spec_from_dict",
    "get_distribution", "list_presets", "register_preset", "uniform_integer",
    "ground_set_family", "list_ground_families",
]
