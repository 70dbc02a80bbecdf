"""First-fit-decreasing, plan rounding, and the L2 lower bound."""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from binbench.config import OPT_COMPARE_TOL
from binbench.model import Instance, volume_bound
from binbench.oracle.fractional import FractionalPlan
from binbench.oracle.plan import IntegralPlan, instantiate


def first_fit_decreasing(sizes: Sequence[int], items: Iterable[int], capacity: int) -> list[list[int]]:
    """Pack the item ids ``items`` (indices into ``sizes``) with FFD.

    Items are taken by decreasing size, ties by increasing id.
    """
    order = sorted(items, key=lambda i: (-sizes[i], i))
    residual = np.zeros(len(order), dtype=np.int64)
    bins: list[list[int]] = []
    for i in order:
        s = sizes[i]
        fits = np.flatnonzero(residual[: len(bins)] >= s)
        if fits.size:
            b = int(fits[0])
            bins[b].append(i)
            residual[b] -= s
        else:
            bins.append([i])
            residual[len(bins) - 1] = capacity - s
    return bins


def solve_ffd(instance: Instance) -> IntegralPlan:
    bins = first_fit_decreasing(instance.sizes, range(len(instance)), instance.capacity_den)
    return IntegralPlan(instance.capacity_den, instance.sizes, bins, optimal=False, method="ffd")


def round_plan(fractional: FractionalPlan, instance: Instance) -> IntegralPlan:
    """Floor every configuration weight, instantiate those bins, then FFD the rest."""
    copies = [
        (config, int(math.floor(w + OPT_COMPARE_TOL)))
        for config, w in zip(fractional.configurations, fractional.weights)
    ]
    bins, leftover = instantiate(instance, fractional.sizes, [(c, k) for c, k in copies if k > 0])
    bins.extend(first_fit_decreasing(instance.sizes, leftover, instance.capacity_den))
    return IntegralPlan(instance.capacity_den, instance.sizes, bins, optimal=False, method="round")


def lower_bound_l2(instance: Instance) -> int:
    """Martello and Toth's L2 bound, never below the volume bound.

    For each threshold ``a`` in ``{0} ∪ {s <= C/2}``: items above ``C - a``
    each need their own bin, items in ``(C/2, C - a]`` also need one each, and
    items in ``[a, C/2]`` can only use the space the middle group leaves.
    """
    if not len(instance):
        return 0
    C = instance.capacity_den
    sizes = sorted(instance.sizes, reverse=True)
    thresholds = {0} | {s for s in sizes if 2 * s <= C}
    best = volume_bound(instance)
    for a in thresholds:
        big = mid = 0
        mid_free = 0
        small_total = 0
        for s in sizes:
            if s > C - a:
                big += 1
            elif 2 * s > C:
                mid += 1
                mid_free += C - s
            elif s >= a:
                small_total += s
        extra = max(0, -(-(small_total - mid_free) // C))
        best = max(best, big + mid + extra)
    return best
