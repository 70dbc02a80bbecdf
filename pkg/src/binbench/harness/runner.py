"""Run an experiment grid and collect one record per (source, T, trial, policy).

Each (source, T, trial) cell draws its arrivals once from a seed derived
from ``(base_seed, T, trial)``; every policy of the grid packs the same
arrivals and is compared against the same offline reference.
"""

from __future__ import annotations

import functools
import logging
import math
import time
from dataclasses import dataclass
from typing import Optional

from binbench.distributions import DistributionSpecError, derive_seed, sample_iid, sample_permutation
from binbench.lp import LpError
from binbench.model import Instance, PackingError, volume_bound
from binbench.oracle import BudgetExceeded, ExactBudget, OracleError, solve_exact, solve_fractional
from binbench.policies import IdentityViolation, LevelLpError, PlanMismatch, UnknownPolicy, get_policy
from binbench.harness.grid import (
    ExperimentGrid,
    GridError,
    OptReference,
    Source,
    TrialRecord,
    default_reference,
    resolve_source,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Reference:
    kind: OptReference
    #: The integer regret is measured against.
    value: int
    opt: Optional[int] = None
    opt_f: Optional[float] = None
    note: str = ""


def cell_seed(base_seed: int, T: int, trial: int) -> int:
    return derive_seed(base_seed, T, trial)


def cell_arrivals(source: Source, T: int, seed: int) -> Instance:
    if source.permutation_model:
        return sample_permutation(source.ground(T), seed)
    return sample_iid(source.dist, T, seed)


def _fractional(instance: Instance, note: str = "") -> Reference:
    try:
        plan = solve_fractional(instance)
    except (OracleError, LpError) as e:
        log.warning("OPT_f failed on %d items (%s); using the volume bound", len(instance), e)
        return Reference(OptReference.VOLUME, volume_bound(instance), note=f"{note}volume fallback: {e}")
    return Reference(OptReference.FRACTIONAL, plan.rounded_bound(), opt_f=plan.value, note=note)


def compute_reference(instance: Instance, kind: OptReference, budget: Optional[ExactBudget] = None) -> Reference:
    """The offline value regret is measured against.

    A failed exact solve falls back to ``ceil(OPT_f)``, a failed OPT_f to the
    volume bound; the fallback is noted on the reference.
    """
    if kind is OptReference.VOLUME:
        return Reference(kind, volume_bound(instance))
    if kind is OptReference.FRACTIONAL:
        return _fractional(instance)
    try:
        opt = solve_exact(instance, budget).n_bins
    except BudgetExceeded as e:
        log.warning("exact reference gave up on %d items (%s); using ceil(OPT_f)", len(instance), e.reason)
        return _fractional(instance, note=f"exact failed ({e.reason}); ")
    return Reference(kind, opt, opt=opt)


def _validate(grid: ExperimentGrid) -> list[Source]:
    try:
        sources = [resolve_source(name) for name in grid.sources]
        policies = [get_policy(name) for name in grid.policies]
    except (DistributionSpecError, UnknownPolicy, OSError) as e:
        raise GridError(str(e)) from None
    for p in policies:
        for s in sources:
            if p.integer_sizes_only and not s.integer_sized:
                raise GridError(f"policy {p.name} needs integer sizes but {s.name} is continuous")
    return sources


class CellFailed(GridError):
    """A cell stopped on an error that is not confined to one policy run.

    Carries plain strings so it crosses the worker pool boundary intact.
    """

    def __init__(self, cell: tuple[str, int, int], reason: str) -> None:
        self.cell = cell
        self.reason = reason
        name, T, trial = cell
        super().__init__(f"{name} T={T} trial {trial}: {reason}")

    def __reduce__(self):
        return (CellFailed, (self.cell, self.reason))


def run_cell(grid: ExperimentGrid, cell: tuple[str, int, int]) -> list[TrialRecord]:
    """Records for every policy on one (source, T, trial) cell, in grid policy order."""
    name, T, trial = cell
    source = resolve_source(name)
    seed = cell_seed(grid.base_seed, T, trial)
    arrivals = cell_arrivals(source, T, seed)
    n = T if grid.stop_at is None else grid.stop_at
    kind = grid.opt_reference or default_reference(source, T)
    ref = compute_reference(arrivals.prefix(n), kind, grid.budget)
    tag = name if grid.stop_at is None else f"{name}@stop={grid.stop_at}"
    support = source.support(T) if source.integer_sized else None

    records = []
    for policy_name in grid.policies:
        policy = get_policy(policy_name)
        start = time.perf_counter()
        note = ref.note
        bins: Optional[int] = None
        try:
            result = policy.run(
                arrivals, T,
                seed=derive_seed(grid.base_seed, T, trial, 1),
                stop_at=grid.stop_at,
                oracle=grid.oracle_mode,
                budget=grid.budget,
                support=support,
            )
            bins = result.bins_used
        except (LpError, LevelLpError, OracleError, PackingError, PlanMismatch) as e:
            log.exception("%s failed on %s T=%d trial %d", policy_name, name, T, trial)
            note = f"{note}policy failed: {e}"
        elapsed = (time.perf_counter() - start) * 1000.0

        regret = None if bins is None else bins - ref.value
        if regret is not None and ref.kind is OptReference.EXACT and regret < 0:
            log.error("%s beat the exact optimum on %s T=%d trial %d (%d < %d)",
                      policy_name, name, T, trial, bins, ref.value)
        records.append(TrialRecord(
            policy=policy_name, dist=tag, T=T, trial=trial, seed=seed, bins=bins,
            opt=ref.opt, opt_f=ref.opt_f, regret=regret,
            runtime_ms=round(elapsed, 3) if grid.timing else None,
            note=note,
        ))
    return records


def _run_cell_checked(grid: ExperimentGrid, cell: tuple[str, int, int]) -> list[TrialRecord]:
    try:
        return run_cell(grid, cell)
    except (ValueError, LpError, OracleError, PackingError, IdentityViolation) as e:
        log.debug("cell %s failed", cell, exc_info=True)
        raise CellFailed(cell, f"{type(e).__name__}: {e}") from e


def grid_cells(grid: ExperimentGrid) -> list[tuple[str, int, int]]:
    return [(s, T, trial) for s in grid.sources for T in grid.T_values for trial in range(grid.trials)]


def run_bench(grid: ExperimentGrid) -> list[TrialRecord]:
    """Every record of the grid, ordered by source, T, trial, then policy.

    With ``grid.workers > 1`` the cells run in a spawn-context process pool;
    the order of the records does not depend on completion order.
    Raises :class:`CellFailed` when a cell stops on anything other than a
    per-policy failure, which is recorded in the record's ``note`` instead.
    """
    _validate(grid)
    cells = grid_cells(grid)
    log.info("bench: %d cells x %d policies, %d worker(s)", len(cells), len(grid.policies), grid.workers)
    worker = functools.partial(_run_cell_checked, grid)
    records: list[TrialRecord] = []
    if grid.workers > 1 and len(cells) > 1:
        from multiprocessing import get_context

        ctx = get_context("spawn")
        with ctx.Pool(processes=grid.workers) as pool:
            for i, cell_records in enumerate(pool.imap(worker, cells, chunksize=1), start=1):
                records.extend(cell_records)
                _progress(i, len(cells))
    else:
        for i, cell in enumerate(cells, start=1):
            records.extend(worker(cell))
            _progress(i, len(cells))
    return records


def _progress(done: int, total: int) -> None:
    step = max(1, math.ceil(total / 10))
    if done % step == 0 or done == total:
        log.info("bench: %d/%d cells done", done, total)
