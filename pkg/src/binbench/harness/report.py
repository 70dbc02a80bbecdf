"""Markdown summary of a bench run, rendered from the packaged Jinja2 templates."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Optional

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from binbench.distributions import list_ground_families
from binbench.harness.grid import TrialRecord
from binbench.harness.plot_data import SummaryRow, summarize
from binbench.theory.bounds import permutation_regret_bound, stochastic_regret_bound

TEMPLATES_DIR = Path(__file__).resolve().parent.parent / "templates"

_env: Optional[Environment] = None


def _environment() -> Environment:
    global _env
    if _env is None:
        _env = Environment(
            loader=FileSystemLoader(str(TEMPLATES_DIR)),
            undefined=StrictUndefined,
            keep_trailing_newline=True,
        )
    return _env


@dataclass
class _Series:
    name: str
    policies: list[str] = field(default_factory=list)
    xs: list[int] = field(default_factory=list)
    cells: dict[tuple[str, int], SummaryRow] = field(default_factory=dict)
    bounds: dict[int, float] = field(default_factory=dict)


def _regret_bound(series: str, T: int) -> float:
    source = series.split("@", 1)[0]
    if source in list_ground_families():
        return permutation_regret_bound(T)
    return stochastic_regret_bound(T)


def build_series(rows: Iterable[SummaryRow], group_by: str) -> list[_Series]:
    by_name: dict[str, _Series] = {}
    for row in rows:
        s = by_name.setdefault(row.series, _Series(row.series))
        if row.policy not in s.policies:
            s.policies.append(row.policy)
        if row.x not in s.xs:
            s.xs.append(row.x)
        s.cells[(row.policy, row.x)] = row
    for s in by_name.values():
        s.xs.sort()
        if group_by == "T":
            s.bounds = {T: _regret_bound(s.name, T) for T in s.xs}
    return [by_name[name] for name in sorted(by_name)]


def render_report(
    records: list[TrialRecord], grid: Optional[dict[str, Any]] = None, group_by: str = "T"
) -> str:
    """Mean regret ± standard error per series, one column per policy.

    With ``group_by="T"`` each table also lists the overflow policy's regret
    bound at that horizon.
    """
    template = _environment().get_template("report.md.j2")
    return template.render(
        grid=grid,
        n_records=len(records),
        failed=sum(1 for r in records if r.regret is None),
        group_by=group_by,
        series_list=build_series(summarize(records, group_by), group_by),
    )


def write_report(records: list[TrialRecord], path: str | Path, grid: Optional[dict[str, Any]] = None,
                 group_by: str = "T") -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_report(records, grid, group_by))
