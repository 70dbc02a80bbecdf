"""Plot-ready summaries: mean regret and standard error per policy and group."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

from binbench.harness.grid import GridError, TrialRecord
from binbench.theory.checks import mean_and_stderr

GROUP_KEYS = ("T", "B", "J")

_PARAM_RE = {"B": re.compile(r"-B(\d+)"), "J": re.compile(r"-J(\d+)")}


@dataclass(frozen=True)
class SummaryRow:
    policy: str
    #: Source label; for ``B``/``J`` groupings the parameter leaves the label and becomes ``x``.
    series: str
    x: int
    mean: float
    stderr: float
    n: int


def _x(record: TrialRecord, group_by: str) -> int:
    if group_by == "T":
        return record.T
    m = _PARAM_RE[group_by].search(record.dist)
    if m is None:
        raise GridError(f"cannot read {group_by} from distribution {record.dist!r}")
    return int(m.group(1))


def _series(record: TrialRecord, group_by: str) -> str:
    if group_by == "T":
        return record.dist
    return _PARAM_RE[group_by].sub(f"-{group_by}*", record.dist) + f"@T={record.T}"


def summarize(records: Iterable[TrialRecord], group_by: str = "T") -> list[SummaryRow]:
    if group_by not in GROUP_KEYS:
        raise GridError(f"group_by must be one of {GROUP_KEYS}, got {group_by!r}")
    groups: dict[tuple[str, str, int], list[int]] = {}
    for r in records:
        if r.regret is None:
            continue
        groups.setdefault((r.policy, _series(r, group_by), _x(r, group_by)), []).append(r.regret)
    rows = []
    for (policy, series, x) in sorted(groups):
        values = groups[(policy, series, x)]
        mean, se = mean_and_stderr(values)
        rows.append(SummaryRow(policy, series, x, mean, se, len(values)))
    return rows


def emit_plot_data(records: Iterable[TrialRecord], group_by: str = "T", rows: Optional[list[SummaryRow]] = None) -> str:
    """Whitespace-separated columns ``policy series x mean stderr n``, one line per group."""
    rows = summarize(records, group_by) if rows is None else rows
    lines = [f"# x={group_by}", "policy\tseries\tx\tmean\tstderr\tn"]
    for row in rows:
        lines.append(f"{row.policy}\t{row.series}\t{row.x}\t{row.mean:.6f}\t{row.stderr:.6f}\t{row.n}")
    return "\n".join(lines) + "\n"
