"""CSV files of trial records."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Optional, TextIO

from binbench.harness.grid import GridError, TrialRecord

CSV_HEADER = ["policy", "dist", "T", "trial", "seed", "bins", "opt", "opt_f", "regret", "runtime_ms"]


def _cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _opt_int(text: str) -> Optional[int]:
    return int(text) if text else None


def _opt_float(text: str) -> Optional[float]:
    return float(text) if text else None


def write_records(records: Iterable[TrialRecord], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([_cell(getattr(r, name)) for name in CSV_HEADER])


def write_csv(records: Iterable[TrialRecord], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        write_records(records, f)


def read_csv(path: str | Path) -> list[TrialRecord]:
    with Path(path).open(newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise GridError(f"{path}: unexpected header {header}")
        out = []
        for line, row in enumerate(reader, start=2):
            if len(row) != len(CSV_HEADER):
                raise GridError(f"{path}:{line}: expected {len(CSV_HEADER)} columns, got {len(row)}")
            policy, dist, T, trial, seed, bins, opt, opt_f, regret, runtime_ms = row
            out.append(TrialRecord(
                policy=policy, dist=dist, T=int(T), trial=int(trial), seed=int(seed),
                bins=_opt_int(bins), opt=_opt_int(opt), opt_f=_opt_float(opt_f),
                regret=_opt_int(regret), runtime_ms=_opt_float(runtime_ms),
            ))
    return out
