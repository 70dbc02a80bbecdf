"""Bench run history: grids and their trial records."""

from __future__ import annotations

import json
import logging
from datetime import datetime, timezone
from typing import Any, Iterable

from binbench.harness.grid import TrialRecord
from binbench.store.connection import DatabaseManager

log = logging.getLogger(__name__)


class ResultStore(DatabaseManager):
    """Bench runs and trial records CRUD operations."""

    async def save_bench(
        self, config: dict[str, Any], records: Iterable[TrialRecord], label: str = ""
    ) -> int:
        now = datetime.now(timezone.utc).isoformat()
        records = list(records)
        conn = await self._get_conn()
        cur = await conn.execute(
            "INSERT INTO bench_runs (label, config_json, base_seed, n_records, created_at) "
            "VALUES (?, ?, ?, ?, ?)",
            (label, json.dumps(config, sort_keys=True), str(int(config.get("base_seed", 0))), len(records), now),
        )
        run_id = cur.lastrowid
        await conn.executemany(
            "INSERT INTO trial_records "
            "(run_id, position, policy, dist, T, trial, seed, bins, opt, opt_f, regret, runtime_ms, note) "
            "VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
            [
                (run_id, i, r.policy, r.dist, r.T, r.trial, str(r.seed), r.bins, r.opt,
                 r.opt_f, r.regret, r.runtime_ms, r.note)
                for i, r in enumerate(records)
            ],
        )
        await conn.commit()
        log.info("saved bench run %d with %d records", run_id, len(records))
        return run_id

    async def list_bench_runs(self) -> list[dict[str, Any]]:
        conn = await self._get_conn()
        rows = await (await conn.execute(
            "SELECT id, label, config_json, base_seed, n_records, created_at "
            "FROM bench_runs ORDER BY id DESC"
        )).fetchall()
        return [_run_dict(r) for r in rows]

    async def get_bench_run(self, run_id: int) -> dict[str, Any] | None:
        conn = await self._get_conn()
        row = await (await conn.execute(
            "SELECT id, label, config_json, base_seed, n_records, created_at FROM bench_runs WHERE id = ?",
            (run_id,),
        )).fetchone()
        if row is None:
            return None
        return _run_dict(row)

    async def get_trial_records(self, run_id: int) -> list[TrialRecord]:
        conn = await self._get_conn()
        rows = await (await conn.execute(
            "SELECT policy, dist, T, trial, seed, bins, opt, opt_f, regret, runtime_ms, note "
            "FROM trial_records WHERE run_id = ? ORDER BY position",
            (run_id,),
        )).fetchall()
        return [
            TrialRecord(
                policy=r["policy"], dist=r["dist"], T=r["T"], trial=r["trial"], seed=int(r["seed"]),
                bins=r["bins"], opt=r["opt"], opt_f=r["opt_f"], regret=r["regret"],
                runtime_ms=r["runtime_ms"], note=r["note"] or "",
            )
            for r in rows
        ]

    async def delete_bench_run(self, run_id: int) -> bool:
        conn = await self._get_conn()
        cur = await conn.execute("DELETE FROM bench_runs WHERE id = ?", (run_id,))
        await conn.commit()
        return cur.rowcount > 0


def _run_dict(row: Any) -> dict[str, Any]:
    d = dict(row)
    d["config"] = json.loads(d.pop("config_json"))
    # stored as TEXT: SQLite integers are signed 64-bit
    d["base_seed"] = int(d["base_seed"])
    return d
