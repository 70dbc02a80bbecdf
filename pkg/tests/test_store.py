"""Tests for the bench run history store."""

import pytest
import pytest_asyncio

from binbench.harness import TrialRecord
from binbench.store import ResultStore, get_db_path


@pytest_asyncio.fixture
async def store(tmp_path):
    """Create a ResultStore backed by a temp DB and close it after the test."""
    s = ResultStore(db_path=tmp_path / "bench.db")
    yield s
    await s.close()


def _records():
    return [
        TrialRecord("best-fit", "uniform", 8, 0, 2**63 + 5, bins=5, opt=4, opt_f=3.5, regret=1, runtime_ms=0.25),
        TrialRecord("overflow", "uniform", 8, 0, 2**63 + 5, bins=None, opt=4, note="policy failed: boom"),
    ]


# ── Connection lifecycle ────────────────────────────────────────────────────


def test_default_path_follows_data_dir(_isolate_data_dir):
    assert get_db_path() == _isolate_data_dir / "bench.db"


@pytest.mark.asyncio
async def test_connection_is_lazy(tmp_path):
    s = ResultStore(db_path=tmp_path / "bench.db")
    assert s._conn is None
    assert not (tmp_path / "bench.db").exists()
    await s.close()


@pytest.mark.asyncio
async def test_connection_reused_across_operations(store):
    await store.list_bench_runs()
    conn = store._conn
    await store.save_bench({"base_seed": 1}, [])
    assert store._conn is conn


@pytest.mark.asyncio
async def test_wal_mode(store):
    conn = await store._get_conn()
    row = await (await conn.execute("PRAGMA journal_mode")).fetchone()
    assert row[0] == "wal"


# ── Bench runs ──────────────────────────────────────────────────────────────


@pytest.mark.asyncio
async def test_save_and_list(store):
    first = await store.save_bench({"base_seed": 7, "trials": 2}, _records(), label="smoke")
    second = await store.save_bench({"base_seed": 8}, [])
    runs = await store.list_bench_runs()
    assert [r["id"] for r in runs] == [second, first]
    assert runs[1]["label"] == "smoke"
    assert runs[1]["n_records"] == 2
    assert runs[1]["base_seed"] == 7
    assert runs[1]["config"] == {"base_seed": 7, "trials": 2}


@pytest.mark.asyncio
async def test_records_come_back_in_order(store):
    run_id = await store.save_bench({"base_seed": 7}, _records())
    back = await store.get_trial_records(run_id)
    assert back == _records()
    # 64-bit seeds survive as text
    assert back[0].seed == 2**63 + 5
    assert back[1].note == "policy failed: boom"


@pytest.mark.asyncio
async def test_unsigned_base_seed(store):
    seed = 2**64 - 1
    run_id = await store.save_bench({"base_seed": seed}, _records())
    run = await store.get_bench_run(run_id)
    assert run["base_seed"] == seed
    assert run["config"]["base_seed"] == seed
    assert (await store.list_bench_runs())[0]["base_seed"] == seed


@pytest.mark.asyncio
async def test_get_missing_run(store):
    assert await store.get_bench_run(99) is None
    assert await store.get_trial_records(99) == []


@pytest.mark.asyncio
async def test_delete_cascades(store):
    run_id = await store.save_bench({"base_seed": 7}, _records())
    assert await store.delete_bench_run(run_id)
    assert await store.get_bench_run(run_id) is None
    assert await store.get_trial_records(run_id) == []
    assert not await store.delete_bench_run(run_id)


@pytest.mark.asyncio
async def test_runs_persist_across_connections(tmp_path):
    path = tmp_path / "bench.db"
    a = ResultStore(db_path=path)
    run_id = await a.save_bench({"base_seed": 3}, _records())
    await a.close()
    b = ResultStore(db_path=path)
    try:
        assert (await b.get_bench_run(run_id))["n_records"] == 2
    finally:
        await b.close()
