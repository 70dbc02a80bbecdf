"""Shared test fixtures: every test gets its own data directory.

The bench history store defaults to ~/.binbench/bench.db; tests must never
touch it, so BINBENCH_DATA_DIR is redirected to a per-test temp directory.
"""

from __future__ import annotations

import pytest


@pytest.fixture(autouse=True)
def _isolate_data_dir(tmp_path, monkeypatch):
    """Redirect the default bench database to a per-test temp directory."""
    data_dir = tmp_path / ".binbench"
    data_dir.mkdir()
    monkeypatch.setenv("BINBENCH_DATA_DIR", str(data_dir))
    yield data_dir
