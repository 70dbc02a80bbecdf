"""SQLite history of bench runs."""

from binbench.store.connection import DatabaseManager, get_db_path
from binbench.store.results import ResultStore

__all__ = ["DatabaseManager", "ResultStore", "get_db_path"]
