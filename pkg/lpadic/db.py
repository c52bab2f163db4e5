import os
import sqlite3
import time
from contextlib import contextmanager
from typing import ContextManager
import logging

from lpadic.models import CachedSymbol, SymbolKey

log = logging.getLogger(__name__)

_CONNECTIONS: list[sqlite3.Connection] = list()


def get_local_db_file_path() -> str:
    if "XDG_DATA_HOME" in os.environ:
        data_dir = os.environ.get("XDG_DATA_HOME")
    else:
        data_dir = os.path.join(os.environ.get("HOME", "."), ".local", "share")
    conf_dir = os.path.join(data_dir, "lpadic")
    os.makedirs(conf_dir, exist_ok=True)
    return os.path.join(conf_dir, "lpadic.db")


@contextmanager
def cursor(read_only: bool = False) -> ContextManager[sqlite3.Cursor]:
    """
    Hand out a new cursor on a pooled connection; commits if no exception occurred.
    """
    if not _CONNECTIONS:
        conn = sqlite3.connect(get_local_db_file_path(), check_same_thread=False)
    else:
        conn = _CONNECTIONS.pop()
    cur = conn.cursor()
    try:
        yield cur
        if not read_only:
            conn.commit()
    except Exception as ex:
        conn.rollback()
        raise ex
    finally:
        _CONNECTIONS.append(conn)


def close_all():
    while _CONNECTIONS:
        _CONNECTIONS.pop().close()


def migrate():
    with cursor() as cur:
        res = cur.execute("SELECT name FROM sqlite_master WHERE type='table' AND name='lpadic_settings';").fetchone()
        if res is None:
            _create_schema(cur)


def store_symbol(key: SymbolKey, export: str) -> CachedSymbol:
    migrate()
    now = int(time.time())
    with cursor() as cur:
        cur.execute(
            "INSERT OR REPLACE INTO eigen_symbols (`level`, `weight`, `sign`, `bound`, `export`, `time`) VALUES (?,?,?,?,?,?)",
            (key.N, key.k, key.sign, key.bound, export, now),
        )
    log.info(f"cached eigen-symbol N={key.N} k={key.k} sign={key.sign}")
    return CachedSymbol(key, export, now)


def cached_symbol(key: SymbolKey) -> CachedSymbol | None:
    migrate()
    with cursor(read_only=True) as cur:
        row = cur.execute(
            "SELECT `export`, `time` FROM eigen_symbols WHERE `level` = ? AND `weight` = ? AND `sign` = ? AND `bound` = ?",
            (key.N, key.k, key.sign, key.bound),
        ).fetchone()
    if row is None:
        return None
    return CachedSymbol(key, *row)


def forget_symbols(N: int | None = None) -> int:
    migrate()
    with cursor() as cur:
        if N is None:
            cur.execute("DELETE FROM eigen_symbols")
        else:
            cur.execute("DELETE FROM eigen_symbols WHERE `level` = ?", (N,))
        return cur.rowcount


def _create_schema(cur: sqlite3.Cursor):
    cur.executescript(
        """
        CREATE TABLE lpadic_settings (
            schema_version integer not null
        );

        INSERT INTO lpadic_settings(`schema_version`) VALUES (1);

        CREATE TABLE eigen_symbols (
            level integer not null,
            weight integer not null,
            sign integer not null,
            bound integer not null,
            export text not null,
            time integer not null,
            UNIQUE(level, weight, sign, bound)
        );

        CREATE INDEX eigen_symbols_key ON eigen_symbols(level, weight, sign);
    """
    )
    log.info("Created database schema")
