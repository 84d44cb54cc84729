"""SQLite database of blockcalc runs and the files they wrote."""
import json
import sqlite3
from datetime import datetime
from pathlib import Path
from typing import Dict, Iterable, List, Optional


class RunHistory:
    """Records every experiment, fit and simulate invocation in SQLite."""

    def __init__(self, db_path: Optional[Path] = None):
        """Open (and create if needed) the history database.

        Args:
            db_path: Path to SQLite database. Defaults to ~/.blockcalc/history.db
        """
        if db_path is None:
            db_path = Path.home() / ".blockcalc" / "history.db"

        self.db_path = Path(db_path)
        self.db_path.parent.mkdir(parents=True, exist_ok=True)

        self.conn = sqlite3.connect(str(self.db_path))
        self.conn.row_factory = sqlite3.Row
        self.conn.execute("PRAGMA foreign_keys = ON")
        self._init_schema()

    def _init_schema(self):
        cursor = self.conn.cursor()

        cursor.execute("""
            CREATE TABLE IF NOT EXISTS runs (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                start_time TEXT NOT NULL,
                end_time TEXT,
                command TEXT NOT NULL,
                target TEXT,
                parameters TEXT,
                status TEXT DEFAULT 'running',
                log_path TEXT,
                starred INTEGER DEFAULT 0,
                file_count INTEGER DEFAULT 0
            )
        """)

        cursor.execute("""
            CREATE TABLE IF NOT EXISTS run_files (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                run_id INTEGER NOT NULL,
                path TEXT NOT NULL,
                FOREIGN KEY (run_id) REFERENCES runs(id) ON DELETE CASCADE
            )
        """)

        cursor.execute("""
            CREATE INDEX IF NOT EXISTS idx_run_start_time
            ON runs(start_time DESC)
        """)

        self.conn.commit()

    def start_run(
        self,
        command: str,
        target: Optional[str] = None,
        parameters: Optional[Dict] = None,
        log_path: Optional[Path] = None,
    ) -> int:
        """Insert a run in the 'running' state and return its id."""
        cursor = self.conn.cursor()
        cursor.execute(
            """
            INSERT INTO runs (start_time, command, target, parameters, log_path)
            VALUES (?, ?, ?, ?, ?)
            """,
            (
                datetime.now().isoformat(),
                command,
                target,
                json.dumps(parameters or {}, sort_keys=True, default=str),
                str(log_path) if log_path else None,
            ),
        )
        self.conn.commit()
        return cursor.lastrowid

    def add_files(self, run_id: int, paths: Iterable[Path]):
        cursor = self.conn.cursor()
        paths = [str(p) for p in paths]

        # Keep the cached count in step with run_files
        cursor.executemany(
            "INSERT INTO run_files (run_id, path) VALUES (?, ?)", [(run_id, p) for p in paths]
        )
        cursor.execute(
            "UPDATE runs SET file_count = file_count + ? WHERE id = ?", (len(paths), run_id)
        )
        self.conn.commit()

    def finish_run(self, run_id: int, status: str = "ok"):
        self.conn.execute(
            "UPDATE runs SET status = ?, end_time = ? WHERE id = ?",
            (status, datetime.now().isoformat(), run_id),
        )
        self.conn.commit()

    def get_recent_runs(self, limit: int = 20) -> List[Dict]:
        """Most recent runs first; starred runs are always included."""
        cursor = self.conn.cursor()
        cursor.execute(
            """
            SELECT * FROM runs
            WHERE starred = 1
            UNION
            SELECT * FROM (
                SELECT * FROM runs
                WHERE starred = 0
                ORDER BY start_time DESC, id DESC
                LIMIT ?
            )
            ORDER BY start_time DESC, id DESC
            """,
            (limit,),
        )
        return [dict(row) for row in cursor.fetchall()]

    def get_run_files(self, run_id: int) -> List[str]:
        cursor = self.conn.cursor()
        cursor.execute("SELECT path FROM run_files WHERE run_id = ? ORDER BY id", (run_id,))
        return [row[0] for row in cursor.fetchall()]

    def star_run(self, run_id: int, starred: bool = True) -> bool:
        """Star or unstar a run. Returns False when no run has that id."""
        cursor = self.conn.execute("UPDATE runs SET starred = ? WHERE id = ?", (int(starred), run_id))
        self.conn.commit()
        return cursor.rowcount > 0

    def cleanup_old_runs(self, keep_recent: int = 20) -> int:
        """Delete runs older than the N most recent, except starred ones.

        Returns:
            Number of deleted runs
        """
        cursor = self.conn.cursor()
        cursor.execute(
            """
            SELECT id FROM runs WHERE starred = 1
            UNION
            SELECT id FROM (
                SELECT id FROM runs WHERE starred = 0
                ORDER BY start_time DESC, id DESC
                LIMIT ?
            )
            """,
            (keep_recent,),
        )
        keep_ids = [row[0] for row in cursor.fetchall()]

        if keep_ids:
            placeholders = ",".join("?" * len(keep_ids))
            cursor.execute(f"DELETE FROM runs WHERE id NOT IN ({placeholders})", keep_ids)
        else:
            cursor.execute("DELETE FROM runs")

        deleted_count = cursor.rowcount
        self.conn.commit()
        cursor.execute("VACUUM")
        return deleted_count

    def close(self):
        self.conn.close()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()
