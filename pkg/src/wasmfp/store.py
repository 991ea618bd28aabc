"""Append-only JSON-lines store for submitted fingerprint records."""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path


class RecordStore:
    """One record per line; writes serialized, reads from an in-memory view.

    Records are never mutated after append. The file is replayed once at
    startup so restarts keep history.
    """

    def __init__(self, path: str | Path, fsync: bool = False):
        self.path = Path(path)
        self.fsync = fsync
        self._lock = threading.Lock()
        self._records: list[dict] = []
        self._by_id: dict[str, dict] = {}
        if self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                record = json.loads(line)
                self._records.append(record)
                self._by_id[record["id"]] = record

    def append(self, record: dict) -> None:
        line = json.dumps(record)
        with self._lock:
            if record["id"] in self._by_id:
                raise ValueError(f"duplicate record id {record['id']!r}")
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                if self.fsync:
                    fh.flush()
                    os.fsync(fh.fileno())
            self._records.append(record)
            self._by_id[record["id"]] = record

    def get(self, record_id: str) -> dict | None:
        return self._by_id.get(record_id)

    def records(self) -> list[dict]:
        with self._lock:
            return list(self._records)

    def __len__(self) -> int:
        return len(self._records)
