"""Append-only feature store: ``manifest.json`` + ``records.jsonl`` + ``lock``.

Each record is one JSON object per line with sorted keys, so ingesting the
same inputs in the same order always produces byte-identical files.
"""

from __future__ import annotations

import fcntl
import hashlib
import json
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator, Optional, Union

from rpt.errors import ConfigMismatch, CorruptStore, DuplicateId, NotFound, StoreError, StoreLocked
from rpt.representation import ExtractionConfig, ProgramRepr

STORE_VERSION = 1
MANIFEST = "manifest.json"
RECORDS = "records.jsonl"
LOCK = "lock"


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


@dataclass
class StoreRecord:
    repr: ProgramRepr
    locator: str = ""

    @property
    def program_id(self) -> str:
        return self.repr.program_id

    @property
    def language(self) -> str:
        return self.repr.language

    def to_line(self) -> str:
        d = self.repr.to_dict()
        d["locator"] = self.locator
        return dumps_canonical(d) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> StoreRecord:
        return cls(ProgramRepr.from_dict(d), d.get("locator", ""))


class Store:
    """A directory-backed feature store opened for reading or appending.

    Use :meth:`open`; the store is a context manager and releases its lock on
    close. Only one appender may hold a store at a time.
    """

    def __init__(self, path: Path, mode: str, manifest: dict, records: list[StoreRecord]):
        self.path = path
        self.mode = mode
        self.manifest = manifest
        self._records = records
        self._by_id = {r.program_id: r for r in records}
        self._lock_fd: Optional[int] = None
        self._fh = None
        self._checksum: Optional[str] = None

    @classmethod
    def open(
        cls,
        path: Union[str, os.PathLike],
        mode: str = "read",
        config: Optional[ExtractionConfig] = None,
        created: Optional[str] = None,
    ) -> Store:
        """Open a store directory.

        In ``append`` mode a missing or empty directory gets a fresh manifest
        using ``config`` (default extraction settings when omitted). When
        ``config`` is given it must equal the stored snapshot. ``created``
        overrides the manifest timestamp of a new store (reproducible builds).
        """
        if mode not in ("read", "append"):
            raise ValueError(f"mode must be 'read' or 'append', not {mode!r}")
        path = Path(path)
        manifest_path = path / MANIFEST
        if mode == "read" and not manifest_path.exists():
            raise StoreError(f"{path} is not a store (no {MANIFEST})")
        if mode == "append":
            path.mkdir(parents=True, exist_ok=True)
        lock_fd = None
        if mode == "append":
            lock_fd = os.open(path / LOCK, os.O_RDWR | os.O_CREAT, 0o644)
            try:
                fcntl.flock(lock_fd, fcntl.LOCK_EX | fcntl.LOCK_NB)
            except BlockingIOError:
                os.close(lock_fd)
                raise StoreLocked(f"{path} is locked by another appender") from None
        try:
            if manifest_path.exists():
                manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
                stored = ExtractionConfig.from_dict(manifest["config"])
                if config is not None and config != stored:
                    raise ConfigMismatch(
                        f"store was built with {stored.to_dict()}, requested {config.to_dict()}"
                    )
            else:
                manifest = {
                    "version": STORE_VERSION,
                    "config": (config or ExtractionConfig()).to_dict(),
                    "counts": {},
                    "created": created or datetime.now(timezone.utc).isoformat(timespec="seconds"),
                }
                _write_atomic(manifest_path, dumps_canonical(manifest) + "\n")
            records = _read_records(path / RECORDS)
        except BaseException:
            if lock_fd is not None:
                os.close(lock_fd)
            raise
        store = cls(path, mode, manifest, records)
        store._lock_fd = lock_fd
        if mode == "append":
            store._fh = open(path / RECORDS, "a", encoding="utf-8", newline="\n")
        return store

    @property
    def config(self) -> ExtractionConfig:
        return ExtractionConfig.from_dict(self.manifest["config"])

    def append(self, record: StoreRecord) -> None:
        if self.mode != "append" or self._fh is None:
            raise StoreError("store not opened for appending")
        if record.program_id in self._by_id:
            raise DuplicateId(record.program_id)
        self._fh.write(record.to_line())
        self._records.append(record)
        self._by_id[record.program_id] = record
        counts = self.manifest.setdefault("counts", {})
        counts[record.language] = counts.get(record.language, 0) + 1
        self._checksum = None

    def get(self, program_id: str) -> StoreRecord:
        try:
            return self._by_id[program_id]
        except KeyError:
            raise NotFound(program_id) from None

    def __contains__(self, program_id: str) -> bool:
        return program_id in self._by_id

    def __len__(self) -> int:
        return len(self._records)

    def scan(self, language: Optional[str] = None) -> Iterator[StoreRecord]:
        """Records in insertion order, optionally restricted to one language."""
        for r in self._records:
            if language is None or r.language == language:
                yield r

    def languages(self) -> list[str]:
        return sorted({r.language for r in self._records})

    def freq_histogram(self, language: str, path_type: str) -> list[int]:
        """One frequency sample per program of ``language`` that contains ``path_type``."""
        return [r.repr.freq[path_type] for r in self.scan(language) if path_type in r.repr.freq]

    def checksum(self) -> str:
        """SHA-256 of the record file as written so far."""
        if self._checksum is None:
            if self._fh is not None:
                self._fh.flush()
            h = hashlib.sha256()
            p = self.path / RECORDS
            if p.exists():
                with open(p, "rb") as fh:
                    for chunk in iter(lambda: fh.read(1 << 20), b""):
                        h.update(chunk)
            self._checksum = h.hexdigest()
        return self._checksum

    def flush(self) -> None:
        if self._fh is not None:
            self._fh.flush()
            os.fsync(self._fh.fileno())
            _write_atomic(self.path / MANIFEST, dumps_canonical(self.manifest) + "\n")

    def close(self) -> None:
        if self._fh is not None:
            self.flush()
            self._fh.close()
            self._fh = None
        if self._lock_fd is not None:
            fcntl.flock(self._lock_fd, fcntl.LOCK_UN)
            os.close(self._lock_fd)
            self._lock_fd = None

    def __enter__(self) -> Store:
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8", newline="\n")
    os.replace(tmp, path)


def _read_records(path: Path) -> list[StoreRecord]:
    if not path.exists():
        return []
    records = []
    seen = set()
    offset = 0
    with open(path, "rb") as fh:
        for raw in fh:
            if not raw.endswith(b"\n"):
                raise CorruptStore(offset, "truncated record (no trailing newline)")
            try:
                rec = StoreRecord.from_dict(json.loads(raw))
            except (ValueError, KeyError, TypeError) as exc:
                raise CorruptStore(offset, str(exc)) from None
            if rec.program_id in seen:
                raise CorruptStore(offset, f"duplicate id {rec.program_id!r}")
            seen.add(rec.program_id)
            records.append(rec)
            offset += len(raw)
    return records
