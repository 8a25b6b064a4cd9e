"""Offline ingestion: source files -> representations -> store records."""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from rpt.errors import DuplicateId, EmptyProgram, InputError
from rpt.frontend import SourceUnit, language_for_path
from rpt.pipeline import Frontend
from rpt.representation import ProgramRepr
from rpt.store import Store, StoreRecord

log = logging.getLogger(__name__)


@dataclass
class IngestSummary:
    ok: int = 0
    parse_failed: int = 0
    empty: int = 0
    duplicate: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def discover(inputs: Iterable[Union[str, os.PathLike]], lang: Optional[str] = None) -> list[tuple[str, Path, str]]:
    """Expand files and directories into ``(program_id, path, language)`` triples.

    Files inside a directory argument are identified by their path relative to
    it; file arguments keep the path as given. Files whose language cannot be
    determined are skipped.
    """
    found = []
    for item in inputs:
        p = Path(item)
        if p.is_dir():
            for f in sorted(x for x in p.rglob("*") if x.is_file()):
                language = lang or language_for_path(f.name)
                if language:
                    found.append((f.relative_to(p).as_posix(), f, language))
        else:
            language = lang or language_for_path(p.name)
            if language is None:
                log.warning("skipping %s: unknown language (use --lang)", p)
                continue
            found.append((p.as_posix(), p, language))
    return found


_worker_frontend: Optional[Frontend] = None


def _init_worker(frontend: Frontend) -> None:
    global _worker_frontend
    _worker_frontend = frontend


def _represent(job: tuple[str, str, str]) -> Union[ProgramRepr, Exception]:
    pid, path, language = job
    try:
        body = Path(path).read_text(encoding="utf-8")
        return _worker_frontend.represent(SourceUnit(pid, language, body))
    except (InputError, EmptyProgram, UnicodeDecodeError, OSError) as exc:
        return exc


def ingest(
    store: Store,
    files: Sequence[tuple[str, Path, str]],
    frontend: Frontend,
    jobs: int = 1,
) -> IngestSummary:
    """Represent each file and append it; per-file failures are logged and skipped."""
    summary = IngestSummary()
    todo = []
    for pid, path, language in files:
        if pid in store:
            log.warning("%s", DuplicateId(pid))
            summary.duplicate += 1
            continue
        todo.append((pid, str(path), language))

    if jobs > 1 and len(todo) > 1:
        pool = ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(frontend,))
        results = pool.map(_represent, todo, chunksize=16)
    else:
        pool = None
        _init_worker(frontend)
        results = map(_represent, todo)
    try:
        for (pid, path, _), result in zip(todo, results):
            if isinstance(result, EmptyProgram):
                log.info("%s: no paths, skipped", path)
                summary.empty += 1
            elif isinstance(result, Exception):
                log.warning("%s: %s", path, result)
                summary.parse_failed += 1
            else:
                try:
                    store.append(StoreRecord(result, path))
                except DuplicateId as exc:
                    log.warning("%s", exc)
                    summary.duplicate += 1
                    continue
                summary.ok += 1
    finally:
        if pool is not None:
            pool.shutdown()
    return summary
