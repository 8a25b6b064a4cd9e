"""Path-type-bucket index (PBI).

For every (language, path type) the per-program frequencies are split into
equi-depth buckets; each bucket owns a posting list of the programs whose
frequency falls inside it. Probing a query frequency returns the programs in
the same bucket, widened by ``slack`` neighbouring buckets on each side.

Programs are numbered per language in ascending program-id order, so sorted
doc numbers are also sorted ids and ``id asc`` tie-breaks are integer
comparisons.
"""

from __future__ import annotations

import bisect
import json
import math
import os
from dataclasses import dataclass, field
from itertools import groupby
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np

from rpt import kernels
from rpt.errors import EmptySamples, RptError
from rpt.representation import ProgramRepr
from rpt.store import Store, dumps_canonical

INDEX_FORMAT = 1
META_FILE = "index.meta.json"
POSTINGS_FILE = "index.postings.jsonl"

DEFAULT_BUCKETS = 16
DEFAULT_SLACK = 1
DEFAULT_MIN_HIT_RATIO = 0.3
DEFAULT_CAP = 1000


@dataclass(frozen=True)
class BucketBoundaries:
    """Upper bucket edges; the last edge is always ``inf``.

    Bucket 0 holds frequencies up to ``edges[0]``; bucket ``i`` holds
    ``(edges[i-1], edges[i]]``.
    """

    edges: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.edges or self.edges[-1] != math.inf:
            raise ValueError("last edge must be inf")
        if any(a >= b for a, b in zip(self.edges, self.edges[1:])):
            raise ValueError("edges must be strictly increasing")

    def __len__(self) -> int:
        return len(self.edges)

    def bucket_of(self, freq: float) -> int:
        return bisect.bisect_left(self.edges, freq)

    @property
    def finite_edges(self) -> list:
        return list(self.edges[:-1])


def build_boundaries(samples: Iterable[float], buckets: int) -> BucketBoundaries:
    """Equi-depth edges over ``samples`` with at most ``buckets`` buckets.

    Sorted distinct values are swept left to right; a bucket is closed as soon
    as its population reaches the remaining samples divided by the remaining
    bucket budget. A run of equal values is never split, so heavy ties yield
    fewer, fuller buckets.
    """
    if buckets < 1:
        raise ValueError("bucket budget must be >= 1")
    values = sorted(samples)
    if not values:
        raise EmptySamples("cannot build buckets from an empty sample")
    remaining = len(values)
    left = buckets
    pop = 0
    edges: list[float] = []
    for value, run in groupby(values):
        if len(edges) == buckets - 1:
            break
        pop += sum(1 for _ in run)
        if pop * left >= remaining:
            edges.append(value)
            remaining -= pop
            left -= 1
            pop = 0
    edges.append(math.inf)
    return BucketBoundaries(tuple(edges))


def bucket_of(freq: float, boundaries: BucketBoundaries) -> int:
    return boundaries.bucket_of(freq)


def bucket_populations(samples: Iterable[float], boundaries: BucketBoundaries) -> list[int]:
    pops = [0] * len(boundaries)
    for s in samples:
        pops[boundaries.bucket_of(s)] += 1
    return pops


@dataclass
class TypeBuckets:
    boundaries: BucketBoundaries
    postings: list[np.ndarray]  # one ascending int32 array of doc numbers per bucket


@dataclass
class LanguageIndex:
    doc_ids: list[str]
    types: dict[str, TypeBuckets]
    doc_of: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.doc_of = {pid: i for i, pid in enumerate(self.doc_ids)}

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)


def _threshold(min_hit_ratio: float, known: int) -> int:
    # round() guards against 0.3 * 10 == 3.0000000000000004 style ceilings
    return max(1, math.ceil(round(min_hit_ratio * known, 9)))


def _rank_hits(hits: np.ndarray, threshold: int, cap: Optional[int]) -> tuple[np.ndarray, np.ndarray]:
    docs = np.flatnonzero(hits >= threshold)
    counts = hits[docs]
    order = np.lexsort((docs, -counts))
    if cap is not None:
        order = order[:cap]
    return docs[order].astype(np.int32), counts[order]


class PbiIndex:
    """In-memory PBI over one store, one sub-index per language."""

    def __init__(
        self,
        bucket_count: int,
        languages: dict[str, LanguageIndex],
        checksum: str = "",
        config: Optional[dict] = None,
    ) -> None:
        self.bucket_count = bucket_count
        self.languages = languages
        self.checksum = checksum
        self.config = config or {}

    def language(self, language: str) -> Optional[LanguageIndex]:
        return self.languages.get(language)

    def probe_arrays(self, language: str, path_type: str, freq: float, slack: int) -> list[np.ndarray]:
        lang = self.languages.get(language)
        tb = lang.types.get(path_type) if lang else None
        if tb is None:
            return []
        b = tb.boundaries.bucket_of(freq)
        lo = max(0, b - slack)
        hi = min(len(tb.postings) - 1, b + slack)
        return tb.postings[lo : hi + 1]

    def probe(self, language: str, path_type: str, freq: float, slack: int = DEFAULT_SLACK) -> set[str]:
        arrays = self.probe_arrays(language, path_type, freq, slack)
        if not arrays:
            return set()
        ids = self.languages[language].doc_ids
        return {ids[d] for arr in arrays for d in arr.tolist()}

    def gather_docs(
        self,
        query: ProgramRepr,
        target_language: str,
        slack: int = DEFAULT_SLACK,
        min_hit_ratio: float = DEFAULT_MIN_HIT_RATIO,
        cap: Optional[int] = DEFAULT_CAP,
    ) -> tuple[np.ndarray, np.ndarray]:
        """Candidate doc numbers and hit counts, best first."""
        lang = self.languages.get(target_language)
        if lang is None or lang.n_docs == 0:
            return np.zeros(0, np.int32), np.zeros(0, np.int32)
        arrays: list[np.ndarray] = []
        known = 0
        for key, f in query.freq.items():
            tb = lang.types.get(key)
            if tb is None:
                continue
            known += 1
            b = tb.boundaries.bucket_of(f)
            arrays.extend(tb.postings[max(0, b - slack) : b + slack + 1])
        if known == 0:
            return np.zeros(0, np.int32), np.zeros(0, np.int32)
        hits = kernels.count_hits(arrays, lang.n_docs)
        return _rank_hits(hits, _threshold(min_hit_ratio, known), cap)

    def gather_candidates(
        self,
        query: ProgramRepr,
        target_language: str,
        slack: int = DEFAULT_SLACK,
        min_hit_ratio: float = DEFAULT_MIN_HIT_RATIO,
        cap: Optional[int] = DEFAULT_CAP,
    ) -> list[tuple[str, int]]:
        docs, hits = self.gather_docs(query, target_language, slack, min_hit_ratio, cap)
        ids = self.languages[target_language].doc_ids if len(docs) else []
        return [(ids[d], h) for d, h in zip(docs.tolist(), hits.tolist())]

    # -- persistence -------------------------------------------------------

    def save(self, directory: Union[str, os.PathLike]) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        meta = {
            "format": INDEX_FORMAT,
            "bucket_count": self.bucket_count,
            "checksum": self.checksum,
            "config": self.config,
            "languages": {
                lang: {"documents": li.doc_ids} for lang, li in sorted(self.languages.items())
            },
        }
        (directory / META_FILE).write_text(dumps_canonical(meta) + "\n", encoding="utf-8")
        with open(directory / POSTINGS_FILE, "w", encoding="utf-8", newline="\n") as fh:
            for lang in sorted(self.languages):
                li = self.languages[lang]
                for key in sorted(li.types):
                    tb = li.types[key]
                    line = {
                        "language": lang,
                        "path_type": key,
                        "edges": tb.boundaries.finite_edges,
                        "postings": [p.tolist() for p in tb.postings],
                    }
                    fh.write(dumps_canonical(line) + "\n")

    @classmethod
    def load(cls, directory: Union[str, os.PathLike]) -> PbiIndex:
        directory = Path(directory)
        try:
            meta = json.loads((directory / META_FILE).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise RptError(f"no index at {directory}") from None
        if meta.get("format") != INDEX_FORMAT:
            raise RptError(f"unsupported index format {meta.get('format')!r}")
        types: dict[str, dict[str, TypeBuckets]] = {lang: {} for lang in meta["languages"]}
        with open(directory / POSTINGS_FILE, encoding="utf-8") as fh:
            for line in fh:
                d = json.loads(line)
                bounds = BucketBoundaries(tuple(d["edges"]) + (math.inf,))
                postings = [np.asarray(p, dtype=np.int32) for p in d["postings"]]
                types[d["language"]][d["path_type"]] = TypeBuckets(bounds, postings)
        languages = {
            lang: LanguageIndex(info["documents"], types[lang]) for lang, info in meta["languages"].items()
        }
        return cls(meta["bucket_count"], languages, meta.get("checksum", ""), meta.get("config", {}))


def _collect(store: Store) -> dict[str, list[ProgramRepr]]:
    by_lang: dict[str, list[ProgramRepr]] = {}
    for rec in store.scan():
        by_lang.setdefault(rec.language, []).append(rec.repr)
    for reprs in by_lang.values():
        reprs.sort(key=lambda r: r.program_id)
    return by_lang


def build_from_reprs(
    by_language: dict[str, list[ProgramRepr]],
    buckets: int = DEFAULT_BUCKETS,
    checksum: str = "",
    config: Optional[dict] = None,
) -> PbiIndex:
    """Build from id-sorted representations per language."""
    if buckets < 1:
        raise ValueError("bucket budget must be >= 1")
    languages = {}
    for lang, reprs in by_language.items():
        per_type: dict[str, tuple[list[int], list[int]]] = {}
        for doc, r in enumerate(reprs):
            for key, f in r.freq.items():
                entry = per_type.get(key)
                if entry is None:
                    entry = per_type[key] = ([], [])
                entry[0].append(doc)
                entry[1].append(f)
        types = {}
        for key, (docs, freqs) in per_type.items():
            bounds = build_boundaries(freqs, buckets)
            slots: list[list[int]] = [[] for _ in bounds.edges]
            for d, f in zip(docs, freqs):
                slots[bounds.bucket_of(f)].append(d)
            types[key] = TypeBuckets(bounds, [np.asarray(s, dtype=np.int32) for s in slots])
        languages[lang] = LanguageIndex([r.program_id for r in reprs], types)
    return PbiIndex(buckets, languages, checksum, config)


def build(store: Store, buckets: int = DEFAULT_BUCKETS) -> PbiIndex:
    return build_from_reprs(_collect(store), buckets, store.checksum(), store.manifest.get("config"))


def probe(index: PbiIndex, language: str, path_type: str, freq: float, slack: int = DEFAULT_SLACK) -> set[str]:
    return index.probe(language, path_type, freq, slack)


def gather_candidates(
    index: PbiIndex,
    query: ProgramRepr,
    target_language: str,
    slack: int = DEFAULT_SLACK,
    min_hit_ratio: float = DEFAULT_MIN_HIT_RATIO,
    cap: Optional[int] = DEFAULT_CAP,
) -> list[tuple[str, int]]:
    return index.gather_candidates(query, target_language, slack, min_hit_ratio, cap)


class PathTypeIndex:
    """Bucket-free baseline: one posting list per (language, path type)."""

    def __init__(self, languages: dict[str, tuple[list[str], dict[str, np.ndarray]]]) -> None:
        self.languages = languages

    @classmethod
    def from_pbi(cls, index: PbiIndex) -> PathTypeIndex:
        langs = {}
        for lang, li in index.languages.items():
            merged = {k: np.sort(np.concatenate(tb.postings)).astype(np.int32) for k, tb in li.types.items()}
            langs[lang] = (li.doc_ids, merged)
        return cls(langs)

    def gather_docs(
        self,
        query: ProgramRepr,
        target_language: str,
        min_hit_ratio: float = DEFAULT_MIN_HIT_RATIO,
        cap: Optional[int] = None,
    ) -> tuple[np.ndarray, np.ndarray]:
        entry = self.languages.get(target_language)
        if entry is None:
            return np.zeros(0, np.int32), np.zeros(0, np.int32)
        doc_ids, postings = entry
        arrays = [postings[k] for k in query.freq if k in postings]
        if not arrays:
            return np.zeros(0, np.int32), np.zeros(0, np.int32)
        hits = kernels.count_hits(arrays, len(doc_ids))
        return _rank_hits(hits, _threshold(min_hit_ratio, len(arrays)), cap)
