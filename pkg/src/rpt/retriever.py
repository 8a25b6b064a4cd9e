"""Hierarchical retrieval: index probe -> structural filter -> textual re-scoring."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from rpt import kernels
from rpt.errors import IndexStoreMismatch
from rpt.frontend import SourceUnit
from rpt.pbi import DEFAULT_CAP, DEFAULT_MIN_HIT_RATIO, DEFAULT_SLACK, LanguageIndex, PbiIndex
from rpt.representation import ProgramRepr
from rpt.store import Store


@dataclass(frozen=True)
class RetrievalConfig:
    w_struct: float = 0.6
    w_text: float = 0.4
    k1: int = 100
    k: int = 10
    slack: int = DEFAULT_SLACK
    min_hit_ratio: float = DEFAULT_MIN_HIT_RATIO
    cap: Optional[int] = DEFAULT_CAP
    # optional floor on textual similarity applied before the final ranking
    text_threshold: Optional[float] = None

    def __post_init__(self) -> None:
        if self.w_struct < 0 or self.w_text < 0:
            raise ValueError("weights must be non-negative")
        if abs(self.w_struct + self.w_text - 1.0) > 1e-12:
            raise ValueError("w_struct + w_text must equal 1")
        if not self.k1 >= self.k >= 1:
            raise ValueError("need k1 >= k >= 1")
        if self.slack < 0:
            raise ValueError("slack must be non-negative")
        if not 0.0 <= self.min_hit_ratio <= 1.0:
            raise ValueError("min_hit_ratio must lie in [0, 1]")
        if self.cap is not None and self.cap < 1:
            raise ValueError("cap must be >= 1")


@dataclass(frozen=True)
class RankedItem:
    program_id: str
    s_struct: float
    s_text: float
    s_combined: float
    locator: str = ""


def _sq_norm(counts: Mapping[str, int]) -> int:
    return sum(v * v for v in counts.values())


def _sparse_cosine(a: Mapping[str, int], b: Mapping[str, int]) -> float:
    if len(a) > len(b):
        a, b = b, a
    dot = sum(v * b[k] for k, v in a.items() if k in b)
    if not dot:
        return 0.0
    return min(dot / math.sqrt(_sq_norm(a) * _sq_norm(b)), 1.0)


def struct_sim(a: ProgramRepr, b: ProgramRepr) -> float:
    """Cosine of the two path-type frequency vectors."""
    return _sparse_cosine(a.freq, b.freq)


def text_sim(a: ProgramRepr, b: ProgramRepr) -> float:
    """Token-bag cosine per shared path type, averaged with weight min(freq_a, freq_b)."""
    shared = sorted(a.freq.keys() & b.freq.keys())
    if not shared:
        return 0.0
    num = 0.0
    den = 0
    for key in shared:
        m = min(a.freq[key], b.freq[key])
        den += m
        bag_a = a.text.get(key)
        bag_b = b.text.get(key)
        if bag_a and bag_b:
            num += m * _sparse_cosine(bag_a, bag_b)
    return num / den


def combined(s_struct: float, s_text: float, cfg: RetrievalConfig) -> float:
    return cfg.w_struct * s_struct + cfg.w_text * s_text


class FeatureMatrix:
    """CSR matrix of path-type frequencies for one language, rows in doc order."""

    def __init__(self, reprs: Sequence[ProgramRepr], type_ids: Mapping[str, int]) -> None:
        self.type_ids = type_ids
        self.n_types = len(type_ids)
        indptr = np.zeros(len(reprs) + 1, dtype=np.int64)
        ids: list[int] = []
        vals: list[int] = []
        sq_norms = np.zeros(len(reprs), dtype=np.float64)
        for r, rep in enumerate(reprs):
            row = sorted((type_ids[k], v) for k, v in rep.freq.items() if k in type_ids)
            ids.extend(t for t, _ in row)
            vals.extend(v for _, v in row)
            indptr[r + 1] = len(ids)
            sq_norms[r] = _sq_norm(rep.freq)
        self.indptr = indptr
        self.ids = np.asarray(ids, dtype=np.int32)
        self.vals = np.asarray(vals, dtype=np.float64)
        self.sq_norms = sq_norms

    def query_vector(self, query: ProgramRepr) -> tuple[np.ndarray, np.ndarray]:
        keys = sorted(query.freq)
        q_ids = np.asarray([self.type_ids.get(k, -1) for k in keys], dtype=np.int32)
        q_vals = np.asarray([query.freq[k] for k in keys], dtype=np.float64)
        return q_ids, q_vals

    def cosine(self, query: ProgramRepr, rows: Optional[np.ndarray] = None, backend=None) -> np.ndarray:
        """Structural similarity of ``query`` to the given rows (all rows by default)."""
        k = backend or kernels.backend
        q_ids, q_vals = self.query_vector(query)
        if rows is not None:
            rows = np.ascontiguousarray(rows, dtype=np.int32)
        return k.cosine_rows(q_ids, q_vals, self.indptr, self.ids, self.vals, self.sq_norms, self.n_types, rows)


class Retriever:
    """Read-only query engine over a store and the index built from it."""

    def __init__(self, index: PbiIndex, store: Store, frontend=None, verify: bool = True) -> None:
        if verify and index.checksum != store.checksum():
            raise IndexStoreMismatch("index was built from a different store state; rebuild it")
        self.index = index
        self.store = store
        self._frontend = frontend
        self._matrices: dict[str, FeatureMatrix] = {}

    @property
    def frontend(self):
        if self._frontend is None:
            from rpt.pipeline import Frontend

            self._frontend = Frontend(config=self.store.config)
        return self._frontend

    def matrix(self, language: str) -> Optional[FeatureMatrix]:
        m = self._matrices.get(language)
        if m is None:
            li: Optional[LanguageIndex] = self.index.language(language)
            if li is None:
                return None
            reprs = [self.store.get(pid).repr for pid in li.doc_ids]
            type_ids = {k: i for i, k in enumerate(sorted(li.types))}
            m = self._matrices[language] = FeatureMatrix(reprs, type_ids)
        return m

    def represent(self, query: Union[SourceUnit, ProgramRepr]) -> ProgramRepr:
        if isinstance(query, SourceUnit):
            return self.frontend.represent(query)
        return query

    def retrieve(
        self,
        query: Union[SourceUnit, ProgramRepr],
        target_language: str,
        cfg: RetrievalConfig = RetrievalConfig(),
    ) -> list[RankedItem]:
        q = self.represent(query)
        li = self.index.language(target_language)
        if li is None:
            return []
        docs, _ = self.index.gather_docs(q, target_language, cfg.slack, cfg.min_hit_ratio, cfg.cap)
        if len(docs) == 0:
            return []
        s_struct = self.matrix(target_language).cosine(q, docs)
        keep = np.lexsort((docs, -s_struct))[: cfg.k1]
        scored = []
        for i in keep.tolist():
            pid = li.doc_ids[int(docs[i])]
            rec = self.store.get(pid)
            st = float(s_struct[i])
            tx = text_sim(q, rec.repr)
            if cfg.text_threshold is not None and tx < cfg.text_threshold:
                continue
            scored.append(RankedItem(pid, st, tx, combined(st, tx, cfg), rec.locator))
        scored.sort(key=lambda it: (-it.s_combined, it.program_id))
        return scored[: cfg.k]


def retrieve(
    query: Union[SourceUnit, ProgramRepr],
    target_language: str,
    cfg: RetrievalConfig,
    index: PbiIndex,
    store: Store,
) -> list[RankedItem]:
    return Retriever(index, store).retrieve(query, target_language, cfg)


def brute_force(
    query: ProgramRepr,
    candidates: Sequence[ProgramRepr],
    cfg: RetrievalConfig = RetrievalConfig(),
) -> list[RankedItem]:
    """Exhaustive ranking by combined score; the reference the filtered pipeline must match."""
    items = []
    for r in candidates:
        st = struct_sim(query, r)
        tx = text_sim(query, r)
        items.append(RankedItem(r.program_id, st, tx, combined(st, tx, cfg)))
    items.sort(key=lambda it: (-it.s_combined, it.program_id))
    return items[: cfg.k]
