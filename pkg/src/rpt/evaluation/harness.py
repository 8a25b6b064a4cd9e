"""Evaluation metrics and index benchmarks."""

from __future__ import annotations

import os
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

import numpy as np

from rpt.errors import InputError, MissingUnit
from rpt.pbi import PathTypeIndex, PbiIndex
from rpt.representation import ProgramRepr
from rpt.retriever import RetrievalConfig, Retriever, combined, text_sim
from rpt.store import Store


@dataclass(frozen=True)
class ParallelPair:
    source_id: str
    translation_id: str


def load_pairs(path: Union[str, os.PathLike]) -> list[ParallelPair]:
    """Read ``source_id<TAB>translation_id`` lines; ``#`` lines and blanks are skipped."""
    pairs = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise InputError(f"{path}:{lineno}: expected source_id<TAB>translation_id")
        pairs.append(ParallelPair(parts[0], parts[1]))
    return pairs


def smoke_dir() -> Path:
    return Path(str(resources.files("rpt.evaluation") / "data" / "smoke"))


@dataclass
class QueryRecord:
    source_id: str
    translation_id: str
    rank: Optional[int]  # 1-based rank of the ground truth, None if not retrieved
    top_id: Optional[str]
    seconds: Optional[float]


@dataclass
class EvalReport:
    n_pairs: int
    accuracy_at_1: float
    recall_at_10: float
    mean_seconds: Optional[float]
    median_seconds: Optional[float]
    queries: list[QueryRecord] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def table(self) -> str:
        lines = [
            f"{'source':<32} {'translation':<32} {'rank':>5} {'ms':>8}",
            "-" * 80,
        ]
        for q in self.queries:
            rank = "-" if q.rank is None else str(q.rank)
            ms = "-" if q.seconds is None else f"{q.seconds * 1e3:.2f}"
            lines.append(f"{q.source_id:<32} {q.translation_id:<32} {rank:>5} {ms:>8}")
        lines.append("-" * 80)
        lines.append(f"pairs: {self.n_pairs}  accuracy@1: {self.accuracy_at_1:.3f}  recall@10: {self.recall_at_10:.3f}")
        if self.median_seconds is not None:
            lines.append(f"query time: median {self.median_seconds * 1e3:.2f} ms, mean {self.mean_seconds * 1e3:.2f} ms")
        return "\n".join(lines)


def _timed(fn: Callable[[], object], repeats: int) -> tuple[object, float]:
    """Warm-up call, then the median of ``repeats`` timed calls."""
    result = fn()
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return result, statistics.median(times)


def evaluate(
    pairs: Sequence[ParallelPair],
    retriever: Retriever,
    cfg: RetrievalConfig = RetrievalConfig(),
    repeats: int = 3,
    workers: int = 1,
) -> EvalReport:
    """Query with each pair's source program against the translation's language.

    accuracy@1 counts pairs whose ground truth is ranked first, recall@10 those
    where it appears in the top 10 (the result list is widened to at least 10).
    With ``workers > 1`` queries run concurrently and timing is not recorded.
    """
    store = retriever.store
    for p in pairs:
        for pid in (p.source_id, p.translation_id):
            if pid not in store:
                raise MissingUnit(pid)
    if cfg.k < 10:
        cfg = RetrievalConfig(**{**asdict(cfg), "k": 10, "k1": max(cfg.k1, 10)})

    def run(p: ParallelPair) -> QueryRecord:
        query = store.get(p.source_id).repr
        target = store.get(p.translation_id).language
        call = lambda: retriever.retrieve(query, target, cfg)  # noqa: E731
        if workers > 1:
            ranked, secs = call(), None
        else:
            ranked, secs = _timed(call, repeats)
        ids = [it.program_id for it in ranked]
        rank = ids.index(p.translation_id) + 1 if p.translation_id in ids else None
        return QueryRecord(p.source_id, p.translation_id, rank, ids[0] if ids else None, secs)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            records = list(pool.map(run, pairs))
    else:
        records = [run(p) for p in pairs]
    n = len(records)
    hits1 = sum(1 for r in records if r.rank == 1)
    hits10 = sum(1 for r in records if r.rank is not None and r.rank <= 10)
    times = [r.seconds for r in records if r.seconds is not None]
    return EvalReport(
        n_pairs=n,
        accuracy_at_1=hits1 / n if n else 0.0,
        recall_at_10=hits10 / n if n else 0.0,
        mean_seconds=statistics.fmean(times) if times else None,
        median_seconds=statistics.median(times) if times else None,
        queries=records,
    )


@dataclass
class BenchReport:
    n_records: int
    buckets: int
    queries: int
    language: str
    pbi_seconds: float
    naive_seconds: float
    scan_seconds: float
    struct_scan_seconds: float
    mean_pbi_candidates: float
    mean_naive_candidates: float
    subset_violations: int
    backend: str

    @property
    def speedup_vs_scan(self) -> float:
        return self.scan_seconds / self.pbi_seconds

    @property
    def speedup_vs_naive(self) -> float:
        return self.naive_seconds / self.pbi_seconds

    @property
    def speedup_vs_struct_scan(self) -> float:
        return self.struct_scan_seconds / self.pbi_seconds

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(
            speedup_vs_scan=self.speedup_vs_scan,
            speedup_vs_naive=self.speedup_vs_naive,
            speedup_vs_struct_scan=self.speedup_vs_struct_scan,
        )
        return d

    def table(self) -> str:
        rows = [
            ("PBI probe (slack=1)", self.pbi_seconds, 1.0),
            ("path-type index", self.naive_seconds, self.speedup_vs_naive),
            ("full scan, combined similarity", self.scan_seconds, self.speedup_vs_scan),
            ("full scan, structural only", self.struct_scan_seconds, self.speedup_vs_struct_scan),
        ]
        out = [
            f"records: {self.n_records}  buckets: {self.buckets}  queries: {self.queries}  "
            f"language: {self.language}  kernels: {self.backend}",
            f"{'method':<32} {'median ms':>10} {'PBI speedup':>12}",
        ]
        out += [f"{name:<32} {secs * 1e3:>10.3f} {ratio:>11.1f}x" for name, secs, ratio in rows]
        out.append(
            f"mean candidates: PBI {self.mean_pbi_candidates:.1f}, path-type index {self.mean_naive_candidates:.1f}; "
            f"subset violations: {self.subset_violations}"
        )
        return "\n".join(out)


def full_scan(query: ProgramRepr, reprs: Sequence[ProgramRepr], matrix, cfg: RetrievalConfig) -> np.ndarray:
    """Combined similarity of ``query`` to every record: retrieval without an index."""
    s_struct = matrix.cosine(query)
    return np.fromiter(
        (combined(s, text_sim(query, r), cfg) for s, r in zip(s_struct.tolist(), reprs)),
        dtype=np.float64,
        count=len(reprs),
    )


def bench_index(
    store: Store,
    buckets: int = 16,
    query_count: int = 10,
    seed: int = 0,
    index: Optional[PbiIndex] = None,
    cfg: RetrievalConfig = RetrievalConfig(),
    repeats: int = 3,
    language: Optional[str] = None,
) -> BenchReport:
    """Time candidate generation by PBI probing against a bucket-free path-type
    index and against a full linear similarity scan.

    Queries are stored programs drawn with ``seed``; each method is timed as
    the median of ``repeats`` runs after one warm-up. Candidate sets are also
    checked for PBI(slack=1) ⊆ PBI(slack=2) ⊆ path-type index.
    """
    from rpt import kernels
    from rpt.pbi import build

    if index is None:
        index = build(store, buckets)
    naive = PathTypeIndex.from_pbi(index)
    retriever = Retriever(index, store)
    if language is None:
        counts = {lang: li.n_docs for lang, li in index.languages.items()}
        language = max(sorted(counts), key=counts.get)
    li = index.language(language)
    reprs = [store.get(pid).repr for pid in li.doc_ids]
    matrix = retriever.matrix(language)
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(reprs), size=min(query_count, len(reprs)), replace=False)
    queries = [reprs[i] for i in sorted(picks.tolist())]

    pbi_t, naive_t, scan_t, struct_t = [], [], [], []
    pbi_n, naive_n = [], []
    violations = 0
    for q in queries:
        (docs1, _), t = _timed(lambda: index.gather_docs(q, language, 1, cfg.min_hit_ratio, None), repeats)
        pbi_t.append(t)
        (docs_n, _), t = _timed(lambda: naive.gather_docs(q, language, cfg.min_hit_ratio), repeats)
        naive_t.append(t)
        _, t = _timed(lambda: full_scan(q, reprs, matrix, cfg), repeats)
        scan_t.append(t)
        _, t = _timed(lambda: matrix.cosine(q), repeats)
        struct_t.append(t)
        docs2, _ = index.gather_docs(q, language, 2, cfg.min_hit_ratio, None)
        s1, s2, sn = set(docs1.tolist()), set(docs2.tolist()), set(docs_n.tolist())
        if not (s1 <= s2 <= sn):
            violations += 1
        pbi_n.append(len(s1))
        naive_n.append(len(sn))
    return BenchReport(
        n_records=len(store),
        buckets=index.bucket_count,
        queries=len(queries),
        language=language,
        pbi_seconds=statistics.median(pbi_t),
        naive_seconds=statistics.median(naive_t),
        scan_seconds=statistics.median(scan_t),
        struct_scan_seconds=statistics.median(struct_t),
        mean_pbi_candidates=statistics.fmean(pbi_n),
        mean_naive_candidates=statistics.fmean(naive_n),
        subset_violations=violations,
        backend=kernels.BACKEND,
    )


def build_smoke_store(
    path: Union[str, os.PathLike],
    pad: int = 0,
    seed: int = 0,
    frontend=None,
) -> tuple[Store, list[ParallelPair]]:
    """Ingest the bundled Java/C# smoke set into a new store at ``path``.

    ``pad`` synthetic records (split across both languages) are added as
    distractors. Returns the store reopened read-only and the parallel pairs.
    """
    from rpt.evaluation.synth import SYNTH_CREATED, synth_reprs
    from rpt.ingest import discover, ingest
    from rpt.pipeline import Frontend
    from rpt.store import StoreRecord

    root = smoke_dir()
    frontend = frontend or Frontend()
    with Store.open(path, "append", config=frontend.config, created=SYNTH_CREATED) as store:
        files = discover([root / "java", root / "csharp"])
        files = [(f"{lang_dir}/{pid}", p, lang) for pid, p, lang in files for lang_dir in [p.parent.name]]
        summary = ingest(store, files, frontend)
        if summary.ok != len(files):
            raise InputError(f"smoke set did not ingest cleanly: {summary.to_dict()}")
        for rep in synth_reprs(pad, seed) if pad else []:
            store.append(StoreRecord(rep, "synthetic"))
    return Store.open(path), load_pairs(root / "pairs.tsv")
