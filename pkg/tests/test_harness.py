from __future__ import annotations

import pytest

from rpt.errors import InputError, MissingUnit
from rpt.evaluation.harness import (
    ParallelPair,
    bench_index,
    evaluate,
    load_pairs,
)
from rpt.evaluation.synth import synth_corpus
from rpt.pbi import build
from rpt.representation import ProgramRepr
from rpt.retriever import RetrievalConfig, Retriever
from rpt.store import Store, StoreRecord


def test_load_pairs(tmp_path):
    p = tmp_path / "pairs.tsv"
    p.write_text("# header\na.java\ta.cs\n\nb.java\tb.cs\n", encoding="utf-8")
    assert load_pairs(p) == [ParallelPair("a.java", "a.cs"), ParallelPair("b.java", "b.cs")]
    p.write_text("a.java a.cs\n", encoding="utf-8")
    with pytest.raises(InputError):
        load_pairs(p)


def test_smoke_report_matches_replayed_queries(smoke):
    store, index, pairs = smoke
    retriever = Retriever(index, store)
    report = evaluate(pairs, retriever, repeats=1)
    assert report.n_pairs == 20
    assert report.recall_at_10 >= report.accuracy_at_1
    assert report.median_seconds is not None and report.mean_seconds is not None
    # replay each pair by hand
    cfg = RetrievalConfig(k=10)
    for pair, q in zip(pairs, report.queries):
        ids = [it.program_id for it in retriever.retrieve(store.get(pair.source_id).repr, "csharp", cfg)]
        assert q.rank == (ids.index(pair.translation_id) + 1 if pair.translation_id in ids else None)
        assert q.top_id == ids[0]
    hits1 = sum(q.rank == 1 for q in report.queries)
    assert report.accuracy_at_1 == hits1 / 20
    d = report.to_dict()
    assert d["n_pairs"] == 20 and len(d["queries"]) == 20
    assert "accuracy@1" in report.table()


def test_self_pair_counts(tmp_path):
    rep = ProgramRepr("a", "java", {"T(IDENT)": 2}, {"T(IDENT)": {"x": 2}})
    twin = ProgramRepr("b", "csharp", rep.freq, rep.text)
    with Store.open(tmp_path / "s", "append") as s:
        s.append(StoreRecord(rep, ""))
        s.append(StoreRecord(twin, ""))
    store = Store.open(tmp_path / "s")
    report = evaluate([ParallelPair("a", "b")], Retriever(build(store, 4), store))
    assert report.accuracy_at_1 == 1.0 and report.recall_at_10 == 1.0


def test_empty_pair_list(smoke):
    store, index, _ = smoke
    report = evaluate([], Retriever(index, store))
    assert report.n_pairs == 0 and report.median_seconds is None and report.queries == []


def test_missing_unit(smoke):
    store, index, _ = smoke
    with pytest.raises(MissingUnit):
        evaluate([ParallelPair("java/01_sum.java", "nope.cs")], Retriever(index, store))


def test_parallel_mode_disables_timing(smoke):
    store, index, pairs = smoke
    report = evaluate(pairs, Retriever(index, store), workers=4)
    assert report.median_seconds is None
    assert all(q.seconds is None for q in report.queries)
    assert report.accuracy_at_1 == evaluate(pairs, Retriever(index, store), repeats=1).accuracy_at_1


def test_bench_tiny_store(tmp_path):
    store = synth_corpus(tmp_path / "s", 10, seed=1)
    report = bench_index(store, buckets=4, query_count=3, seed=0, repeats=1)
    assert report.queries == 3 and report.subset_violations == 0
    assert report.speedup_vs_scan > 0 and report.speedup_vs_naive > 0
    assert set(report.to_dict()) >= {"speedup_vs_scan", "pbi_seconds", "subset_violations"}
    assert "PBI probe" in report.table()
