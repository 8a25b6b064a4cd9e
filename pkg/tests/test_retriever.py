from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rpt.errors import IndexStoreMismatch
from rpt.evaluation.synth import synth_reprs, write_store
from rpt.frontend import SourceUnit
from rpt.pbi import build
from rpt.representation import ProgramRepr
from rpt.retriever import (
    FeatureMatrix,
    RetrievalConfig,
    Retriever,
    brute_force,
    combined,
    retrieve,
    struct_sim,
    text_sim,
)
from rpt.store import Store, StoreRecord


def rp(freq: dict, text: dict | None = None, pid: str = "p") -> ProgramRepr:
    return ProgramRepr(pid, "java", freq, text or {})


def test_struct_sim_examples():
    a = rp({"t1": 2, "t2": 1})
    b = rp({"t1": 1, "t2": 1})
    assert struct_sim(a, b) == pytest.approx(3 / math.sqrt(10))
    assert struct_sim(a, b) == pytest.approx(0.9487, abs=5e-5)
    assert struct_sim(a, a) == 1.0
    assert struct_sim(a, rp({"t3": 4})) == 0.0


def test_text_sim_examples():
    a = rp({"t": 1}, {"t": {"x": 1, "y": 1}})
    b = rp({"t": 1}, {"t": {"x": 1}})
    assert text_sim(a, b) == pytest.approx(1 / math.sqrt(2))
    assert text_sim(a, a) == pytest.approx(1.0)
    assert text_sim(a, rp({"t": 1}, {"t": {"z": 3}})) == 0.0
    assert text_sim(a, rp({"u": 1}, {"u": {"x": 1}})) == 0.0


def test_combined_examples():
    cfg = RetrievalConfig()
    assert combined(1.0, 1.0, cfg) == pytest.approx(1.0)
    assert combined(0.0, 0.0, cfg) == 0.0
    assert combined(0.9487, 0.7071, cfg) == pytest.approx(0.8521, abs=1e-4)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"w_struct": 0.5, "w_text": 0.4},
        {"w_struct": -0.1, "w_text": 1.1},
        {"k": 20, "k1": 10},
        {"k": 0},
        {"slack": -1},
        {"min_hit_ratio": 1.5},
        {"cap": 0},
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        RetrievalConfig(**kwargs)


counts = st.dictionaries(st.sampled_from("abcdefgh"), st.integers(1, 20), min_size=1)


@given(counts, counts, st.integers(1, 7))
def test_struct_sim_properties(a, b, scale):
    x, y = rp(a), rp(b)
    s = struct_sim(x, y)
    assert 0.0 <= s <= 1.0
    assert s == struct_sim(y, x)
    scaled = rp({k: v * scale for k, v in a.items()})
    assert struct_sim(scaled, y) == pytest.approx(s, abs=1e-12)


@given(counts, counts)
def test_text_sim_symmetric_and_bounded(a, b):
    x = rp(a, {k: {k: v} for k, v in a.items()})
    y = rp(b, {k: {"shared": 1, k: 1} for k in b})
    t = text_sim(x, y)
    assert 0.0 <= t <= 1.0 + 1e-12
    assert t == pytest.approx(text_sim(y, x))


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpus") / "store"
    reprs = synth_reprs(400, seed=21)
    store = write_store(path, reprs)
    return store, build(store, 16), reprs


def test_feature_matrix_matches_struct_sim(corpus):
    store, index, reprs = corpus
    r = Retriever(index, store)
    m = r.matrix("java")
    docs = [store.get(pid).repr for pid in index.language("java").doc_ids]
    q = synth_reprs(1, seed=5)[0]
    scores = m.cosine(q)
    assert [float(s) for s in scores] == [struct_sim(q, d) for d in docs]
    rows = np.array([5, 0, 17], dtype=np.int32)
    assert m.cosine(q, rows).tolist() == [scores[i] for i in rows]


def test_relaxed_retrieval_equals_brute_force(corpus):
    store, index, reprs = corpus
    cfg = RetrievalConfig(k=10, k1=400, slack=16, min_hit_ratio=0.0, cap=None)
    for q in synth_reprs(15, seed=22):
        targets = [r for r in reprs if r.language == "csharp" and set(r.freq) & set(q.freq)]
        want = brute_force(q, targets, cfg)
        got = retrieve(q, "csharp", cfg, index, store)
        assert [(g.program_id, g.s_combined) for g in got] == [(w.program_id, w.s_combined) for w in want]


def test_default_retrieval_is_sorted_and_bounded(corpus):
    store, index, _ = corpus
    got = Retriever(index, store).retrieve(synth_reprs(1, seed=23)[0], "java", RetrievalConfig(k=5, k1=20))
    assert len(got) <= 5
    keys = [(-g.s_combined, g.program_id) for g in got]
    assert keys == sorted(keys)
    for g in got:
        assert g.s_combined == pytest.approx(0.6 * g.s_struct + 0.4 * g.s_text)
        assert g.locator == "synthetic"


def test_self_retrieval(corpus):
    store, index, reprs = corpus
    r = Retriever(index, store)
    for q in reprs[:10]:
        top = r.retrieve(q, q.language)[0]
        assert top.program_id == q.program_id
        assert top.s_combined == pytest.approx(1.0, abs=1e-9)


def test_empty_results(corpus):
    store, index, _ = corpus
    r = Retriever(index, store)
    assert r.retrieve(rp({"NOPE(IDENT)": 1}), "java") == []
    assert r.retrieve(synth_reprs(1, seed=1)[0], "javascript") == []


def test_text_threshold_filters(corpus):
    store, index, _ = corpus
    q = synth_reprs(1, seed=24)[0]
    got = Retriever(index, store).retrieve(q, "java", RetrievalConfig(text_threshold=0.2))
    assert all(g.s_text >= 0.2 for g in got)


def test_stale_index_detected(tmp_path):
    with Store.open(tmp_path / "s", "append") as s:
        s.append(StoreRecord(rp({"t": 1}, pid="a"), ""))
    index = build(Store.open(tmp_path / "s"), 4)
    with Store.open(tmp_path / "s", "append") as s:
        s.append(StoreRecord(rp({"t": 2}, pid="b"), ""))
    with pytest.raises(IndexStoreMismatch):
        Retriever(index, Store.open(tmp_path / "s"))


def test_query_from_source(smoke, frontend, smoke_root):
    store, index, _ = smoke
    body = (smoke_root / "java" / "07_gcd.java").read_text(encoding="utf-8")
    got = Retriever(index, store, frontend).retrieve(SourceUnit("q", "java", body), "csharp", RetrievalConfig(k=3, k1=10))
    assert got[0].program_id == "csharp/07_gcd.cs"
