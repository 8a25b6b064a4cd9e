from __future__ import annotations

import numpy as np
import pytest

from rpt.evaluation.synth import (
    mutate_program,
    path_type_universe,
    render_java,
    synth_corpus,
    synth_java_model,
    synth_reprs,
)
from rpt.frontend import SourceUnit
from rpt.representation import PathType


def test_same_seed_same_store_bytes(tmp_path):
    a = synth_corpus(tmp_path / "a", 300, seed=42)
    b = synth_corpus(tmp_path / "b", 300, seed=42)
    for name in ("records.jsonl", "manifest.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert a.checksum() == b.checksum()
    assert synth_reprs(5, seed=1) != synth_reprs(5, seed=2)


def test_single_record(tmp_path):
    store = synth_corpus(tmp_path / "s", 1, seed=0)
    assert len(store) == 1


def test_rejects_zero():
    with pytest.raises(ValueError):
        synth_reprs(0, seed=0)


def test_path_types_are_well_formed():
    universe = set(path_type_universe())
    for r in synth_reprs(50, seed=3):
        assert set(r.freq) <= universe
        assert set(r.text) <= set(r.freq)
        for key in r.freq:
            PathType.from_key(key)


def test_frequency_moments_match_geometric():
    p = 0.25
    samples = np.array([f for r in synth_reprs(10_000, seed=42) for f in r.freq.values()], dtype=float)
    mean, var = 1 / p, (1 - p) / p**2
    assert abs(samples.mean() - mean) / mean < 0.05
    assert abs(samples.var() - var) / var < 0.05


def test_generated_java_parses_and_mutants_keep_structure(frontend):
    for seed in range(15):
        model = synth_java_model(seed)
        clone = mutate_program(model, seed + 100)
        a = frontend.represent(SourceUnit("a", "java", render_java(model)))
        b = frontend.represent(SourceUnit("b", "java", render_java(clone)))
        assert a.freq == b.freq
        assert render_java(model) != render_java(clone)
