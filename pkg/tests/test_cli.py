from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from rpt.cli import main
from rpt.evaluation.synth import synth_corpus
from rpt.store import Store


def run(capsys, *args: str) -> tuple[int, str, str]:
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def built(tmp_path, smoke_root, capsys):
    store = tmp_path / "store"
    assert run(capsys, "ingest", "--store", store, smoke_root / "java", smoke_root / "csharp")[0] == 0
    assert run(capsys, "build-index", "--store", store, "--buckets", "8")[0] == 0
    return store


def test_ingest_summary(tmp_path, smoke_root, capsys, caplog):
    d = tmp_path / "src"
    d.mkdir()
    shutil.copy(smoke_root / "java" / "01_sum.java", d)
    shutil.copy(smoke_root / "java" / "02_max.java", d)
    (d / "bad.java").write_text("class A { int x = ; }", encoding="utf-8")
    code, out, err = run(capsys, "ingest", "--store", tmp_path / "s", d)
    assert code == 0
    assert json.loads(out) == {"ok": 2, "parse_failed": 1, "empty": 0, "duplicate": 0}
    assert "bad.java" in caplog.text
    code, out, err = run(capsys, "ingest", "--store", tmp_path / "s", d)
    assert json.loads(out)["duplicate"] == 2 and "already stored" in caplog.text


def test_ingest_empty_directory(tmp_path, capsys):
    (tmp_path / "empty").mkdir()
    code, out, _ = run(capsys, "ingest", "--store", tmp_path / "s", tmp_path / "empty")
    assert code == 0 and json.loads(out) == {"ok": 0, "parse_failed": 0, "empty": 0, "duplicate": 0}


def test_ingest_config_mismatch(tmp_path, smoke_root, capsys):
    run(capsys, "ingest", "--store", tmp_path / "s", "--max-path-length", "8", smoke_root / "java" / "01_sum.java")
    code, _, err = run(capsys, "ingest", "--store", tmp_path / "s", "--max-path-length", "4", smoke_root / "java")
    assert code == 2 and "max_length" in err


def test_query_self_and_translation(built, smoke_root, capsys):
    code, out, _ = run(capsys, "query", "--store", built, "--target-lang", "java", "--k", "1", smoke_root / "java" / "05_reverse.java")
    assert code == 0
    top = json.loads(out.splitlines()[0])
    assert top["program_id"] == "05_reverse.java" and top["rank"] == 1
    assert top["s_combined"] == pytest.approx(1.0)
    assert set(top) == {"rank", "program_id", "locator", "s_struct", "s_text", "s_combined"}
    code, out, _ = run(capsys, "query", "--store", built, "--target-lang", "csharp", "--k", "3", smoke_root / "java" / "05_reverse.java")
    lines = [json.loads(x) for x in out.splitlines()]
    assert [x["rank"] for x in lines] == [1, 2, 3]
    assert lines[0]["program_id"] == "05_reverse.cs"


def test_query_empty_target(built, smoke_root, capsys):
    code, out, _ = run(capsys, "query", "--store", built, "--target-lang", "javascript", smoke_root / "java" / "01_sum.java")
    assert code == 0 and out == ""


def test_query_malformed_file(built, tmp_path, capsys):
    bad = tmp_path / "bad.java"
    bad.write_text("int x = ;", encoding="utf-8")
    code, _, err = run(capsys, "query", "--store", built, "--target-lang", "csharp", bad)
    assert code == 2 and "line 1, column 9" in err


def test_query_bad_tunables(built, smoke_root, capsys):
    f = smoke_root / "java" / "01_sum.java"
    with pytest.raises(SystemExit) as exc:
        main(["query", "--store", str(built), "--target-lang", "java", "--w-struct", "1.5", str(f)])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["query", "--store", str(built), "--target-lang", "java", "--k", "50", "--k1", "10", str(f)])
    assert exc.value.code == 2


def test_query_missing_index(tmp_path, smoke_root, capsys):
    run(capsys, "ingest", "--store", tmp_path / "s", smoke_root / "java" / "01_sum.java")
    code, _, err = run(capsys, "query", "--store", tmp_path / "s", "--target-lang", "java", smoke_root / "java" / "01_sum.java")
    assert code == 1 and "no index" in err


def test_eval_pairs(built, smoke_root, tmp_path, capsys):
    pairs = tmp_path / "pairs.tsv"
    lines = (smoke_root / "pairs.tsv").read_text().splitlines()
    pairs.write_text("\n".join(line.replace("java/", "").replace("csharp/", "") for line in lines) + "\n")
    report = tmp_path / "report.json"
    code, out, _ = run(capsys, "eval", "--store", built, "--pairs", pairs, "--repeats", "1", "--report", report)
    assert code == 0 and "recall@10" in out
    data = json.loads(report.read_text())
    assert data["n_pairs"] == 20 and data["recall_at_10"] >= data["accuracy_at_1"]


def test_eval_smoke_json(capsys):
    code, out, _ = run(capsys, "eval", "--smoke", "--pad", "100", "--json", "--repeats", "1")
    data = json.loads(out)
    assert code == 0 and data["n_pairs"] == 20 and data["recall_at_10"] >= 0.8


def test_bench_small(tmp_path, capsys):
    code, out, _ = run(capsys, "bench", "--n", "500", "--queries", "5", "--repeats", "1", "--json", "--store", tmp_path / "b")
    data = json.loads(out)
    assert code == 0 and data["n_records"] == 500 and data["subset_violations"] == 0


def test_stats_empty_store(tmp_path, capsys):
    Store.open(tmp_path / "s", "append").close()
    code, out, _ = run(capsys, "stats", "--store", tmp_path / "s")
    data = json.loads(out)
    assert code == 0 and data["records"] == 0 and data["languages"] == {}


def test_stats_synthetic_store(tmp_path, capsys):
    store = synth_corpus(tmp_path / "s", 10_000, seed=42)
    assert run(capsys, "build-index", "--store", tmp_path / "s", "--buckets", "16")[0] == 0
    code, out, _ = run(capsys, "stats", "--store", tmp_path / "s", "--top", "3")
    data = json.loads(out)
    assert data["records"] == 10_000 and data["index"]["consistent"]
    for lang, occ in data["index"]["occupancy"].items():
        assert occ["max_buckets"] <= 16
    # cross-check summaries against a direct scan
    for lang, info in data["languages"].items():
        assert info["programs"] == sum(1 for _ in store.scan(lang))
        for top in info["top_path_types"]:
            values = sorted(r.repr.freq[top["path_type"]] for r in store.scan(lang) if top["path_type"] in r.repr.freq)
            assert top["programs"] == len(values)
            assert (top["min"], top["max"]) == (values[0], values[-1])


def test_stats_does_not_write(built, capsys):
    before = {p: p.read_bytes() for p in built.rglob("*") if p.is_file()}
    run(capsys, "stats", "--store", built)
    assert before == {p: p.read_bytes() for p in built.rglob("*") if p.is_file()}


def test_console_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "rpt.cli", "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    for sub in ("ingest", "build-index", "query", "eval", "bench", "stats"):
        assert sub in out.stdout
    bad = subprocess.run([sys.executable, "-m", "rpt.cli", "query"], capture_output=True, text=True)
    assert bad.returncode == 2


def test_mapping_dir_env(tmp_path, smoke_root, capsys, monkeypatch):
    maps = tmp_path / "maps"
    maps.mkdir()
    (maps / "java.map").write_text("identifier\tIDENT\n", encoding="utf-8")
    monkeypatch.setenv("RPT_MAPPING_DIR", str(maps))
    code, out, _ = run(capsys, "ingest", "--store", tmp_path / "s", smoke_root / "java" / "01_sum.java")
    assert code == 0 and json.loads(out)["ok"] == 1
    rec = next(Store.open(tmp_path / "s").scan())
    # only identifiers are mapped; everything else falls back to OTHER
    assert all(k.startswith(("OTHER", "PROGRAM")) for k in rec.repr.freq)


def test_query_empty_program(built, tmp_path, capsys):
    f = tmp_path / "empty.java"
    f.write_text("// nothing\n", encoding="utf-8")
    code, out, _ = run(capsys, "query", "--store", built, "--target-lang", "java", f)
    assert code == 0 and out == ""


def test_eval_missing_unit(built, tmp_path, capsys):
    pairs = tmp_path / "pairs.tsv"
    pairs.write_text("01_sum.java\tmissing.cs\n", encoding="utf-8")
    code, _, err = run(capsys, "eval", "--store", built, "--pairs", pairs)
    assert code == 2 and "missing.cs" in err
