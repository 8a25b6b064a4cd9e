from __future__ import annotations

from rpt.ingest import discover, ingest
from rpt.store import Store


def _tree(tmp_path, smoke_root):
    d = tmp_path / "src"
    d.mkdir()
    for name in ("01_sum.java", "02_max.java"):
        (d / name).write_text((smoke_root / "java" / name).read_text(encoding="utf-8"), encoding="utf-8")
    (d / "broken.java").write_text("class A { int x = ; }", encoding="utf-8")
    (d / "notes.txt").write_text("not code", encoding="utf-8")
    return d


def test_discover_by_extension(tmp_path, smoke_root):
    d = _tree(tmp_path, smoke_root)
    found = discover([d])
    assert [(pid, lang) for pid, _, lang in found] == [
        ("01_sum.java", "java"),
        ("02_max.java", "java"),
        ("broken.java", "java"),
    ]
    forced = discover([d / "notes.txt"], lang="java")
    assert forced[0][2] == "java"


def test_ingest_counts_failures(tmp_path, smoke_root, frontend):
    d = _tree(tmp_path, smoke_root)
    with Store.open(tmp_path / "s", "append") as s:
        summary = ingest(s, discover([d]), frontend)
    assert (summary.ok, summary.parse_failed, summary.empty) == (2, 1, 0)
    with Store.open(tmp_path / "s", "append") as s:
        again = ingest(s, discover([d]), frontend)
    assert (again.ok, again.duplicate, again.parse_failed) == (0, 2, 1)


def test_ingest_empty_program(tmp_path, frontend):
    (tmp_path / "e.java").write_text("// nothing here\n", encoding="utf-8")
    with Store.open(tmp_path / "s", "append") as s:
        summary = ingest(s, discover([tmp_path / "e.java"]), frontend)
    assert summary.empty == 1 and summary.ok == 0


def test_parallel_ingest_matches_serial(tmp_path, smoke_root, frontend):
    files = discover([smoke_root / "java"])
    with Store.open(tmp_path / "a", "append") as s:
        ingest(s, files, frontend, jobs=1)
    with Store.open(tmp_path / "b", "append") as s:
        ingest(s, files, frontend, jobs=2)
    assert (tmp_path / "a" / "records.jsonl").read_bytes() == (tmp_path / "b" / "records.jsonl").read_bytes()
