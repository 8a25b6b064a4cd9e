from __future__ import annotations

import json

import pytest

from rpt.errors import ConfigMismatch, CorruptStore, DuplicateId, NotFound, StoreError, StoreLocked
from rpt.representation import ExtractionConfig, ProgramRepr
from rpt.store import Store, StoreRecord, dumps_canonical


def rec(pid: str, lang: str = "java", **freq: int) -> StoreRecord:
    freq = freq or {"t": 1}
    return StoreRecord(ProgramRepr(pid, lang, dict(freq), {k: {"tok": 1} for k in freq}), f"src/{pid}")


def test_new_store_has_manifest(tmp_path):
    with Store.open(tmp_path / "s", "append") as s:
        assert len(s) == 0
        assert list(s.scan()) == []
    manifest = json.loads((tmp_path / "s" / "manifest.json").read_text())
    assert manifest["config"] == {"max_length": 8, "max_paths": 10000}
    assert manifest["counts"] == {}


def test_read_mode_requires_existing_store(tmp_path):
    with pytest.raises(StoreError):
        Store.open(tmp_path / "missing")


def test_append_get_round_trip(tmp_path):
    r = rec("a", t=3)
    with Store.open(tmp_path / "s", "append") as s:
        s.append(r)
        assert s.get("a") == r
    again = Store.open(tmp_path / "s")
    assert again.get("a") == r
    assert "a" in again and "b" not in again
    assert json.loads((tmp_path / "s" / "manifest.json").read_text())["counts"] == {"java": 1}


def test_get_unknown(tmp_path):
    with Store.open(tmp_path / "s", "append") as s:
        with pytest.raises(NotFound):
            s.get("nope")


def test_duplicate_id(tmp_path):
    with Store.open(tmp_path / "s", "append") as s:
        s.append(rec("a"))
        with pytest.raises(DuplicateId):
            s.append(rec("a"))


def test_read_mode_rejects_append(tmp_path):
    Store.open(tmp_path / "s", "append").close()
    with pytest.raises(StoreError):
        Store.open(tmp_path / "s").append(rec("a"))


def test_config_mismatch(tmp_path):
    Store.open(tmp_path / "s", "append", config=ExtractionConfig(max_length=8)).close()
    with pytest.raises(ConfigMismatch):
        Store.open(tmp_path / "s", "append", config=ExtractionConfig(max_length=4))
    # omitting the config adopts the stored one
    with Store.open(tmp_path / "s", "append") as s:
        assert s.config.max_length == 8


def test_single_appender_lock(tmp_path):
    with Store.open(tmp_path / "s", "append"):
        with pytest.raises(StoreLocked):
            Store.open(tmp_path / "s", "append")
        Store.open(tmp_path / "s")  # readers are not blocked
    Store.open(tmp_path / "s", "append").close()


def test_truncated_record_reports_offset(tmp_path):
    with Store.open(tmp_path / "s", "append") as s:
        s.append(rec("a"))
        s.append(rec("b"))
    path = tmp_path / "s" / "records.jsonl"
    data = path.read_bytes()
    first = data.index(b"\n") + 1
    path.write_bytes(data[:-5])
    with pytest.raises(CorruptStore) as err:
        Store.open(tmp_path / "s")
    assert err.value.offset == first


def test_garbage_record_reports_offset(tmp_path):
    (tmp_path / "s").mkdir()
    Store.open(tmp_path / "s", "append").close()
    (tmp_path / "s" / "records.jsonl").write_bytes(b"{not json}\n")
    with pytest.raises(CorruptStore) as err:
        Store.open(tmp_path / "s")
    assert err.value.offset == 0


def test_scan_filters_language(tmp_path):
    with Store.open(tmp_path / "s", "append") as s:
        s.append(rec("a", "java"))
        s.append(rec("b", "csharp"))
        s.append(rec("c", "java"))
        assert [r.program_id for r in s.scan("java")] == ["a", "c"]
        assert s.languages() == ["csharp", "java"]


def test_freq_histogram(tmp_path):
    with Store.open(tmp_path / "s", "append") as s:
        s.append(rec("a", t=1))
        s.append(rec("b", t=1, u=2))
        s.append(rec("c", t=4))
        s.append(rec("d", "csharp", t=9))
        assert sorted(s.freq_histogram("java", "t")) == [1, 1, 4]
        assert s.freq_histogram("java", "absent") == []
        # cross-check against a manual count over the scan
        manual = [r.repr.freq["t"] for r in s.scan() if r.language == "csharp" and "t" in r.repr.freq]
        assert s.freq_histogram("csharp", "t") == manual == [9]


def test_records_are_canonical_json(tmp_path):
    with Store.open(tmp_path / "s", "append") as s:
        s.append(rec("a", z=1, b=2))
    line = (tmp_path / "s" / "records.jsonl").read_text().splitlines()[0]
    assert line == dumps_canonical(json.loads(line))
    assert line.index('"b"') < line.index('"z"')


def test_checksum_tracks_content(tmp_path):
    with Store.open(tmp_path / "s", "append") as s:
        empty = s.checksum()
        s.append(rec("a"))
        one = s.checksum()
    assert empty != one
    assert Store.open(tmp_path / "s").checksum() == one
