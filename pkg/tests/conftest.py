from __future__ import annotations

from pathlib import Path

import pytest

from rpt.evaluation.harness import build_smoke_store, smoke_dir
from rpt.pbi import build
from rpt.pipeline import Frontend

# criterion number -> (passed, description); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {text}")


@pytest.fixture(scope="session")
def frontend() -> Frontend:
    return Frontend()


@pytest.fixture(scope="session")
def smoke_root() -> Path:
    return smoke_dir()


@pytest.fixture(scope="session")
def smoke(tmp_path_factory):
    """Read-only smoke store, its index and the parallel pairs."""
    store, pairs = build_smoke_store(tmp_path_factory.mktemp("smoke") / "store")
    return store, build(store, 16), pairs
