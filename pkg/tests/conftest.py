from __future__ import annotations

import time
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from aritylab.core import FinStructure, Signature
from aritylab.corpus import generate_corpus

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def corpus():
    return generate_corpus()


@st.composite
def structures(draw, min_size=1, max_size=4, max_rels=2, arities=(1, 2, 3)):
    """Random small structures; relation names R0, R1, ..."""
    m = draw(st.integers(min_size, max_size))
    nrels = draw(st.integers(0, max_rels))
    symbols, rels = [], []
    for i in range(nrels):
        ar = draw(st.sampled_from(arities))
        cells = st.tuples(*[st.integers(0, m - 1)] * ar)
        rels.append(frozenset(draw(st.sets(cells, max_size=m**ar))))
        symbols.append((f"R{i}", ar))
    return FinStructure(m, Signature(tuple(symbols)), tuple(rels), name=f"h{m}")


def read_table(name: str) -> list[list[str]]:
    rows = []
    for raw in (FIXTURES / name).read_text().splitlines():
        if raw.startswith("#") or not raw.strip():
            continue
        rows.append(raw.split("\t"))
    return rows


# -- acceptance reporting: one pass/fail line per criterion --

_CRITERIA: dict[int, tuple[bool, str, str]] = {}
_STARTED = [0.0]
SUITE_BUDGET = 300.0


def pytest_sessionstart(session):
    _STARTED[0] = time.perf_counter()


@pytest.fixture
def criterion():
    def record(number: int, title: str, ok: bool, detail: str) -> bool:
        _CRITERIA[number] = (ok, title, detail)
        print(f"criterion {number:2d} [{'PASS' if ok else 'FAIL'}] {title}: {detail}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_CRITERIA):
        ok, title, detail = _CRITERIA[number]
        terminalreporter.write_line(
            f"criterion {number:2d} [{'PASS' if ok else 'FAIL'}] {title}: {detail}")
    elapsed = time.perf_counter() - _STARTED[0]
    terminalreporter.write_line(
        f"criterion 11 [{'PASS' if elapsed <= SUITE_BUDGET else 'FAIL'}] suite wall-clock: "
        f"{elapsed:.0f}s (<= {SUITE_BUDGET:.0f}s)")
