from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

import anglerigidity
from anglerigidity.colored_graph import ColoredGraph, parse_colored_graph

DATA = Path(anglerigidity.__file__).parent / "data"

settings.register_profile(
    "repo", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

ACCEPTANCE_LINES: dict[str, str] = {}


def load_graph(name: str) -> ColoredGraph:
    return parse_colored_graph((DATA / name).read_text())


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def acceptance():
    """Record a pass/fail line for a numbered criterion, then assert."""

    def record(number: int | str, ok: bool, detail: str) -> None:
        line = f"criterion {str(number):>3}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[str(number)] = line
        print(line)
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    def order(label: str):
        digits = "".join(ch for ch in label if ch.isdigit())
        return int(digits), label

    for n in sorted(ACCEPTANCE_LINES, key=order):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
