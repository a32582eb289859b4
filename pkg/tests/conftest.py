from __future__ import annotations

import pytest

from qint.corpus import generate_corpus

ACCEPTANCE: dict[str, tuple[str, str]] = {}


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion."""
    label = request.node.name

    def record(criterion: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE[criterion] = ("PASS" if ok else "FAIL", detail or label)
        print(f"[{'PASS' if ok else 'FAIL'}] {criterion} {detail}")

    return record


@pytest.fixture(scope="session")
def corpus():
    return generate_corpus()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE, key=lambda c: (int(c.rstrip("ab")), c)):
        verdict, detail = ACCEPTANCE[criterion]
        terminalreporter.write_line(f"{verdict}  {criterion}  {detail}")
