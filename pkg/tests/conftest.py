import os

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# criterion id -> list of (label, ok, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}


def record(criterion: int, label: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE.setdefault(criterion, []).append((label, ok, detail))


def acceptance_lines() -> list[str]:
    lines = []
    for cid in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[cid]
        ok = all(p[1] for p in parts)
        lines.append(f"criterion {cid}: {'PASS' if ok else 'FAIL'}")
        for label, sub_ok, detail in parts:
            lines.append(f"    {'ok  ' if sub_ok else 'FAIL'} {label}{': ' + detail if detail else ''}")
    return lines


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance_lines():
        terminalreporter.write_line(line)


@pytest.fixture
def gagc_env(monkeypatch):
    monkeypatch.delenv("GAGC_SEED", raising=False)
    return monkeypatch
