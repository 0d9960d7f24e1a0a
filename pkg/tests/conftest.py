import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def criterion(request):
    """Record a one-line PASS/FAIL verdict for an acceptance criterion."""
    lines = {}

    def record(label, ok, detail=""):
        lines["label"], lines["ok"], lines["detail"] = label, bool(ok), detail
        return ok

    yield record
    if lines:
        _ACCEPTANCE.append(lines)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for row in sorted(_ACCEPTANCE, key=lambda r: r["label"]):
        verdict = "PASS" if row["ok"] else "FAIL"
        terminalreporter.write_line(f"{verdict}  {row['label']}  {row['detail']}")
