from __future__ import annotations

import os
import sys
from typing import Dict, List, Tuple

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from gbt.classifier import TABLE_LABELS, group_by_label  # noqa: E402
from gbt.crystal import build_gamma  # noqa: E402
from gbt.fpinvariants import distinguish  # noqa: E402

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: Dict[int, Tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def table_gammas():
    return {l: build_gamma(group_by_label(l)) for l in TABLE_LABELS}


@pytest.fixture(scope="session")
def distinction(table_gammas):
    return distinguish(table_gammas, max_index=6, escalate=True)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance")
    lines: List[str] = []
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        lines.append(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    for line in lines:
        terminalreporter.write_line(line)
