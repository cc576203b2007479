"""Acceptance gate: every reproduction scenario at its stated tolerance.

One test per scenario, so the verbose run shows one pass/fail line each; the
failing per-check rows are printed in the assertion message. The scenario
definitions are shared with the `biphoton paper-repro` command, which writes
the same checks to JSON.
"""

from __future__ import annotations

import pytest

from biphoton.cli import _criterion, acceptance_criteria

CRITERIA = acceptance_criteria()


@pytest.mark.parametrize(
    ("name", "budget_s", "fn"),
    [(name, budget, fn) for name, _fname, budget, fn in CRITERIA],
    ids=[name.replace(" ", "-").replace("/", "-") for name, _, _, _ in CRITERIA],
)
def test_criterion(name, budget_s, fn):
    result = _criterion(name, budget_s, fn)
    status = "PASS" if result["pass"] else "FAIL"
    print(f"{status}  {name}  ({result['runtime_s']:.2f} s)")
    for check in result["checks"]:
        mark = "ok" if check["pass"] else "FAIL"
        print(f"  [{mark}] {check}")
    bad = [c["label"] for c in result["checks"] if not c["pass"]]
    assert result["pass"], f"{name}: failing checks {bad}"
