"""Acceptance criteria 1-10, each run at its stated size and tolerance.

Every test prints one ``PASS``/``FAIL`` line; the lines are repeated in the
terminal summary so they show up without ``-s``.
"""
import time

import pytest

from trsbench.suites import SUITES

SEED = 0
CRITERIA = [
    (1, "simulation"),
    (2, "halting"),
    (3, "classifier"),
    (4, "pickn"),
    (5, "wcr"),
    (6, "confluence"),
    (7, "dp-chain"),
    (8, "critical-pairs"),
    (9, "minimality"),
]
RESULTS = {}
_first_runs = {}


def _report(number, name, passed, summary, seconds):
    line = f"criterion {number:>2} {name:<15} {'PASS' if passed else 'FAIL'}  {summary} ({seconds:.1f}s)"
    RESULTS[number] = line
    print(line)


def _run(name):
    start = time.perf_counter()
    report = SUITES[name](SEED)
    return report, time.perf_counter() - start


@pytest.mark.acceptance
@pytest.mark.parametrize("number,name", CRITERIA, ids=[n for _, n in CRITERIA])
def test_criterion(number, name):
    report, seconds = _run(name)
    _first_runs[name] = report.text()
    _report(number, name, report.passed, report.summary, seconds)
    assert report.passed, report.text()
    if name == "simulation":
        assert seconds < 10, f"simulation took {seconds:.1f}s"


@pytest.mark.acceptance
def test_criterion_10_determinism():
    start = time.perf_counter()
    different = []
    for _, name in CRITERIA:
        first = _first_runs.get(name) or SUITES[name](SEED).text()
        if SUITES[name](SEED).text() != first:
            different.append(name)
    ok = not different
    summary = f"{len(CRITERIA) - len(different)}/{len(CRITERIA)} suites byte-identical"
    _report(10, "determinism", ok, summary, time.perf_counter() - start)
    assert ok, f"reports differ between runs: {different}"
