"""Acceptance gate: every verification criterion at its pinned tolerance.

Runs the same registry the ``majorana-pt verify`` command uses and prints
one PASS/FAIL line per criterion (run pytest with ``-s`` to see them all).
"""

import time

import pytest

from majorana_pt import verify

_RESULTS = {}


def _run(criterion_id):
    if criterion_id not in _RESULTS:
        fn = dict(verify.CRITERIA)[criterion_id]
        _RESULTS[criterion_id] = fn(verify.spectral.DEFAULT_TOLERANCES)
    return _RESULTS[criterion_id]


@pytest.mark.parametrize("criterion_id", [cid for cid, _ in verify.CRITERIA])
def test_criterion(criterion_id):
    result = _run(criterion_id)
    status = "PASS" if result.passed else "FAIL"
    print(f"{status} {result.criterion_id}: {result.detail}")
    assert result.passed, f"{result.criterion_id}: {result.detail}"


def test_full_suite_runs_quickly():
    started = time.perf_counter()
    results = verify.run_criteria()
    elapsed = time.perf_counter() - started
    assert all(r.passed for r in results)
    assert elapsed < 60.0
