"""One test per acceptance criterion; each prints a PASS/FAIL line with its runtime.

Run directly (``python tests/test_acceptance.py``) to get only the lines.
Criteria 1 and 2 are known to fail as stated; they are strict xfails, and the
parts that do hold are asserted separately.
"""
import subprocess
import sys
import time

import pytest

from ckit import acceptance

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # running as a script
    ACCEPTANCE_LINES = []

LIMITS = {1: 60, 2: 30, 3: 120, 4: 30, 5: 30, 6: 30, 7: 300, 8: 300, 9: None}


def record(number: int, name: str, ok: bool, seconds: float) -> str:
    limit = LIMITS[number]
    within = limit is None or seconds < limit
    status = "PASS" if ok and within else "FAIL"
    bound = f"limit {limit} s" if limit is not None else "no limit"
    line = f"{status} criterion {number} {name}: {seconds:.2f} s ({bound})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return status


def run_criterion(number: int):
    name, fn = acceptance.CRITERIA[number]
    start = time.perf_counter()
    result = fn()
    seconds = time.perf_counter() - start
    status = record(number, name, result["status"] == "PASS", seconds)
    return result, status


@pytest.fixture(scope="module")
def criterion_1():
    return run_criterion(1)


@pytest.fixture(scope="module")
def criterion_2():
    return run_criterion(2)


@pytest.mark.xfail(strict=True, reason="A lies in 1 + qZ[q] only when l >= n + m")
def test_criterion_1_q_series_identity(criterion_1):
    assert criterion_1[1] == "PASS"


def test_criterion_1_identity_holds_and_membership_fails_only_below_n_plus_m(criterion_1):
    details = criterion_1[0]["details"]
    assert details["triples"] == 729
    assert details["identity_failures"] == 0
    assert details["membership_failures_with_l_ge_n_plus_m"] == 0


@pytest.mark.xfail(strict=True, reason="the regularized sum vanishes or has a pole for n <= -2")
def test_criterion_2_regularized_operators(criterion_2):
    assert criterion_2[1] == "PASS"


def test_criterion_2_holds_for_n_at_least_minus_one(criterion_2):
    details = criterion_2[0]["details"]
    assert details["failing_n"] == [-4, -3, -2]
    assert details["checked_pairs"] == 99


@pytest.mark.parametrize("number", [3, 4, 5, 6, 7, 8])
def test_criterion(number):
    result, status = run_criterion(number)
    assert result["status"] == "PASS", result["details"]
    assert status == "PASS", "time limit exceeded"


def test_criterion_9_suite_json_is_deterministic():
    command = [sys.executable, "-m", "ckit.cli", "suite"]
    start = time.perf_counter()
    first = subprocess.run(command, capture_output=True, check=False)
    second = subprocess.run(command, capture_output=True, check=False)
    seconds = time.perf_counter() - start
    same = first.stdout == second.stdout and first.stdout.startswith(b"{")
    status = record(9, "suite determinism", same, seconds)
    assert first.returncode == second.returncode == 1  # criteria 1 and 2 fail
    assert status == "PASS"


if __name__ == "__main__":
    for k in range(1, 9):
        run_criterion(k)
