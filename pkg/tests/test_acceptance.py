"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Criteria 8 and 10 are evaluated exactly as stated and are expected to report
FAIL; their detail lines carry the corrected forms that do hold (the README
explains both)."""

import pytest

from orbitoda.acceptance import CRITERIA

RESULTS: dict = {}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    result = CRITERIA[number]()
    RESULTS[number] = result
    print(result.line())
    assert result.passed, result.line()
