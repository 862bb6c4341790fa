"""Runs the nine acceptance criteria; each prints one PASS/FAIL line."""
import pytest

from modalbhk.acceptance import CRITERIA

from conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    result = CRITERIA[number]()
    print(result.line())
    ACCEPTANCE_LINES.append(result.line())
    assert result.passed, result.detail
