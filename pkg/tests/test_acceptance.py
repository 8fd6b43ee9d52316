"""The nine acceptance criteria, one test each; every run prints a status line."""
import pytest

from pmapgraph.selftest import CRITERIA, _timed

LIMITS = {1: 1.0, 3: 60.0}  # seconds


@pytest.mark.parametrize("number,name,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, name, fn, capsys):
    result = _timed(number, name, fn)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.ok, result.detail
    if number in LIMITS:
        assert result.seconds < LIMITS[number]
