"""Acceptance criteria 1-8, each at its stated (exact) tolerance."""

import pytest

from caminalab import acceptance, cli

RESULTS = []


@pytest.mark.parametrize("k", sorted(acceptance.CRITERIA))
def test_criterion(k):
    res = acceptance.run_criterion(k)
    RESULTS.append(res)
    print(res.line())
    assert res.passed, res.detail


def test_selftest_full_exit_code(capsys):
    code = cli.main(["selftest", "--level", "full"])
    out = capsys.readouterr().out
    assert code == 0, out
    assert sum(line.startswith("PASS criterion") for line in out.splitlines()) == 8
