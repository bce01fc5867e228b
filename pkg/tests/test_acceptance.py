"""Every acceptance criterion at its stated tolerance, one line per check."""

import pytest

from largespin import acceptance


@pytest.mark.parametrize(
    "number",
    [pytest.param(k, marks=pytest.mark.slow) if k in acceptance.SLOW else k for k in acceptance.CRITERIA],
    ids=lambda k: f"C{k:02d}",
)
def test_criterion(number, capsys):
    checks = acceptance.CRITERIA[number]()
    with capsys.disabled():
        print()
        for c in checks:
            print(c.line())
    failed = [c.line() for c in checks if not c.passed]
    assert not failed, "\n".join(failed)
