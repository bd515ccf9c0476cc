"""Acceptance suite: one test per criterion, each printing its pass/fail rows.

The rows are also collected for the table printed at the end of the session.
"""

import pytest

from harmonica import acceptance

ROWS = []


@pytest.mark.parametrize("k", sorted(acceptance.CRITERIA))
def test_criterion(k):
    rows = acceptance.CRITERIA[k](0)
    ROWS.extend(rows)
    for r in rows:
        print(r.line())
    assert rows
    failed = [r.line() for r in rows if not r.passed]
    assert not failed, "\n".join(failed)
