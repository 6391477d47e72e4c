"""Acceptance gate: every criterion runs at its pinned tolerance.

`pytest -s tests/test_acceptance.py` prints one line per criterion.
"""

import pytest

from cpdq_lab.acceptance import CRITERIA


@pytest.mark.parametrize("name,tags,func",
                         CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(name, tags, func):
    checks = func()
    ok = all(c.passed for c in checks)
    print(f"{'PASS' if ok else 'FAIL'}  {name}")
    for c in checks:
        flag = "ok " if c.passed else "BAD"
        print(f"    [{flag}] {c.name}: {c.value:.6g} {c.comparator} "
              f"{c.tolerance:.6g}")
    failing = [c.name for c in checks if not c.passed]
    assert not failing, f"{name} failed: {failing}"
