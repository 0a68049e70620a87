"""The acceptance suite: every shipped guarantee, one test per criterion.

Each test runs its criterion at the tolerances fixed in
modelspace.acceptance and prints one pass/fail line (shown with -s, or
in the failure report).
"""

import pytest

from modelspace import acceptance as ac


@pytest.mark.parametrize("criterion", ac.CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion):
    result = criterion(seed=0)
    status = "PASS" if result["passed"] else "FAIL"
    line = f"[{status}] {result['name']}: {result['detail']} ({result['seconds']:.1f}s)"
    print(line)
    assert result["passed"], line
