"""Acceptance suite: one test per headline criterion.

Each test prints a single PASS/FAIL line with the measured detail and
asserts the criterion outcome.  Criterion 9 integrates the Hamiltonian
system from s = 1e4 and dominates the runtime.
"""

import pytest

from hepearcey.acceptance import criterion_ids, run_criterion


@pytest.mark.parametrize("cid", criterion_ids())
def test_criterion(cid, capsys):
    result = run_criterion(cid)
    status = "PASS" if result.passed else "FAIL"
    with capsys.disabled():
        print(
            f"\n{status} criterion {result.cid:>2} ({result.title}): "
            f"{result.detail} [{result.seconds:.1f}s]"
        )
    assert result.passed, f"criterion {cid} ({result.title}): {result.detail}"
