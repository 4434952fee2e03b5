"""One test per acceptance criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the matrix.
"""
import subprocess
import sys
from fractions import Fraction

import pytest

from modcount.fatgraph import enumerate_fatgraphs, incidence_matrix
from modcount.polytope import ConstraintSystem, RankDeficientError, lattice_index
from modcount.verify import CHECKS, FRONTIER, VerifyConfig, run_check

# Criterion 10 asks for index 2 on every enumerated incidence matrix.  Cells
# below top dimension include rank-deficient matrices, which have no index.
LITERAL_INDEX_CLAUSE = (
    "lower-dimensional cells give rank-deficient incidence matrices, "
    "so the literal 'index 2 for every matrix' clause cannot hold"
)

TOTAL_BUDGET = 30 * 60
_elapsed = {}


def _report(result):
    _elapsed[result.criterion] = result.seconds
    print("\n" + result.line())


@pytest.mark.parametrize(
    "criterion",
    [
        pytest.param(c, marks=pytest.mark.xfail(strict=True, reason=LITERAL_INDEX_CLAUSE)) if c == 10 else c
        for c in sorted(CHECKS)
    ],
)
def test_criterion(criterion, tmp_path):
    result = run_check(criterion, VerifyConfig(artifact_dir=str(tmp_path)))
    _report(result)
    assert result.passed, result.detail


def test_criterion_1_cold_runtime():
    # fresh interpreter, so no memoized values help; the check enforces 5 minutes
    proc = subprocess.run(
        [sys.executable, "-m", "modcount.cli", "verify", "--criteria", "1"],
        capture_output=True,
        text=True,
        timeout=600,
    )
    print("\n" + proc.stdout.strip())
    assert proc.returncode == 0


def test_criterion_9_writes_diff_artifact(tmp_path):
    run_check(9, VerifyConfig(artifact_dir=str(tmp_path)))
    assert (tmp_path / "omega04_diff.json").read_text().count('"first_mismatch"') >= 2


def test_criterion_10_attainable_parts():
    """Everything in criterion 10 except the literal all-matrices clause."""
    full_rank, deficient, trivalent = {}, 0, {}
    for g, n in FRONTIER:
        for fg, _ in enumerate_fatgraphs(g, n):
            sys_ = ConstraintSystem.from_rows(incidence_matrix(fg))
            try:
                idx = lattice_index(sys_)
            except RankDeficientError:
                deficient += 1
                assert fg.num_edges < 6 * g - 6 + 3 * n
                continue
            full_rank[idx] = full_rank.get(idx, 0) + 1
            if fg.num_edges == 6 * g - 6 + 3 * n:
                trivalent[idx] = trivalent.get(idx, 0) + 1
    print(f"\nfull-rank indices {full_rank}, trivalent {trivalent}, rank-deficient {deficient}")
    assert set(full_rank) == {2}
    assert set(trivalent) == {2}
    assert deficient > 0
    detail = run_check(10).detail
    assert "odd classes zero True" in detail
    assert "top parts = 2V True" in detail
    assert "1/24 and <tau_0^3> = 1 True" in detail


def test_total_verify_budget():
    # runs last in this module; the full suite must fit in 30 minutes
    assert sum(_elapsed.values()) < TOTAL_BUDGET
    print(f"\nverify total {sum(_elapsed.values()):.1f}s of {TOTAL_BUDGET}s")


def test_pinned_euler_values():
    from modcount.moduli import euler_characteristic

    assert euler_characteristic(0, 4) == -1
    assert euler_characteristic(1, 1) == Fraction(-1, 12)
    assert euler_characteristic(2, 1) == Fraction(1, 120)
