"""End-to-end acceptance checks, one test per numbered criterion.

Each test prints one PASS/FAIL line per inner check (run pytest with -s
or read the captured output).  Criteria 6-9 simulate large path batches
and carry the `slow` marker; the remainder finish in seconds to minutes.
"""

import pytest

from evtsup import acceptance


def _assert_all(results):
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    assert not failed, "; ".join(r.line() for r in failed)


def test_criterion_01_exact_brownian_tail():
    _assert_all(acceptance.check_exact_brownian_tail())


def test_criterion_02_constants_identity():
    _assert_all(acceptance.check_constants_identity())


def test_criterion_03_iid_order_statistics():
    _assert_all(acceptance.check_iid_order_statistics())


def test_criterion_04_iid_moment_convergence():
    _assert_all(acceptance.check_iid_moment_convergence())


def test_criterion_05_limit_law_self_consistency():
    _assert_all(acceptance.check_limit_laws())


@pytest.mark.slow
def test_criterion_06_pickands_estimates():
    _assert_all(acceptance.check_pickands())


@pytest.mark.slow
def test_criterion_07_scenario_normal_limit():
    _assert_all(acceptance.check_scenario_normal_limit())


@pytest.mark.slow
def test_criterion_08_scenario_erlanglog_limit():
    _assert_all(acceptance.check_scenario_erlanglog_limit())


@pytest.mark.slow
def test_criterion_09_scenario_mixture_limit():
    _assert_all(acceptance.check_scenario_mixture_limit())


def test_criterion_10_reproducibility():
    _assert_all(acceptance.check_reproducibility())


@pytest.mark.slow
def test_brownian_supremum_grid_oracle():
    # supporting oracle behind criteria 3-4 and the oracle-bm check suite:
    # sup of drifted Brownian motion is exactly Exp(2c)
    _assert_all(acceptance.run_suite("oracle-bm"))
