import numpy as np
import pytest

from srlie.algebra import BasisKind
from srlie.groups import GroupKind, So3RPoint, Su2RPoint
from srlie.verify import (
    SUITES,
    TOLERANCES,
    SuiteResult,
    random_params,
    random_point,
    run_suites,
    unimodal_violations,
)


def test_unimodal_counter():
    assert unimodal_violations(np.array([1, 2, 3, 2, 1])) == 0
    assert unimodal_violations(np.array([1, 3, 2, 3, 1])) == 1
    assert unimodal_violations(np.array([3, 2, 1])) == 0


def test_suite_result_flags():
    assert SuiteResult("x", 0.5, 1.0, 3).passed
    assert not SuiteResult("x", 2.0, 1.0, 3).passed
    assert not SuiteResult("x", 0.0, 1.0, 3, ["oops"]).passed


def test_random_draws_are_seeded():
    a = random_params(np.random.default_rng(4), BasisKind.D1, GroupKind.SO3R, alpha2_max=0.5)
    b = random_params(np.random.default_rng(4), BasisKind.D1, GroupKind.SO3R, alpha2_max=0.5)
    assert a == b and abs(a.alpha2) <= 0.5
    assert isinstance(random_point(np.random.default_rng(0), "so3r"), So3RPoint)
    assert isinstance(random_point(np.random.default_rng(0), "su2r"), Su2RPoint)


@pytest.mark.parametrize("suite", SUITES)
def test_default_suites_pass(suite):
    (result,) = run_suites(suite, 8, 123)
    assert result.passed, result.failures
    assert result.tolerance == TOLERANCES[suite]


def test_all_excludes_shooting_unless_deep():
    names = [r.name for r in run_suites("all", 2, 0)]
    assert names == list(SUITES)


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suites("bogus", 1, 0)
