import math

import numpy as np
import pytest
from hypothesis import given

from conftest import su2r_points
from srlie.algebra import AlgebraVector, BasisKind
from srlie.groups import (
    GroupKind,
    InvalidPointError,
    So3RPoint,
    Su2RPoint,
    covering_pi,
    covering_pi_tilde,
    identity,
    lifts,
    one_param_subgroup,
)


def su2_close(g, h, tol=1e-12):
    return np.max(np.abs(np.array(g.as_tuple()) - np.array(h.as_tuple()))) <= tol


class TestSu2R:
    def test_identity_right_unit(self):
        g = Su2RPoint(complex(0.6, 0), complex(0, 0.8), -2.0)
        assert su2_close(g * Su2RPoint.identity(), g, 0.0)

    def test_worked_product(self):
        p = Su2RPoint(1j, 0, 1) * Su2RPoint(1j, 0, 2)
        assert p.A == -1 and p.B == 0 and p.v == 3

    def test_inverse_of_identity(self):
        assert su2_close(Su2RPoint.identity().inverse(), Su2RPoint.identity(), 0.0)

    @given(g=su2r_points(), h=su2r_points(), k=su2r_points())
    def test_group_laws(self, g, h, k):
        assert su2_close(g * g.inverse(), Su2RPoint.identity())
        assert su2_close(g.inverse().inverse(), g)
        assert su2_close((g * h) * k, g * (h * k))

    def test_rejects_off_sphere(self):
        with pytest.raises(InvalidPointError):
            Su2RPoint(1.0, 0.1, 0.0)
        with pytest.raises(InvalidPointError):
            Su2RPoint(1.0, 0.0, math.nan)

    def test_renormalizes_tiny_defect(self):
        g = Su2RPoint(1.0 + 1e-12, 0.0, 0.0)
        assert abs(g.A) == 1.0


class TestSo3R:
    def test_inverse_is_transpose(self):
        C = covering_pi(complex(0.6, 0.0), complex(0.0, 0.8))
        p = So3RPoint(C, 1.5).inverse()
        assert np.allclose(p.C, C.T, rtol=0, atol=1e-15) and p.v == -1.5

    def test_rejects_reflection(self):
        with pytest.raises(InvalidPointError):
            So3RPoint(np.diag([1.0, 1.0, -1.0]))

    def test_rejects_non_orthogonal(self):
        with pytest.raises(InvalidPointError):
            So3RPoint(np.eye(3) * 1.01)

    def test_identity_helper(self):
        assert isinstance(identity("so3r"), So3RPoint)
        assert isinstance(identity(GroupKind.SU2R), Su2RPoint)


class TestOneParameterSubgroup:
    def test_zero_time(self):
        for group in GroupKind:
            p = one_param_subgroup(AlgebraVector(1, 2, 3, 4), BasisKind.D1, group, 0.0)
            assert p.v == 0.0

    def test_central_direction_d2(self):
        p = one_param_subgroup(AlgebraVector.basis(2), BasisKind.D2, GroupKind.SU2R, 2.5)
        assert p.A == 1 and p.B == 0 and p.v == 2.5

    def test_e4_direction(self):
        beta, t = 0.7, 1.3
        p = one_param_subgroup(AlgebraVector.basis(4) * beta, BasisKind.D2, GroupKind.SU2R, t)
        assert abs(p.A - np.exp(0.5j * beta * t)) < 1e-15
        assert p.B == 0 and p.v == 0

    @given(g=su2r_points())
    def test_pushforward_commutes(self, g):
        x = AlgebraVector(0.3, -0.2, 1.1, 0.4)
        for basis in BasisKind:
            up = one_param_subgroup(x, basis, GroupKind.SU2R, 0.9)
            down = one_param_subgroup(x, basis, GroupKind.SO3R, 0.9)
            assert np.allclose(covering_pi_tilde(up).C, down.C, atol=1e-13)


class TestCovering:
    def test_examples(self):
        assert np.array_equal(covering_pi(1, 0), np.eye(3))
        assert np.array_equal(covering_pi(1j, 0), np.diag([-1.0, -1.0, 1.0]))
        p = covering_pi_tilde(Su2RPoint(1, 0, 5))
        assert np.array_equal(p.C, np.eye(3)) and p.v == 5

    @given(g=su2r_points(), h=su2r_points())
    def test_homomorphism_and_sign(self, g, h):
        assert np.allclose(covering_pi(g.A, g.B), covering_pi(-g.A, -g.B), atol=0)
        lhs = covering_pi_tilde(g * h).C
        rhs = covering_pi_tilde(g).C @ covering_pi_tilde(h).C
        assert np.max(np.abs(lhs - rhs)) < 1e-13

    @given(g=su2r_points())
    def test_orthogonal_image(self, g):
        C = covering_pi(g.A, g.B)
        assert np.max(np.abs(C.T @ C - np.eye(3))) < 1e-13
        assert abs(np.linalg.det(C) - 1) < 1e-13

    @given(g=su2r_points())
    def test_lifts_contain_preimage(self, g):
        first, second = lifts(covering_pi_tilde(g))
        assert first.A.real >= 0
        assert su2_close(second, Su2RPoint(-first.A, -first.B, first.v), 1e-15)
        assert min(np.max(np.abs(np.array(h.as_tuple()) - np.array(g.as_tuple())))
                   for h in (first, second)) < 1e-12

    def test_lift_examples(self):
        first, second = lifts(So3RPoint.identity())
        assert {first.A, second.A} == {1, -1}
        lifted = lifts(So3RPoint(np.diag([-1.0, -1.0, 1.0]), 0.25))
        assert sorted(h.A.imag for h in lifted) == [-1.0, 1.0]
        assert all(h.v == 0.25 and h.B == 0 for h in lifted)
