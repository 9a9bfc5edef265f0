import math

import numpy as np
import pytest

from srlie.algebra import BasisKind
from srlie.cutconj import cut_time, global_branch_equation
from srlie.distance import distance
from srlie.geodesics import GeodesicParams, covector, geodesic, point_coordinates
from srlie.groups import GroupKind, So3RPoint, Su2RPoint
from srlie.oracle import (
    BracketError,
    CovectorState,
    ShootingGrid,
    SolverError,
    bisect,
    integrate_endpoints,
    integrate_geodesic,
    shooting_distance,
)
from srlie.verify import random_params, shooting_targets

CASES = [(g, m) for g in GroupKind for m in BasisKind]


def endpoint_error(p, t, steps):
    traj = integrate_geodesic(p.metric, p.group, CovectorState.from_params(p), t, steps)
    return float(np.max(np.abs(point_coordinates(traj.endpoint())
                               - point_coordinates(geodesic(p, t)))))


class TestIntegrator:
    @pytest.mark.parametrize("group,metric", CASES)
    def test_fourth_order(self, group, metric):
        p = GeodesicParams.from_phi0(0.4, 0.35, 1.3, metric, group)
        e1, e2 = endpoint_error(p, 4.0, 50), endpoint_error(p, 4.0, 100)
        assert 3.7 <= math.log2(e1 / e2) <= 4.3

    @pytest.mark.parametrize("group,metric", CASES)
    def test_matches_closed_form(self, group, metric, rng):
        params = [random_params(rng, metric, group) for _ in range(8)]
        t_end = rng.uniform(0.0, 5.0, size=8)
        init = np.array([CovectorState.from_params(p).as_array() for p in params])
        coords, cov = integrate_endpoints(metric, group, init, t_end, 10_000)
        for p, t, row, psi in zip(params, t_end, coords[:, -1], cov[:, -1]):
            assert np.max(np.abs(row - point_coordinates(geodesic(p, t)))) <= 1e-8
            assert np.max(np.abs(psi - covector(p, t))) <= 1e-8

    @pytest.mark.parametrize("group,metric", CASES)
    def test_conserved_quantities(self, group, metric):
        p = GeodesicParams.from_phi0(-1.1, 0.6, -2.2, metric, group)
        traj = integrate_geodesic(metric, group, CovectorState.from_params(p), 6.0, 600, stride=10)
        psi = traj.covectors
        # RK4 is not symplectic: the Hamiltonian drifts at the truncation level
        assert np.max(np.abs(np.sum(psi[:, :3] ** 2, axis=1) - 1.0)) < 1e-8
        assert np.max(np.abs(psi[:, 1] - p.alpha2)) < 1e-12
        assert np.max(np.abs(psi[:, 3] - p.effective_beta)) < 1e-12
        # exponential updates keep the group element on the group; point() would raise otherwise
        assert len(traj.points()) == len(traj)

    @pytest.mark.parametrize("group,metric", CASES)
    def test_hamiltonian_at_production_step_count(self, group, metric, rng):
        params = [random_params(rng, metric, group) for _ in range(16)]
        init = np.array([CovectorState.from_params(p).as_array() for p in params])
        _, cov = integrate_endpoints(metric, group, init, rng.uniform(5.0, 10.0, 16), 10_000,
                                     stride=500)
        assert np.max(np.abs(np.sum(cov[:, :, :3] ** 2, axis=2) - 1.0)) <= 1e-9

    def test_sampling_grid(self):
        traj = integrate_geodesic(2, "su2r", (1, 0, 0, 0), 1.0, 10, stride=3)
        assert traj.times.tolist() == pytest.approx([0.0, 0.3, 0.6, 0.9, 1.0])
        assert len(traj) == 5

    def test_zero_length(self):
        traj = integrate_geodesic(1, "so3r", (0, 0, 1, 2.0), 0.0, 100)
        assert len(traj) == 1
        assert np.array_equal(traj.endpoint().C, np.eye(3))

    def test_rejects_non_unit_covector(self):
        with pytest.raises(ValueError):
            integrate_geodesic(2, "su2r", (1, 0.1, 0, 0), 1.0, 10)
        with pytest.raises(ValueError):
            integrate_geodesic(2, "su2r", (1, 0, 0, 0), 1.0, 0)

    def test_metric_line(self):
        traj = integrate_geodesic(2, "su2r", (0, 1, 0, 0.7), 3.0, 100)
        assert np.allclose(traj.endpoint().as_tuple(), (1, 0, 0, 0, 3.0), atol=1e-13)


class TestBisect:
    def test_linear(self):
        assert bisect(lambda x: x - 1.0, 0.0, 2.0) == pytest.approx(1.0, abs=1e-14)

    def test_tan_root(self):
        x = bisect(lambda x: math.sin(x) - x * math.cos(x), math.pi + 1e-9, 1.5 * math.pi - 1e-9)
        assert x == pytest.approx(4.493409457909, abs=1e-11)

    def test_cut_equation_root(self):
        t = bisect(lambda t: global_branch_equation(t, 0.0, 0.0), 1e-9, 2 * math.pi - 1e-9)
        assert t == pytest.approx(math.pi, abs=1e-12)

    @pytest.mark.parametrize("a2,b", [(0.0, 0.3), (0.5, 0.1), (-0.8, 0.2)])
    def test_agrees_with_brent(self, a2, b):
        from scipy.optimize import brentq

        hi = 2 * math.pi / math.sqrt(1 - a2 * a2 + b * b) - 1e-9
        f = lambda t: global_branch_equation(t, a2, b)  # noqa: E731
        assert bisect(f, 1e-9, hi, tol=1e-300) == pytest.approx(brentq(f, 1e-9, hi, xtol=1e-15),
                                                                abs=1e-13)

    def test_no_sign_change(self):
        with pytest.raises(BracketError) as info:
            bisect(lambda x: x * x + 1, -1.0, 1.0)
        assert info.value.flo == 2.0 and info.value.fhi == 2.0
        assert isinstance(info.value, SolverError)

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            bisect(lambda x: x, 1.0, 0.0)


class TestShooting:
    def test_identity(self):
        assert shooting_distance(Su2RPoint.identity()).best_distance == 0.0

    def test_antipodal_circle(self):
        report = shooting_distance(Su2RPoint(0, 1, 0), GroupKind.SU2R, BasisKind.D2)
        assert report.best_distance == pytest.approx(math.pi, abs=1e-4)
        assert report.endpoint_error <= 1e-6 and report.hits >= 1

    @pytest.mark.parametrize("group,metric", CASES)
    def test_rediscovers_geodesic_length(self, group, metric):
        rng = np.random.default_rng(11)
        for p, T, target in shooting_targets(rng, metric, group, 2):
            report = shooting_distance(target, group, metric)
            assert report.best_distance == pytest.approx(T, abs=1e-4)
            assert report.best_distance == pytest.approx(distance(target, metric).value, abs=1e-4)

    def test_so3_target_accepts_tuple(self):
        p = GeodesicParams.from_phi0(0.2, 0.1, 0.5, BasisKind.D2, GroupKind.SO3R)
        T = 0.5 * cut_time(p).cut_time
        q = geodesic(p, T)
        report = shooting_distance((q.C, q.v), GroupKind.SO3R, BasisKind.D2)
        assert report.best_distance == pytest.approx(T, abs=1e-4)

    def test_too_coarse_grid_reports(self):
        grid = ShootingGrid(n_phi=2, n_alpha2=2, n_beta=2, n_t=2)
        with pytest.raises(SolverError, match="denser grid"):
            shooting_distance(Su2RPoint(0.6, 0.8j, 4.0), GroupKind.SU2R, BasisKind.D2,
                              grid=grid, capture_radius=1e-3)

    def test_grid_description(self):
        assert "phi0 x64" in ShootingGrid().describe()
