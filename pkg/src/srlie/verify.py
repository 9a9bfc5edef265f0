"""Seeded property sweeps shared by the ``verify`` command and the test suite.

Each suite draws ``count`` random samples from ``numpy.random.default_rng(seed)``
and reports the largest residual it saw against a fixed tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from srlie.algebra import BasisKind
from srlie.cutconj import cut_time, global_branch_equation
from srlie.distance import distance, splitting_check
from srlie.geodesics import GeodesicParams, geodesic, point_coordinates
from srlie.groups import GroupKind, Su2RPoint, covering_pi_tilde, lifts
from srlie.oracle import CovectorState, integrate_endpoints, shooting_distance
from srlie.roots import SolverError

GROUPS = (GroupKind.SU2R, GroupKind.SO3R)
METRICS = (BasisKind.D1, BasisKind.D2)

TOLERANCES = {
    "ode": 1e-8,
    "roundtrip": 1e-6,
    "covering": 1e-8,
    "splitting": 1e-9,
    "monotonicity": 1e-12,
    "shooting": 1e-4,
}

SUITES = ("ode", "roundtrip", "covering", "splitting", "monotonicity")
DEEP_SUITES = SUITES + ("shooting",)


@dataclass
class SuiteResult:
    name: str
    max_residual: float
    tolerance: float
    samples: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.max_residual <= self.tolerance


def random_params(rng: np.random.Generator, metric, group, beta_max: float = 4.0,
                  alpha2_max: float | None = None) -> GeodesicParams:
    """Uniform direction on the unit sphere, beta uniform in [-beta_max, beta_max]."""
    while True:
        a = rng.normal(size=3)
        norm = float(np.linalg.norm(a))
        if norm < 1e-6:
            continue
        a /= norm
        if alpha2_max is not None and abs(a[1]) > alpha2_max:
            continue
        beta = rng.uniform(-beta_max, beta_max)
        return GeodesicParams(a[0], a[1], a[2], beta, metric, group)


def random_su2r_point(rng: np.random.Generator, v_max: float = 3.0) -> Su2RPoint:
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    return Su2RPoint(complex(q[0], q[1]), complex(q[2], q[3]), rng.uniform(-v_max, v_max))


def random_point(rng: np.random.Generator, group, v_max: float = 3.0):
    p = random_su2r_point(rng, v_max)
    return p if GroupKind.parse(group) is GroupKind.SU2R else covering_pi_tilde(p)


def suite_ode(count: int, seed: int, steps: int = 10_000) -> SuiteResult:
    """Closed-form endpoints against the integrator, random (params, metric, group)."""
    rng = np.random.default_rng(seed)
    worst, failures = 0.0, []
    draws = []
    for _ in range(count):
        metric = METRICS[rng.integers(2)]
        group = GROUPS[rng.integers(2)]
        draws.append((random_params(rng, metric, group), rng.uniform(0.0, 5.0)))
    # batch by (metric, group) so each kernel call integrates many trajectories
    for metric in METRICS:
        for group in GROUPS:
            batch = [(p, t) for p, t in draws if p.metric is metric and p.group is group]
            if not batch:
                continue
            init = np.array([CovectorState.from_params(p).as_array() for p, _ in batch])
            coords, _ = integrate_endpoints(metric, group, init, [t for _, t in batch], steps)
            for (p, t), row in zip(batch, coords[:, -1]):
                err = float(np.max(np.abs(row - point_coordinates(geodesic(p, t)))))
                worst = max(worst, err)
    return SuiteResult("ode", worst, TOLERANCES["ode"], count, failures)


def suite_roundtrip(count: int, seed: int) -> SuiteResult:
    """dist(geodesic(params, T)) = T for T uniform in (0, cut_time), per group and metric."""
    rng = np.random.default_rng(seed)
    worst, failures = 0.0, []
    for group in GROUPS:
        for metric in METRICS:
            for _ in range(count):
                p = random_params(rng, metric, group)
                T = cut_time(p).cut_time * rng.uniform(0.0, 1.0)
                try:
                    worst = max(worst, abs(distance(geodesic(p, T), metric).value - T))
                except SolverError as exc:
                    failures.append(f"{group.value}/{metric.name} T={T!r}: {exc}")
    return SuiteResult("roundtrip", worst, TOLERANCES["roundtrip"], 4 * count, failures)


def covering_residual(g: Su2RPoint, metric) -> float:
    """|dist_so3r(Pi(g)) - min over lifts of dist_su2r| for one metric."""
    down = distance(covering_pi_tilde(g), metric).value
    up = min(distance(h, metric).value for h in (g, Su2RPoint(-g.A, -g.B, g.v)))
    return abs(down - up)


def suite_covering(count: int, seed: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst, failures = 0.0, []
    for _ in range(count):
        g = random_su2r_point(rng)
        # lifts of the image contain g itself
        back = min(float(np.max(np.abs(np.array(h.as_tuple()) - np.array(g.as_tuple()))))
                   for h in lifts(covering_pi_tilde(g)))
        worst = max(worst, back)
        for metric in METRICS:
            try:
                worst = max(worst, covering_residual(g, metric))
            except SolverError as exc:
                failures.append(f"{metric.name} {g}: {exc}")
    return SuiteResult("covering", worst, TOLERANCES["covering"], count, failures)


def suite_splitting(count: int, seed: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst, failures = 0.0, []
    for group in GROUPS:
        for _ in range(count):
            p = random_point(rng, group)
            try:
                worst = max(worst, splitting_check(p))
            except SolverError as exc:
                failures.append(f"{group.value} {p}: {exc}")
    return SuiteResult("splitting", worst, TOLERANCES["splitting"], 2 * count, failures)


def cut_time_profile(alpha2: float, n: int = 50, beta_max: float = 3.0):
    """SO(3)xR / D2 cut time on an |beta| grid at fixed alpha2."""
    betas = np.linspace(0.0, beta_max, n)
    times = []
    for b in betas:
        rad = math.sqrt(1.0 - alpha2 * alpha2)
        p = GeodesicParams(rad, alpha2, 0.0, b, BasisKind.D2, GroupKind.SO3R)
        times.append(cut_time(p).cut_time)
    return betas, np.array(times)


def unimodal_violations(values: np.ndarray) -> int:
    """Number of sign changes beyond the single rise-then-fall pattern."""
    k = int(np.argmax(values))
    d_up, d_down = np.diff(values[: k + 1]), np.diff(values[k:])
    return int(np.sum(d_up < 0) + np.sum(d_down > 0))


def suite_monotonicity(count: int, seed: int) -> SuiteResult:
    """Shape of the SO(3)xR / D2 cut time: rise then fall in |beta|; root residuals."""
    rng = np.random.default_rng(seed)
    alphas = [0.0, 0.5] + [float(a) for a in rng.uniform(-0.95, 0.95, size=max(count - 2, 0))]
    worst, failures = 0.0, []
    for a2 in alphas:
        betas, times = cut_time_profile(a2)
        bad = unimodal_violations(times)
        if bad:
            failures.append(f"alpha2={a2!r}: {bad} monotonicity violations")
        worst = max(worst, abs(times[0] - math.pi / math.sqrt(1.0 - a2 * a2)))
        threshold = math.sqrt((1.0 - a2 * a2) / 3.0)
        for b, t in zip(betas, times):
            if b < threshold:
                worst = max(worst, abs(global_branch_equation(t, a2, b)))
    return SuiteResult("monotonicity", worst, TOLERANCES["monotonicity"], len(alphas), failures)


def shooting_targets(rng: np.random.Generator, metric, group, count: int,
                     alpha2_max: float = 0.8, beta_max: float = 4.0):
    """Targets geodesic(params, T) with T in [0.05, 0.95] of the cut time."""
    out = []
    for _ in range(count):
        phi0 = rng.uniform(-math.pi, math.pi)
        a2 = rng.uniform(-alpha2_max, alpha2_max)
        beta = rng.uniform(-beta_max, beta_max)
        p = GeodesicParams.from_phi0(phi0, a2, beta, metric, group)
        T = cut_time(p).cut_time * rng.uniform(0.05, 0.95)
        out.append((p, T, geodesic(p, T)))
    return out


def suite_shooting(count: int, seed: int) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst, failures = 0.0, []
    for group in GROUPS:
        for metric in METRICS:
            for p, T, target in shooting_targets(rng, metric, group, count):
                try:
                    closed = distance(target, metric).value
                    shot = shooting_distance(target, group, metric).best_distance
                    worst = max(worst, abs(closed - shot))
                except SolverError as exc:
                    failures.append(f"{group.value}/{metric.name}: {exc}")
    return SuiteResult("shooting", worst, TOLERANCES["shooting"], 4 * count, failures)


_RUNNERS = {
    "ode": suite_ode,
    "roundtrip": suite_roundtrip,
    "covering": suite_covering,
    "splitting": suite_splitting,
    "monotonicity": suite_monotonicity,
    "shooting": suite_shooting,
}


def run_suites(suite: str, count: int, seed: int, deep: bool = False) -> list[SuiteResult]:
    """Run one suite or, for "all", every suite (the shooting suite only when ``deep``)."""
    if suite == "all":
        names = DEEP_SUITES if deep else SUITES
    elif suite in _RUNNERS:
        names = (suite,)
    else:
        raise ValueError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)}, all")
    return [_RUNNERS[name](count, seed) for name in names]


__all__ = [
    "SuiteResult",
    "SUITES",
    "TOLERANCES",
    "run_suites",
    "random_params",
    "random_point",
    "random_su2r_point",
    "shooting_targets",
    "covering_residual",
    "cut_time_profile",
    "unimodal_violations",
]
