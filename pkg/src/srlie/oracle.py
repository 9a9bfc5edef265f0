"""Independent numerical ground truth for the closed forms.

Two tools live here:

* ``integrate_geodesic`` integrates the normal Hamiltonian system (covector
  equation plus the left-invariant equation for the group element) with a
  4th-order Runge-Kutta scheme whose group update is an exact exponential.
* ``shooting_distance`` searches the geodesic family for the shortest arc that
  reaches a target point: a coarse product grid followed by golden-section
  coordinate descent and a least-squares polish.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from srlie import kernels
from srlie.algebra import BasisKind, structure_constants
from srlie.geodesics import GeodesicParams, point_coordinates
from srlie.groups import GroupKind, So3RPoint, Su2RPoint
from srlie.roots import BracketError, SolverError, bisect

__all__ = [
    "CovectorState",
    "Trajectory",
    "integrate_geodesic",
    "integrate_endpoints",
    "ShootingGrid",
    "ShootingReport",
    "shooting_distance",
    "bisect",
    "BracketError",
    "SolverError",
]

UNIT_TOL = 1e-10
HIT_TOL = 1e-6
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _group_code(group: GroupKind) -> int:
    return 0 if group is GroupKind.SU2R else 1


@dataclass(frozen=True)
class CovectorState:
    psi1: float
    psi2: float
    psi3: float
    psi4: float

    @classmethod
    def from_params(cls, params: GeodesicParams) -> "CovectorState":
        """Initial covector of the geodesic with these parameters."""
        return cls(params.alpha1, params.alpha2, params.alpha3, params.effective_beta)

    def as_array(self) -> np.ndarray:
        return np.array([self.psi1, self.psi2, self.psi3, self.psi4], dtype=float)

    @property
    def horizontal_norm(self) -> float:
        return math.sqrt(self.psi1 ** 2 + self.psi2 ** 2 + self.psi3 ** 2)


@dataclass(frozen=True)
class Trajectory:
    group: GroupKind
    times: np.ndarray
    coords: np.ndarray      # rows in the point_coordinates layout
    covectors: np.ndarray   # rows (psi1, psi2, psi3, psi4)

    def __len__(self) -> int:
        return len(self.times)

    def point(self, k: int):
        row = self.coords[k]
        if self.group is GroupKind.SU2R:
            return Su2RPoint(complex(row[0], row[1]), complex(row[2], row[3]), row[4])
        return So3RPoint(row[:9].reshape(3, 3), row[9])

    def points(self) -> list:
        return [self.point(k) for k in range(len(self))]

    def endpoint(self):
        return self.point(len(self) - 1)


def _check_steps(steps: int) -> int:
    if isinstance(steps, bool) or int(steps) != steps or steps < 1:
        raise ValueError(f"steps must be a positive integer, got {steps!r}")
    return int(steps)


def integrate_endpoints(metric, group, init: np.ndarray, t_end, steps: int,
                        stride: int | None = None):
    """Batched integration: ``init`` has shape (N, 4), ``t_end`` shape (N,).

    Returns (coords, covectors) with shapes (N, S, dim) and (N, S, 4), sampled
    every ``stride`` steps (default: only the start and the end).
    """
    metric, group = BasisKind.parse(metric), GroupKind.parse(group)
    steps = _check_steps(steps)
    init = np.atleast_2d(np.asarray(init, dtype=float))
    norms = np.sqrt(np.sum(init[:, :3] ** 2, axis=1))
    bad = np.abs(norms - 1.0) > UNIT_TOL
    if np.any(bad):
        raise ValueError(
            f"initial horizontal covector must have unit norm within {UNIT_TOL}; "
            f"got |u(0)| = {norms[bad][0]!r}"
        )
    t_end = np.broadcast_to(np.asarray(t_end, dtype=float), init.shape[:1]).copy()
    consts = np.ascontiguousarray(structure_constants(metric), dtype=float)
    return kernels.backend().integrate(
        _group_code(group), metric.value, consts, np.ascontiguousarray(init), t_end,
        steps, steps if stride is None else int(stride))


def integrate_geodesic(metric, group, init: CovectorState, t_end: float, steps: int,
                       stride: int = 1) -> Trajectory:
    """Integrate the geodesic equations from the identity up to ``t_end``.

    The trajectory is sampled every ``stride`` steps. For ``t_end == 0`` the
    trajectory is the single identity point.
    """
    group = GroupKind.parse(group)
    if not isinstance(init, CovectorState):
        init = CovectorState(*init)
    t_end = float(t_end)
    if not math.isfinite(t_end):
        raise ValueError("t_end must be finite")
    steps = _check_steps(steps)
    if t_end == 0.0:
        coords, cov = integrate_endpoints(metric, group, init.as_array(), [0.0], 1, 1)
        return Trajectory(group, np.zeros(1), coords[0, :1], cov[0, :1])
    coords, cov = integrate_endpoints(metric, group, init.as_array(), [t_end], steps, stride)
    marks = list(range(0, steps + 1, stride))
    if marks[-1] != steps:
        marks.append(steps)
    times = np.asarray(marks, dtype=float) * (t_end / steps)
    return Trajectory(group, times, coords[0], cov[0])


# ---------------------------------------------------------------------------
# shooting


@dataclass(frozen=True)
class ShootingGrid:
    """Product grid over (phi0, alpha2, beta, t); t runs up to the first conjugate time."""

    n_phi: int = 64
    n_alpha2: int = 33
    alpha2_max: float = 0.98
    n_beta: int = 65
    beta_max: float = 6.0
    n_t: int = 128

    def axes(self):
        phi = np.linspace(-math.pi, math.pi, self.n_phi, endpoint=False)
        a2 = np.linspace(-self.alpha2_max, self.alpha2_max, self.n_alpha2)
        beta = np.linspace(-self.beta_max, self.beta_max, self.n_beta)
        trel = np.linspace(0.0, 1.0, self.n_t + 1)[1:]
        return phi, a2, beta, trel

    def describe(self) -> str:
        return (f"phi0 x{self.n_phi} on [-pi, pi), alpha2 x{self.n_alpha2} on "
                f"[-{self.alpha2_max}, {self.alpha2_max}], beta x{self.n_beta} on "
                f"[-{self.beta_max}, {self.beta_max}], t x{self.n_t} on (0, t_conj]")


@dataclass(frozen=True)
class ShootingReport:
    best_distance: float
    best_params: GeodesicParams | None
    best_time: float
    grid_spec: str
    refinement_iterations: int
    endpoint_error: float = 0.0
    candidates: int = 0
    hits: int = 0
    extra: dict = field(default_factory=dict, compare=False)


def _is_identity(coords: np.ndarray, group: GroupKind, tol: float) -> bool:
    ident = point_coordinates(Su2RPoint.identity() if group is GroupKind.SU2R
                              else So3RPoint.identity())
    return float(np.max(np.abs(coords - ident))) <= tol


def _scan(code, metric, target, axes, workers):
    phi, a2, beta, trel = axes
    err = np.empty((len(a2), len(beta), len(trel)))
    idx = np.empty(err.shape, dtype=np.int64)
    fn = kernels.backend().scan
    if not workers or workers <= 1:
        fn(code, metric, target, phi, a2, beta, trel, err, idx, 0, len(a2))
    else:
        # rows are disjoint, so the filled arrays do not depend on scheduling
        bounds = np.linspace(0, len(a2), min(workers, len(a2)) + 1).astype(int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(fn, code, metric, target, phi, a2, beta, trel, err, idx,
                                   int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:])]
            for fut in futures:
                fut.result()
    return err, idx


def _candidates(err: np.ndarray, limit: int, radius: float):
    """Grid cells by increasing error, skipping neighbours of chosen cells."""
    order = np.argsort(err, axis=None, kind="stable")
    chosen: list[tuple[int, int, int]] = []
    for flat in order:
        if err.flat[flat] > radius or len(chosen) >= limit:
            break
        cell = np.unravel_index(flat, err.shape)
        if any(max(abs(int(a) - b) for a, b in zip(cell, c)) <= 1 for c in chosen):
            continue
        chosen.append(tuple(int(a) for a in cell))
    return chosen


class _Objective:
    def __init__(self, code, metric, target):
        self.code, self.metric, self.target = code, metric, target
        self.k = kernels.backend()
        self.weights = (np.array([math.sqrt(2.0)] * 4 + [1.0]) if code == 0
                        else np.ones(10))

    def rows(self, x):
        return self.k.endpoints(self.code, self.metric, x[0], x[1], x[2], x[3])

    def error(self, x) -> float:
        if not -1.0 < x[1] < 1.0 or x[3] < 0.0:
            return math.inf
        return float(self.k.endpoint_error(self.code, self.rows(x), self.target))

    def residual(self, x) -> np.ndarray:
        return (self.rows(x) - self.target) * self.weights


def _golden(f, lo: float, hi: float, iters: int):
    a, b = lo, hi
    c, d = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def _refine(obj: _Objective, x0: np.ndarray, steps: np.ndarray, iters: int, sweeps: int = 4):
    x = np.array(x0, dtype=float)
    fx = obj.error(x)
    width = np.array(steps, dtype=float)
    for _ in range(sweeps):
        for c in range(4):
            def along(val, c=c):
                y = x.copy()
                y[c] = val
                return obj.error(y)

            val, fv = _golden(along, x[c] - width[c], x[c] + width[c], iters)
            if fv < fx:
                x[c], fx = val, fv
        width *= 0.5
    lower = np.array([-np.inf, -1.0 + 1e-9, -np.inf, 0.0])
    upper = np.array([np.inf, 1.0 - 1e-9, np.inf, np.inf])
    try:
        sol = least_squares(obj.residual, np.clip(x, lower, upper), bounds=(lower, upper),
                            xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=200)
        fy = obj.error(sol.x)
        if fy < fx:
            x, fx = sol.x, fy
    except ValueError:
        pass
    return x, fx


def shooting_distance(target, group=None, metric=BasisKind.D2, grid: ShootingGrid | None = None,
                      refine_iters: int = 40, workers: int | None = None,
                      max_candidates: int = 32, capture_radius: float = 0.5,
                      hit_tol: float = HIT_TOL) -> ShootingReport:
    """Length of the shortest geodesic found to reach ``target`` from the identity.

    Among all refined candidates whose endpoint error is at most ``hit_tol``
    the one with the smallest time wins; ties go to the lexicographically
    smallest parameters.
    """
    if group is None:
        group = GroupKind.SU2R if isinstance(target, Su2RPoint) else GroupKind.SO3R
    group, metric = GroupKind.parse(group), BasisKind.parse(metric)
    if group is GroupKind.SU2R and not isinstance(target, Su2RPoint):
        target = Su2RPoint(*target)
    if group is GroupKind.SO3R and not isinstance(target, So3RPoint):
        target = So3RPoint(*target)
    grid = grid or ShootingGrid()
    coords = point_coordinates(target)
    if _is_identity(coords, group, hit_tol):
        return ShootingReport(0.0, None, 0.0, grid.describe(), 0, 0.0, 0, 1)
    code = _group_code(group)
    axes = grid.axes()
    phi, a2, beta, trel = axes
    err, idx = _scan(code, metric.value, coords, axes, workers)
    cells = _candidates(err, max_candidates, capture_radius)
    if not cells:
        raise SolverError(
            f"no grid point within capture radius {capture_radius} of the target "
            f"(best endpoint error {float(err.min()):.3g}); use a denser grid"
        )
    obj = _Objective(code, metric.value, coords)
    d_phi = 2.0 * math.pi / grid.n_phi
    d_a2 = a2[1] - a2[0] if len(a2) > 1 else 0.1
    d_beta = beta[1] - beta[0] if len(beta) > 1 else 0.5
    results = []
    for i, j, k in cells:
        b_eff = beta[j] - a2[i] if metric is BasisKind.D1 else beta[j]
        t_conj = 2.0 * math.pi / math.sqrt(1.0 - a2[i] ** 2 + b_eff ** 2)
        x0 = np.array([phi[idx[i, j, k]], a2[i], beta[j], trel[k] * t_conj])
        x, fx = _refine(obj, x0, np.array([d_phi, d_a2, d_beta, t_conj / grid.n_t]),
                        refine_iters)
        results.append((fx, x))
    hits = [(float(x[3]), tuple(float(c) for c in x), fx) for fx, x in results if fx <= hit_tol]
    if not hits:
        best = min(fx for fx, _ in results)
        raise SolverError(
            f"no refined candidate reached the target within {hit_tol} "
            f"(best endpoint error {best:.3g}); use a denser grid"
        )
    t, x, fx = min(hits)
    phi0 = math.remainder(x[0], 2.0 * math.pi)
    params = GeodesicParams.from_phi0(phi0, x[1], x[2], metric, group)
    return ShootingReport(
        best_distance=t, best_params=params, best_time=t, grid_spec=grid.describe(),
        refinement_iterations=refine_iters, endpoint_error=fx, candidates=len(cells),
        hits=len(hits),
    )
