"""Conjugate times, cut times and cut/first-conjugate locus membership."""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass

import numpy as np

from srlie.algebra import BasisKind
from srlie.geodesics import GeodesicParams, is_abnormal
from srlie.groups import GroupKind, So3RPoint, Su2RPoint, lifts, rotation_z
from srlie.roots import bisect

TWO_PI = 2.0 * math.pi
DEFAULT_TOL = 1e-9
_ROOT_DELTA = 1e-9


class LocusClass(enum.Enum):
    LocalBranch = "LocalBranch"
    GlobalBranch = "GlobalBranch"
    MetricLine = "MetricLine"


@dataclass(frozen=True)
class CutInfo:
    cut_time: float
    locus_class: LocusClass
    first_conjugate_time: float


class AbnormalGeodesicError(ValueError):
    """The operation is undefined on the abnormal branch alpha2 = +-1."""


class TanXRoots:
    """Ascending positive roots of tan x = x, computed lazily and memoized."""

    def __init__(self):
        self._roots: list[float] = []
        self._lock = threading.Lock()

    @staticmethod
    def _solve(m: int) -> float:
        # sin x - x cos x has the roots of tan x = x and no pole
        lo = m * math.pi + _ROOT_DELTA
        hi = m * math.pi + 0.5 * math.pi - _ROOT_DELTA
        return bisect(lambda x: math.sin(x) - x * math.cos(x), lo, hi, tol=1e-300)

    def __getitem__(self, m: int) -> float:
        """The m-th root x_m, m >= 1."""
        if m < 1:
            raise IndexError("roots are numbered from 1")
        roots = self._roots
        if m <= len(roots):
            return roots[m - 1]
        with self._lock:
            while len(self._roots) < m:
                self._roots.append(self._solve(len(self._roots) + 1))
            return self._roots[m - 1]


tan_roots = TanXRoots()


def _require_normal(params: GeodesicParams) -> None:
    if is_abnormal(params):
        raise AbnormalGeodesicError(
            "conjugate times are not defined for alpha2 = +-1 (metric line)"
        )


def conjugate_time(params: GeodesicParams, n: int = 1) -> float:
    """The n-th conjugate time, n >= 1 (same formula on both groups)."""
    _require_normal(params)
    if n < 1:
        raise ValueError("n must be a positive integer")
    m = (n + 1) // 2
    if n % 2:
        return TWO_PI * m / params.w
    return 2.0 * tan_roots[m] / params.w


def conjugate_criterion(params: GeodesicParams, t: float) -> float:
    _require_normal(params)
    h = 0.5 * params.w * t
    s = math.sin(h)
    return s * (s - h * math.cos(h))


def global_branch_equation(t: float, alpha2: float, b: float) -> float:
    """F(t) whose first positive root is the SO(3)xR global-branch cut time.

    ``b`` is |beta| for the D2 metric (|beta - alpha2| for D1).
    """
    b = abs(b)
    w = math.sqrt(1.0 - alpha2 * alpha2 + b * b)
    return (math.cos(0.5 * t * w) * math.cos(0.5 * b * t)
            + (b / w) * math.sin(0.5 * t * w) * math.sin(0.5 * b * t))


def _so3_cut(alpha2: float, b: float) -> tuple[float, LocusClass]:
    b = abs(b)
    w = math.sqrt(1.0 - alpha2 * alpha2 + b * b)
    t_local = TWO_PI / w
    if b >= math.sqrt((1.0 - alpha2 * alpha2) / 3.0):
        return t_local, LocusClass.LocalBranch
    eps = 1e-12 * t_local
    root = bisect(lambda t: global_branch_equation(t, alpha2, b), eps, t_local - eps,
                  tol=1e-300)
    return root, LocusClass.GlobalBranch


def cut_time(params: GeodesicParams) -> CutInfo:
    if is_abnormal(params):
        return CutInfo(math.inf, LocusClass.MetricLine, math.inf)
    t_conj = conjugate_time(params, 1)
    if params.group is GroupKind.SU2R:
        return CutInfo(t_conj, LocusClass.LocalBranch, t_conj)
    t, cls = _so3_cut(params.alpha2, params.effective_beta)
    return CutInfo(t, cls, t_conj)


def _angle_off_lattice(x: float, tol: float) -> bool:
    """True when x is farther than tol from every multiple of 2 pi."""
    return abs(math.remainder(x, TWO_PI)) > tol


def _su2r_conj(p: Su2RPoint, metric: BasisKind, tol: float) -> bool:
    if abs(abs(p.A) - 1.0) > tol:
        return False
    if metric is BasisKind.D2:
        return abs(p.A - 1.0) > tol
    return _angle_off_lattice(0.5 * p.v + math.atan2(p.A.imag, p.A.real), tol)


def in_first_conjugate_locus(point, group, metric, tol: float = DEFAULT_TOL) -> bool:
    group, metric = GroupKind.parse(group), BasisKind.parse(metric)
    if group is GroupKind.SU2R:
        return _su2r_conj(point, metric, tol)
    return any(_su2r_conj(lift, metric, tol) for lift in lifts(point))


def _z_rotation_angle(C: np.ndarray, tol: float):
    """The angle psi if C is a rotation about the third axis, else None."""
    off = max(abs(C[0, 2]), abs(C[1, 2]), abs(C[2, 0]), abs(C[2, 1]), abs(C[2, 2] - 1.0))
    if off > tol:
        return None
    return math.atan2(C[1, 0], C[0, 0])


def _is_half_turn(C: np.ndarray, tol: float) -> bool:
    return (np.max(np.abs(C - C.T)) <= tol
            and abs(np.trace(C) + 1.0) <= tol)


def _so3r_cut_d2(C: np.ndarray, tol: float):
    psi = _z_rotation_angle(C, tol)
    if psi is not None and _angle_off_lattice(psi, tol):
        return LocusClass.LocalBranch
    if _is_half_turn(C, tol):
        return LocusClass.GlobalBranch
    return None


def in_cut_locus(point, group, metric, tol: float = DEFAULT_TOL, winding: str = "all"):
    """Branch label if ``point`` lies in the cut locus of the identity, else None.

    ``winding`` selects how the D1 local-branch exclusion psi + v != 2 pi n
    is read on SO(3)xR: "all" (n over all integers) or "natural" (n >= 1, with
    psi taken in [0, 2 pi)).
    """
    group, metric = GroupKind.parse(group), BasisKind.parse(metric)
    if winding not in ("all", "natural"):
        raise ValueError("winding must be 'all' or 'natural'")
    if group is GroupKind.SU2R:
        return LocusClass.LocalBranch if _su2r_conj(point, metric, tol) else None
    if not isinstance(point, So3RPoint):
        point = So3RPoint(*point)
    if metric is BasisKind.D2:
        return _so3r_cut_d2(point.C, tol)
    # D1: (C*, v) is a D1 cut point iff (C* exp(v E3), v) is a D2 cut point
    psi = _z_rotation_angle(point.C, tol)
    if psi is not None:
        if winding == "all":
            if _angle_off_lattice(psi + point.v, tol):
                return LocusClass.LocalBranch
        else:
            s = (psi % TWO_PI) + point.v
            n = round(s / TWO_PI)
            if n < 1 or abs(s - n * TWO_PI) > tol:
                return LocusClass.LocalBranch
    if _is_half_turn(point.C @ rotation_z(point.v), tol):
        return LocusClass.GlobalBranch
    return None
