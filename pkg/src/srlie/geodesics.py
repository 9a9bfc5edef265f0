"""Arclength-parametrized geodesics through the identity, in closed form.

Every geodesic is exp(t(a1 e1 + a2 e2 + a3 e3 + beta e4)) exp(-t beta e4)
with a1^2 + a2^2 + a3^2 = 1. The formulas below are the multiplied-out
matrix products in each realization.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from srlie.algebra import BasisKind, sinc, versine_ratio
from srlie.groups import GroupKind, So3RPoint, Su2RPoint, rotation_z

NORM_TOL = 1e-12
ABNORMAL_TOL = 1e-12


@dataclass(frozen=True)
class GeodesicParams:
    alpha1: float
    alpha2: float
    alpha3: float
    beta: float
    metric: BasisKind = BasisKind.D2
    group: GroupKind = GroupKind.SU2R

    def __post_init__(self):
        a1, a2, a3, b = (float(x) for x in (self.alpha1, self.alpha2, self.alpha3, self.beta))
        if not all(math.isfinite(x) for x in (a1, a2, a3, b)):
            raise ValueError("geodesic parameters must be finite")
        norm2 = a1 * a1 + a2 * a2 + a3 * a3
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(
                f"alpha1^2 + alpha2^2 + alpha3^2 = {norm2!r} is not 1 within {NORM_TOL}"
            )
        if abs(a2) >= 1.0 - ABNORMAL_TOL:
            a1, a2, a3 = 0.0, math.copysign(1.0, a2), 0.0
        object.__setattr__(self, "alpha1", a1)
        object.__setattr__(self, "alpha2", a2)
        object.__setattr__(self, "alpha3", a3)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "metric", BasisKind.parse(self.metric))
        object.__setattr__(self, "group", GroupKind.parse(self.group))

    @classmethod
    def normalized(cls, alpha1, alpha2, alpha3, beta, metric=BasisKind.D2,
                   group=GroupKind.SU2R, tol: float = 1e-6) -> "GeodesicParams":
        """Rescale (alpha1, alpha2, alpha3) onto the unit sphere if within ``tol``."""
        norm = math.sqrt(alpha1 ** 2 + alpha2 ** 2 + alpha3 ** 2)
        if abs(norm - 1.0) > tol:
            raise ValueError(f"|alpha| = {norm!r} is not within {tol} of 1")
        return cls(alpha1 / norm, alpha2 / norm, alpha3 / norm, beta, metric, group)

    @classmethod
    def from_phi0(cls, phi0, alpha2, beta, metric=BasisKind.D2,
                  group=GroupKind.SU2R) -> "GeodesicParams":
        r = math.sqrt(max(1.0 - alpha2 * alpha2, 0.0))
        a1, a3 = r * math.cos(phi0), r * math.sin(phi0)
        # absorb rounding so the norm check is exact to the last bit
        norm = math.sqrt(a1 * a1 + alpha2 * alpha2 + a3 * a3)
        return cls(a1 / norm, alpha2 / norm, a3 / norm, beta, metric, group)

    @property
    def phi0(self) -> float:
        """Angle with cos = a1/sqrt(1-a2^2), sin = a3/sqrt(1-a2^2), in (-pi, pi]."""
        return math.atan2(self.alpha3, self.alpha1)

    @property
    def effective_beta(self) -> float:
        """The e4-rate inside the first exponential factor for the D2 form."""
        if self.metric is BasisKind.D1:
            return self.beta - self.alpha2
        return self.beta

    @property
    def w(self) -> float:
        b = self.effective_beta
        return math.sqrt(max(1.0 - self.alpha2 ** 2, 0.0) + b * b)

    def with_group(self, group) -> "GeodesicParams":
        return replace(self, group=GroupKind.parse(group))

    def with_metric(self, metric) -> "GeodesicParams":
        return replace(self, metric=BasisKind.parse(metric))


@dataclass(frozen=True)
class GeodesicFrame:
    w: float
    n: float
    m: float


def is_abnormal(params: GeodesicParams) -> bool:
    return abs(params.alpha2) >= 1.0 - ABNORMAL_TOL


def frame(params: GeodesicParams, t: float) -> GeodesicFrame:
    w = params.w
    half = 0.5 * w * t
    return GeodesicFrame(w=w, n=math.cos(half), m=0.5 * t * sinc(half))


def covector(params: GeodesicParams, t: float) -> np.ndarray:
    """(psi1, psi2, psi3, psi4) along the geodesic."""
    c, s = math.cos(params.beta * t), math.sin(params.beta * t)
    a1, a3 = params.alpha1, params.alpha3
    return np.array(
        [a1 * c - a3 * s, params.alpha2, a1 * s + a3 * c, params.effective_beta]
    )


def geodesic_su2r(params: GeodesicParams, t: float) -> Su2RPoint:
    a2 = params.alpha2
    v = a2 * t
    if is_abnormal(params):
        if params.metric is BasisKind.D2:
            return Su2RPoint(1.0, 0.0, v)
        return Su2RPoint(cmath.exp(-0.5j * a2 * t), 0.0, v)
    fr = frame(params, t)
    b = params.effective_beta
    phase = cmath.exp(-0.5j * params.beta * t)
    A = complex(fr.n, b * fr.m) * phase
    B = fr.m * complex(params.alpha1, params.alpha3) / phase
    return Su2RPoint(A, B, v)


def _so3_first_factor(a1: float, a3: float, b: float, w: float, t: float) -> np.ndarray:
    # exp(t(a1 E1 + a3 E2 + b E3)) by the Rodrigues form, axis (a1, a3, b)
    wt = w * t
    mu = t * sinc(wt)
    nu = t * t * versine_ratio(wt)
    return np.array(
        [
            [1.0 - nu * (a3 * a3 + b * b), a1 * a3 * nu - b * mu, a1 * b * nu + a3 * mu],
            [a1 * a3 * nu + b * mu, 1.0 - nu * (a1 * a1 + b * b), a3 * b * nu - a1 * mu],
            [a1 * b * nu - a3 * mu, a3 * b * nu + a1 * mu, 1.0 - nu * (a1 * a1 + a3 * a3)],
        ]
    )


def geodesic_so3r(params: GeodesicParams, t: float) -> So3RPoint:
    a2 = params.alpha2
    v = a2 * t
    if is_abnormal(params):
        if params.metric is BasisKind.D2:
            return So3RPoint(np.eye(3), v)
        return So3RPoint(rotation_z(-a2 * t), v)
    M = _so3_first_factor(params.alpha1, params.alpha3, params.effective_beta, params.w, t)
    return So3RPoint(M @ rotation_z(-params.beta * t), v)


def geodesic(params: GeodesicParams, t: float):
    if params.group is GroupKind.SU2R:
        return geodesic_su2r(params, t)
    return geodesic_so3r(params, t)


def reparam_d1_to_d2(params: GeodesicParams) -> GeodesicParams:
    if params.metric is not BasisKind.D1:
        raise ValueError("reparam_d1_to_d2 expects metric D1 parameters")
    return replace(params, beta=params.beta - params.alpha2, metric=BasisKind.D2)


def leftshift_params(params: GeodesicParams, t0: float) -> GeodesicParams:
    """Parameters of s -> gamma(t0)^{-1} gamma(t0 + s)."""
    if is_abnormal(params):
        return params
    c, s = math.cos(params.beta * t0), math.sin(params.beta * t0)
    a1 = params.alpha1 * c - params.alpha3 * s
    a3 = params.alpha1 * s + params.alpha3 * c
    norm = math.sqrt(a1 * a1 + params.alpha2 ** 2 + a3 * a3)
    return replace(params, alpha1=a1 / norm, alpha2=params.alpha2 / norm, alpha3=a3 / norm)


def point_coordinates(point) -> np.ndarray:
    """Flat real coordinates of a group point: 5 for SU2R, 10 for SO3R."""
    if isinstance(point, Su2RPoint):
        return np.array(point.as_tuple())
    return np.append(point.C.ravel(), point.v)


def endpoint_map(phi0: float, alpha2: float, beta: float, t: float,
                 metric: BasisKind, group: GroupKind) -> np.ndarray:
    """Coordinates of the geodesic endpoint as a function of (phi0, alpha2, beta, t)."""
    params = GeodesicParams.from_phi0(phi0, alpha2, beta, metric, group)
    return point_coordinates(geodesic(params, t))
