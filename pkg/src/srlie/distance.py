"""Exact sub-Riemannian distances from the identity.

Metric D2 on both groups is evaluated by a five-way case split. Cases 4 and 5
need an auxiliary root xi of a pair of trigonometric equations; both
equations describe the same angle, so they are solved as one phase-matching
equation by bisection. Internally the unknown is an angle tau with
xi/sqrt(1 + xi^2) = |A| sin(tau), which maps the admissible xi-range onto
the compact interval [-pi/2, pi/2].

Metric D1 is reduced to D2 by a phase twist (SU(2)xR) or a rotation of the
first two columns (SO(3)xR).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from srlie.algebra import BasisKind
from srlie.groups import GroupKind, So3RPoint, Su2RPoint, rotation_z
from srlie.roots import BracketError, SolverError, bisect

CASE_TOL = 1e-12
RESIDUAL_TOL = 1e-10
SIGN_TIE_TOL = 1e-9

XI_READING = "xi"
LITERAL_READING = "beta_literal"


@dataclass(frozen=True)
class DistanceResult:
    value: float
    case_label: int
    xi: Optional[float] = None
    residual: float = 0.0


def _principal_arg(z: complex) -> float:
    a = math.atan2(z.imag, z.real)
    return math.pi if a == -math.pi else a


def _sqrt_clip(x: float) -> float:
    return math.sqrt(x) if x > 0.0 else 0.0


def _asin_clip(x: float) -> float:
    return math.asin(max(-1.0, min(1.0, x)))


class _Phase:
    """The angle functions of cases 4 and 5 for given |A| = r, sqrt(1-|A|^2) = c.

    The unknown is the tilt angle tau in [-pi/2, pi/2], with s = r sin(tau).
    Solving in tau rather than s resolves roots that crowd against s = +-r,
    where the phase is steep in s.
    """

    def __init__(self, r: float, c: float):
        self.r, self.c = r, c
        # 1 - |A| from |B|; stays nonzero when |A| itself rounds to 1
        self.one_minus_r = c * c / (1.0 + r)

    def s(self, tau: float) -> float:
        return self.r * math.sin(tau)

    def root(self, tau: float) -> float:
        # sqrt(1 - s^2) = sqrt(c^2 + r^2 cos^2 tau), never below c
        return math.hypot(self.c, self.r * math.cos(tau))

    def arc(self, tau: float) -> float:
        # asin(sqrt((1-|A|^2)(1+xi^2)))
        return math.atan2(self.c, self.r * math.cos(tau))

    def tilt(self, tau: float, xi_like: Optional[float] = None) -> float:
        # asin(xi sqrt(1-|A|^2)/|A|); xi_like overrides xi (literal reading)
        if xi_like is None:
            return math.atan2(self.c * math.sin(tau), math.cos(tau))
        return _asin_clip(xi_like * self.c / self.r)

    def xi(self, tau: float) -> float:
        return self.s(tau) / self.root(tau)

    def case4(self, tau: float) -> float:
        a = self.s(tau)
        den = self.r * math.cos(tau)
        if den <= 2.0 * self.c:
            sin_t, arc = math.sin(tau), self.arc(tau)
            return (self.tilt(tau) - sin_t * arc) + self.one_minus_r * sin_t * arc
        # atan(a q) - a atan(q) with q = tan(arc) <= 1/2: the two terms agree to
        # O(q^3), so sum the difference series instead of subtracting
        q = self.c / den
        q2, a2 = q * q, a * a
        one_minus = self.root(tau) ** 2  # 1 - a^2, without cancellation
        geo, power, total = 1.0, q * q2, 0.0
        for k in range(1, 200):
            term = a * one_minus * geo * power / (2 * k + 1)
            total += term if k % 2 else -term
            if abs(term) <= 1e-17 * abs(total):
                break
            geo = 1.0 + a2 * geo
            power *= q2
        return total

    def case5(self, tau: float) -> float:
        return self.s(tau) * math.pi + self.case4(tau)


def _phase_root(func, target: float, lo: float, hi: float, name: str = "s") -> float:
    try:
        return bisect(lambda x: func(x) - target, lo, hi, tol=1e-300)
    except BracketError as exc:
        raise SolverError(
            f"xi bracketing failed: phase - target has no sign change on the scanned "
            f"interval {name} in [{lo!r}, {hi!r}] (values {exc.flo!r}, {exc.fhi!r})"
        ) from exc


def _xi_of(s: float) -> float:
    if s * s >= 1.0:
        return math.copysign(math.inf, s)
    return s / math.sqrt(1.0 - s * s)


def _interior(r: float, c: float, cos_t: float, sin_t: float, case: int,
              reading: str, literal_beta: float) -> tuple[float, float, float]:
    """Squared distance at v = 0, xi and residual for case 4 or 5.

    (cos_t, sin_t) is the right-hand side of the case-4 system (for case 5 the
    cosine equation carries the opposite sign).
    """
    ph = _Phase(r, c)
    lo, hi = -0.5 * math.pi, 0.5 * math.pi
    if case == 4:
        if reading == LITERAL_READING:
            return _literal_case4(ph, cos_t, sin_t, literal_beta)
        tau = _phase_root(ph.case4, math.atan2(sin_t, cos_t), lo, hi, "tau")
        theta = ph.case4(tau)
        res = max(abs(math.cos(theta) - cos_t), abs(math.sin(theta) - sin_t))
        d2 = 4.0 * ph.root(tau) ** 2 * ph.arc(tau) ** 2
    else:
        # theta(tau) increases from -(1+r)pi/2 to (1+r)pi/2
        tau = _phase_root(ph.case5, math.atan2(sin_t, -cos_t), lo, hi, "tau")
        theta = ph.case5(tau)
        res = max(abs(math.cos(theta) + cos_t), abs(math.sin(theta) - sin_t))
        d2 = 4.0 * ph.root(tau) ** 2 * (math.pi - ph.arc(tau)) ** 2
    return d2, ph.xi(tau), res


def _literal_case4(ph: _Phase, cos_t: float, sin_t: float, beta: float):
    # The sine equation with a fixed beta in place of xi: the two
    # equations no longer share an angle, so minimize the larger residual.
    def residual(tau):
        a = -ph.s(tau) * ph.arc(tau)
        return max(abs(math.cos(a + ph.tilt(tau)) - cos_t),
                   abs(math.sin(a + ph.tilt(tau, beta)) - sin_t))

    grid = np.linspace(-0.5 * math.pi, 0.5 * math.pi, 4001)
    vals = [residual(x) for x in grid]
    k = int(np.argmin(vals))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    for _ in range(200):
        m1, m2 = hi - invphi * (hi - lo), lo + invphi * (hi - lo)
        if residual(m1) < residual(m2):
            hi = m2
        else:
            lo = m1
    tau = 0.5 * (lo + hi)
    res = residual(tau)
    if res > RESIDUAL_TOL:
        raise SolverError(
            f"literal case-4 system (beta = {beta!r}) has no solution: best residual "
            f"{res:.3e} over the admissible xi range"
        )
    return 4.0 * ph.root(tau) ** 2 * ph.arc(tau) ** 2, ph.xi(tau), res


def _interior_case(one_minus_r: float, abs_arg: float) -> int:
    """Case 3, 4 or 5 for 0 < |A| < 1.

    Re(A) = |A| sin(pi |A| / 2) is equivalent to |arg A| = pi (1 - |A|) / 2;
    the angle form keeps its resolution near the identity, where both sides
    of the cosine form flatten to 1. Both angles shrink quadratically towards
    the identity, so the tolerance is taken relative to their size.
    """
    scale = math.pi * one_minus_r + 2.0 * abs_arg
    gap = math.pi * one_minus_r - 2.0 * abs_arg
    if abs(gap) <= CASE_TOL * scale:
        return 3
    return 4 if gap > 0 else 5


def _finish(v: float, d0_sq: float, case: int, xi=None, residual=0.0) -> DistanceResult:
    if xi is not None and residual > RESIDUAL_TOL:
        raise SolverError(
            f"case {case}: defining-equation residual {residual:.3e} exceeds {RESIDUAL_TOL}"
        )
    return DistanceResult(math.sqrt(v * v + d0_sq), case, xi, residual)


def dist_su2r_d2(p: Su2RPoint, reading: str = XI_READING,
                 literal_beta: float = 0.0) -> DistanceResult:
    """Distance from the identity to ``p`` for metric D2 on SU(2)xR."""
    if not isinstance(p, Su2RPoint):
        p = Su2RPoint(*p)
    A, v = p.A, p.v
    r = abs(A)
    c = abs(p.B)
    if abs(A - 1.0) <= CASE_TOL and c <= CASE_TOL:
        return DistanceResult(abs(v), 0, None, 0.0)
    if r <= CASE_TOL:
        return _finish(v, math.pi ** 2, 1)
    # |A| = 1 is tested through |B|, which resolves points near the identity
    if c <= CASE_TOL:
        a = abs(_principal_arg(A))
        return _finish(v, 4.0 * a * (2.0 * math.pi - a), 2)
    case = _interior_case(c * c / (1.0 + r), abs(_principal_arg(A)))
    if case == 3:
        return _finish(v, math.pi ** 2 * c * c, 3)
    d0_sq, xi, res = _interior(r, c, A.real / r, A.imag / r, case, reading, literal_beta)
    return _finish(v, d0_sq, case, xi, res)


def twist_d1_to_d2(p: Su2RPoint) -> Su2RPoint:
    """(A, B, v) -> (A e^{iv/2}, B e^{-iv/2}, v)."""
    ph = cmath.exp(0.5j * p.v)
    return Su2RPoint(p.A * ph, p.B / ph, p.v)


def dist_su2r_d1(p: Su2RPoint, **kwargs) -> DistanceResult:
    if not isinstance(p, Su2RPoint):
        p = Su2RPoint(*p)
    return dist_su2r_d2(twist_d1_to_d2(p), **kwargs)


def _so3_case2(C: np.ndarray, sign: float) -> tuple[float, float, float]:
    cos_rhs = -0.5 * _sqrt_clip(1.0 + C[0, 0] + C[1, 1] + C[2, 2])
    sin_rhs = 0.5 * sign * _sqrt_clip(1.0 - C[0, 0] - C[1, 1] + C[2, 2])
    target = math.atan2(sin_rhs, cos_rhs)
    s = _phase_root(lambda s: math.pi * s, target, -1.0, 1.0)
    res = max(abs(math.cos(math.pi * s) - cos_rhs), abs(math.sin(math.pi * s) - sin_rhs))
    return 4.0 * math.pi ** 2 * (1.0 - s * s), _xi_of(s), res


def _so3_moduli(C: np.ndarray) -> tuple[float, float]:
    """(|A|, |B|) of either lift: |A|^2 = (1 + c33)/2, |B|^2 = (1 - c33)/2.

    The smaller of 1 +- c33 is recovered from the third row and column,
    c13^2 + c23^2 = (1 + c33)(1 - c33), so neither modulus loses precision.
    """
    c33 = C[2, 2]
    side = 0.5 * (C[0, 2] ** 2 + C[1, 2] ** 2 + C[2, 0] ** 2 + C[2, 1] ** 2)
    if c33 >= 0.0:
        one_minus = side / (1.0 + c33)
        return math.sqrt(max(1.0 - 0.5 * one_minus, 0.0)), math.sqrt(0.5 * one_minus)
    one_plus = side / (1.0 - c33)
    return math.sqrt(0.5 * one_plus), math.sqrt(max(1.0 - 0.5 * one_plus, 0.0))


def _so3_interior(C: np.ndarray, case: int, sign: float, reading, literal_beta):
    # Right-hand sides sqrt((1 + c11 + c22 + c33) / (2 (1 + c33))) and
    # sgn(c21 - c12) sqrt((1 - c11 - c22 + c33) / (2 (1 + c33))) are the cosine
    # and sine of half the angle below; the antisymmetric part keeps full
    # relative precision for small angles.
    half = 0.5 * math.atan2(abs(C[1, 0] - C[0, 1]), C[0, 0] + C[1, 1])
    r, c = _so3_moduli(C)
    return _interior(r, c, math.cos(half), sign * math.sin(half), case, reading, literal_beta)


def _with_sign_tie(solve, C: np.ndarray, case: int):
    # sgn(c21 - c12) = 0 is resolved as +1 once both choices are seen to agree
    diff = C[1, 0] - C[0, 1]
    if diff != 0.0:
        return solve(math.copysign(1.0, diff))
    plus, minus = solve(1.0), solve(-1.0)
    if abs(plus[0] - minus[0]) > SIGN_TIE_TOL:
        raise SolverError(
            f"case {case}: sgn(c21 - c12) = 0 but the two sign choices disagree "
            f"({math.sqrt(plus[0])!r} vs {math.sqrt(minus[0])!r})"
        )
    return plus


def dist_so3r_rho2(p: So3RPoint, reading: str = XI_READING,
                   literal_beta: float = 0.0) -> DistanceResult:
    """Distance from the identity to ``p`` for metric D2 on SO(3)xR."""
    if not isinstance(p, So3RPoint):
        p = So3RPoint(*p)
    C, v = p.C, p.v
    if np.max(np.abs(C - np.eye(3))) <= CASE_TOL:
        return DistanceResult(abs(v), 0, None, 0.0)
    c33 = C[2, 2]
    r, c = _so3_moduli(C)
    if r <= CASE_TOL:
        return _finish(v, math.pi ** 2, 1)
    if c <= CASE_TOL:
        d0_sq, xi, res = _with_sign_tie(lambda sg: _so3_case2(C, sg), C, 2)
        return _finish(v, d0_sq, 2, xi, res)
    # cos(pi sqrt((1+c33)/2)) vs -(c11+c22)/(1+c33), compared as angles
    half_turn = 0.5 * math.atan2(abs(C[1, 0] - C[0, 1]), C[0, 0] + C[1, 1])
    case = _interior_case(c * c / (1.0 + r), half_turn)
    if case == 3:
        return _finish(v, math.pi ** 2 * c * c, 3)
    d0_sq, xi, res = _with_sign_tie(
        lambda sg: _so3_interior(C, case, sg, reading, literal_beta), C, case)
    return _finish(v, d0_sq, case, xi, res)


def twist_rho1_to_rho2(p: So3RPoint) -> So3RPoint:
    """(C, v) -> (C exp(v E3), v): first two columns mixed by cos v, sin v."""
    return So3RPoint(p.C @ rotation_z(p.v), p.v)


def dist_so3r_rho1(p: So3RPoint, **kwargs) -> DistanceResult:
    if not isinstance(p, So3RPoint):
        p = So3RPoint(*p)
    return dist_so3r_rho2(twist_rho1_to_rho2(p), **kwargs)


def distance(point, metric, **kwargs) -> DistanceResult:
    """Distance from the identity; the group is taken from the point type."""
    metric = BasisKind.parse(metric)
    if isinstance(point, Su2RPoint):
        fn = dist_su2r_d2 if metric is BasisKind.D2 else dist_su2r_d1
    elif isinstance(point, So3RPoint):
        fn = dist_so3r_rho2 if metric is BasisKind.D2 else dist_so3r_rho1
    else:
        raise TypeError(f"not a group point: {point!r}")
    return fn(point, **kwargs)


def distance_between(g, h, metric) -> DistanceResult:
    """d(g, h) = d(Id, g^{-1} h) by left invariance."""
    return distance(g.inverse() * h, metric)


def _with_v(point, v: float):
    if point.v == v:
        return point
    if isinstance(point, Su2RPoint):
        return Su2RPoint(point.A, point.B, v)
    return So3RPoint(point.C, v)


def splitting_check(p) -> float:
    """|d^2(p) - v^2 - d^2(p at v = 0)| for metric D2."""
    full = distance(p, BasisKind.D2).value
    flat = distance(_with_v(p, 0.0), BasisKind.D2).value
    return abs(full * full - p.v * p.v - flat * flat)


def group_of(point) -> GroupKind:
    return GroupKind.SU2R if isinstance(point, Su2RPoint) else GroupKind.SO3R
