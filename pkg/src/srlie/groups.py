"""Group elements of SU(2)xR and SO(3)xR and the double covering between them."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from srlie.algebra import (
    AlgebraVector,
    BasisKind,
    exp_so3,
    exp_su2,
    so3_tangent,
    su2_tangent,
)

MEMBERSHIP_TOL = 1e-10


class InvalidPointError(ValueError):
    """A group element violates its defining invariants."""


class GroupKind(enum.Enum):
    SU2R = "su2r"
    SO3R = "so3r"

    @classmethod
    def parse(cls, value) -> "GroupKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"unknown group {value!r}; expected su2r or so3r") from None


@dataclass(frozen=True)
class Su2RPoint:
    """(A, B, v) with |A|^2 + |B|^2 = 1; v is the additive line coordinate."""

    A: complex
    B: complex
    v: float = 0.0

    def __post_init__(self):
        A, B, v = complex(self.A), complex(self.B), float(self.v)
        if not (math.isfinite(A.real) and math.isfinite(A.imag)
                and math.isfinite(B.real) and math.isfinite(B.imag)
                and math.isfinite(v)):
            raise InvalidPointError("Su2RPoint entries must be finite")
        norm2 = abs(A) ** 2 + abs(B) ** 2
        if abs(norm2 - 1.0) > MEMBERSHIP_TOL:
            raise InvalidPointError(
                f"|A|^2 + |B|^2 = {norm2!r} is not 1 within {MEMBERSHIP_TOL}"
            )
        if norm2 != 1.0:
            scale = 1.0 / math.sqrt(norm2)
            A, B = A * scale, B * scale
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "v", v)

    @classmethod
    def identity(cls) -> "Su2RPoint":
        return cls(1.0, 0.0, 0.0)

    def matrix(self) -> np.ndarray:
        """The compact 2x2 block [[A, B], [-conj(B), conj(A)]]."""
        A, B = self.A, self.B
        return np.array([[A, B], [-B.conjugate(), A.conjugate()]])

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.A.real, self.A.imag, self.B.real, self.B.imag, self.v)

    def __mul__(self, other: "Su2RPoint") -> "Su2RPoint":
        return su2r_mul(self, other)

    def inverse(self) -> "Su2RPoint":
        return su2r_inverse(self)


@dataclass(frozen=True, eq=False)
class So3RPoint:
    """(C, v) with C in SO(3); v is the additive line coordinate."""

    C: np.ndarray
    v: float = 0.0

    def __post_init__(self):
        C = np.array(self.C, dtype=float)
        if C.shape != (3, 3):
            raise InvalidPointError(f"C must be 3x3, got shape {C.shape}")
        v = float(self.v)
        if not (np.all(np.isfinite(C)) and math.isfinite(v)):
            raise InvalidPointError("So3RPoint entries must be finite")
        defect = np.max(np.abs(C.T @ C - np.eye(3)))
        if defect > MEMBERSHIP_TOL:
            raise InvalidPointError(
                f"C is not orthogonal: max|C^T C - E| = {defect:.3e} > {MEMBERSHIP_TOL}"
            )
        if np.linalg.det(C) <= 0.0:
            raise InvalidPointError("C must have positive determinant")
        if defect > 0.0:
            # nearest orthogonal matrix (polar factor)
            u, _, vt = np.linalg.svd(C)
            C = u @ vt
        C.setflags(write=False)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "v", v)

    @classmethod
    def identity(cls) -> "So3RPoint":
        return cls(np.eye(3), 0.0)

    def __mul__(self, other: "So3RPoint") -> "So3RPoint":
        return so3r_mul(self, other)

    def inverse(self) -> "So3RPoint":
        return so3r_inverse(self)

    def __repr__(self) -> str:
        rows = "; ".join(" ".join(f"{x:.6g}" for x in row) for row in self.C)
        return f"So3RPoint(C=[{rows}], v={self.v!r})"


def su2r_mul(g: Su2RPoint, h: Su2RPoint) -> Su2RPoint:
    A = g.A * h.A - g.B * h.B.conjugate()
    B = g.A * h.B + g.B * h.A.conjugate()
    return Su2RPoint(A, B, g.v + h.v)


def su2r_inverse(g: Su2RPoint) -> Su2RPoint:
    return Su2RPoint(g.A.conjugate(), -g.B, -g.v)


def so3r_mul(g: So3RPoint, h: So3RPoint) -> So3RPoint:
    return So3RPoint(g.C @ h.C, g.v + h.v)


def so3r_inverse(g: So3RPoint) -> So3RPoint:
    return So3RPoint(g.C.T, -g.v)


def multiply(g, h):
    return g * h


def identity(group: GroupKind):
    if GroupKind.parse(group) is GroupKind.SU2R:
        return Su2RPoint.identity()
    return So3RPoint.identity()


def one_param_subgroup(x: AlgebraVector, basis: BasisKind, group: GroupKind, t: float):
    """exp(t x) in the matrix realization of ``group``."""
    group = GroupKind.parse(group)
    tx = x * t
    if group is GroupKind.SU2R:
        z, r = su2_tangent(tx, basis)
        A, B = exp_su2(z)
        return Su2RPoint(A, B, r)
    c, r = so3_tangent(tx, basis)
    return So3RPoint(exp_so3(c), r)


def rotation_z(angle: float) -> np.ndarray:
    """exp(angle * E3) in SO(3): [[cos, -sin, 0], [sin, cos, 0], [0, 0, 1]]."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def covering_pi(A: complex, B: complex) -> np.ndarray:
    """The double covering SU(2) -> SO(3)."""
    A, B = complex(A), complex(B)
    norm2 = abs(A) ** 2 + abs(B) ** 2
    if abs(norm2 - 1.0) > MEMBERSHIP_TOL:
        raise InvalidPointError(f"|A|^2 + |B|^2 = {norm2!r} is not 1")
    a1, a2, b1, b2 = A.real, A.imag, B.real, B.imag
    return np.array(
        [
            [a1 * a1 - a2 * a2 + b1 * b1 - b2 * b2, 2 * (b1 * b2 - a1 * a2), 2 * (a1 * b2 + a2 * b1)],
            [2 * (a1 * a2 + b1 * b2), a1 * a1 - a2 * a2 - b1 * b1 + b2 * b2, 2 * (a2 * b2 - a1 * b1)],
            [2 * (a2 * b1 - a1 * b2), 2 * (a1 * b1 + a2 * b2), a1 * a1 + a2 * a2 - b1 * b1 - b2 * b2],
        ]
    )


def covering_pi_tilde(g: Su2RPoint) -> So3RPoint:
    return So3RPoint(covering_pi(g.A, g.B), g.v)


def _quaternion_from_rotation(R: np.ndarray) -> tuple[float, float, float, float]:
    # (w, x, y, z) = (A1, B1, B2, A2); pivot on the largest of the four squares
    tr = R[0, 0] + R[1, 1] + R[2, 2]
    pivots = (tr, R[0, 0], R[1, 1], R[2, 2])
    k = int(np.argmax(pivots))
    if k == 0:
        w = 0.5 * math.sqrt(max(1.0 + tr, 0.0))
        f = 0.25 / w
        return w, (R[2, 1] - R[1, 2]) * f, (R[0, 2] - R[2, 0]) * f, (R[1, 0] - R[0, 1]) * f
    if k == 1:
        x = 0.5 * math.sqrt(max(1.0 + R[0, 0] - R[1, 1] - R[2, 2], 0.0))
        f = 0.25 / x
        return (R[2, 1] - R[1, 2]) * f, x, (R[0, 1] + R[1, 0]) * f, (R[0, 2] + R[2, 0]) * f
    if k == 2:
        y = 0.5 * math.sqrt(max(1.0 - R[0, 0] + R[1, 1] - R[2, 2], 0.0))
        f = 0.25 / y
        return (R[0, 2] - R[2, 0]) * f, (R[0, 1] + R[1, 0]) * f, y, (R[1, 2] + R[2, 1]) * f
    z = 0.5 * math.sqrt(max(1.0 - R[0, 0] - R[1, 1] + R[2, 2], 0.0))
    f = 0.25 / z
    return (R[1, 0] - R[0, 1]) * f, (R[0, 2] + R[2, 0]) * f, (R[1, 2] + R[2, 1]) * f, z


def lifts(p: So3RPoint) -> tuple[Su2RPoint, Su2RPoint]:
    """Both preimages of ``p`` under the covering; the first has Re(A) >= 0."""
    if not isinstance(p, So3RPoint):
        p = So3RPoint(*p)
    w, x, y, z = _quaternion_from_rotation(p.C)
    A, B = complex(w, z), complex(x, y)
    if A.real < 0.0:
        A, B = -A, -B
    return Su2RPoint(A, B, p.v), Su2RPoint(-A, -B, p.v)
