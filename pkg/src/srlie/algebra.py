"""The Lie algebra su(2)+R in its two adapted bases.

Both bases are expressed through a fixed "standard" basis E1..E4 with
[E1,E2]=E3, [E2,E3]=E1, [E3,E1]=E2 and E4 central:

    D1:  e1 = E1, e2 = E4 - E3, e3 = E2, e4 = E3
    D2:  e1 = E1, e2 = E4,      e3 = E2, e4 = E3

The compact block is realized either in su(2) (2x2 skew-hermitian,
traceless) or in so(3) (3x3 skew-symmetric).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

_SMALL_W = 1e-4


class BasisKind(enum.Enum):
    D1 = 1
    D2 = 2

    @classmethod
    def parse(cls, value) -> "BasisKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().upper()
        if key in ("1", "D1"):
            return cls.D1
        if key in ("2", "D2"):
            return cls.D2
        raise ValueError(f"unknown metric/basis {value!r}; expected 1 or 2")


@dataclass(frozen=True)
class AlgebraVector:
    """Coefficients in the ordered basis e1..e4 of a given BasisKind."""

    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0
    c4: float = 0.0

    def __post_init__(self):
        for name in ("c1", "c2", "c3", "c4"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"AlgebraVector.{name} must be finite, got {value}")
            object.__setattr__(self, name, value)

    @classmethod
    def basis(cls, i: int) -> "AlgebraVector":
        """Unit vector e_i, i in 1..4."""
        coeffs = [0.0] * 4
        coeffs[i - 1] = 1.0
        return cls(*coeffs)

    @classmethod
    def from_array(cls, arr) -> "AlgebraVector":
        a = np.asarray(arr, dtype=float).ravel()
        if a.shape != (4,):
            raise ValueError("AlgebraVector needs exactly 4 coefficients")
        return cls(*a)

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3, self.c4])

    def __add__(self, other: "AlgebraVector") -> "AlgebraVector":
        return AlgebraVector.from_array(self.as_array() + other.as_array())

    def __sub__(self, other: "AlgebraVector") -> "AlgebraVector":
        return AlgebraVector.from_array(self.as_array() - other.as_array())

    def __neg__(self) -> "AlgebraVector":
        return AlgebraVector.from_array(-self.as_array())

    def __mul__(self, s: float) -> "AlgebraVector":
        return AlgebraVector.from_array(float(s) * self.as_array())

    __rmul__ = __mul__


# Nonzero brackets [e_i, e_j] = sign * e_k for i < j, 1-based.
_BRACKETS = {
    BasisKind.D1: {
        (1, 2): (3, 1),
        (1, 4): (3, -1),
        (1, 3): (4, 1),
        (2, 3): (1, 1),
        (3, 4): (1, 1),
    },
    BasisKind.D2: {
        (1, 3): (4, 1),
        (1, 4): (3, -1),
        (3, 4): (1, 1),
    },
}


def _table(basis: BasisKind) -> np.ndarray:
    # consts[i, j, k] = C^k_{ij}, zero-based
    consts = np.zeros((4, 4, 4), dtype=np.int64)
    for (i, j), (k, sign) in _BRACKETS[basis].items():
        consts[i - 1, j - 1, k - 1] = sign
        consts[j - 1, i - 1, k - 1] = -sign
    consts.setflags(write=False)
    return consts


_STRUCTURE = {b: _table(b) for b in BasisKind}


def structure_constants(basis: BasisKind) -> np.ndarray:
    """Integer array ``C[i, j, k]`` with ``[e_i, e_j] = sum_k C[i, j, k] e_k``.

    Indices are zero-based (``C[0, 1, 2]`` is C^3_{12}). The returned array is
    read-only.
    """
    return _STRUCTURE[BasisKind.parse(basis)]


def bracket(x: AlgebraVector, y: AlgebraVector, basis: BasisKind) -> AlgebraVector:
    consts = structure_constants(basis)
    a, b = x.as_array(), y.as_array()
    # pairing i < j keeps the result exactly antisymmetric in floating point
    out = np.zeros(4)
    for i in range(4):
        for j in range(i + 1, 4):
            out += (a[i] * b[j] - a[j] * b[i]) * consts[i, j]
    return AlgebraVector.from_array(out)


# Columns are e_1..e_4 written in E_1..E_4.
_TO_STANDARD = {
    BasisKind.D1: np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0, 1.0],
            [0.0, 1.0, 0.0, 0.0],
        ]
    ),
    BasisKind.D2: np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 1.0, 0.0, 0.0],
        ]
    ),
}


def to_standard(x: AlgebraVector, basis: BasisKind) -> np.ndarray:
    """Coordinates of ``x`` with respect to E1..E4."""
    return _TO_STANDARD[BasisKind.parse(basis)] @ x.as_array()


def from_standard(a, basis: BasisKind) -> AlgebraVector:
    m = _TO_STANDARD[BasisKind.parse(basis)]
    return AlgebraVector.from_array(np.linalg.solve(m, np.asarray(a, dtype=float)))


def ad_e4_rotation(theta: float, x: AlgebraVector) -> AlgebraVector:
    """Ad(exp(theta e4)) acting on ``x``; identical in both bases."""
    c, s = math.cos(theta), math.sin(theta)
    return AlgebraVector(
        x.c1 * c - x.c3 * s,
        x.c2,
        x.c1 * s + x.c3 * c,
        x.c4,
    )


def sinc(w: float) -> float:
    """sin(w)/w, equal to 1 at w = 0."""
    if abs(w) < _SMALL_W:
        w2 = w * w
        return 1.0 - w2 / 6.0 + w2 * w2 / 120.0
    return math.sin(w) / w


def versine_ratio(w: float) -> float:
    """(1 - cos w)/w**2, equal to 1/2 at w = 0."""
    if abs(w) < _SMALL_W:
        w2 = w * w
        return 0.5 - w2 / 24.0 + w2 * w2 / 720.0
    # 2 sin^2(w/2) avoids the cancellation in 1 - cos w
    h = math.sin(0.5 * w)
    return 2.0 * h * h / (w * w)


@dataclass(frozen=True)
class Su2Tangent:
    """The su(2) element [[iX, Y], [-conj(Y), -iX]]."""

    X: float
    Y: complex

    @property
    def w(self) -> float:
        return math.hypot(self.X, abs(self.Y))

    def matrix(self) -> np.ndarray:
        X, Y = self.X, complex(self.Y)
        return np.array([[1j * X, Y], [-Y.conjugate(), -1j * X]])


@dataclass(frozen=True)
class So3Tangent:
    """Skew-symmetric 3x3 matrix given by its upper triangle."""

    c12: float
    c13: float
    c23: float

    @property
    def w(self) -> float:
        return math.sqrt(self.c12 ** 2 + self.c13 ** 2 + self.c23 ** 2)

    def matrix(self) -> np.ndarray:
        return np.array(
            [
                [0.0, self.c12, self.c13],
                [-self.c12, 0.0, self.c23],
                [-self.c13, -self.c23, 0.0],
            ]
        )


def exp_su2(z: Su2Tangent) -> tuple[complex, complex]:
    """Matrix exponential of an su(2) element, returned as the pair (A, B).

    The unitary matrix is [[A, B], [-conj(B), conj(A)]].
    """
    w = z.w
    s = sinc(w)
    A = complex(math.cos(w), s * z.X)
    B = s * complex(z.Y)
    return A, B


def exp_so3(c: So3Tangent) -> np.ndarray:
    w = c.w
    C = c.matrix()
    return np.eye(3) + sinc(w) * C + versine_ratio(w) * (C @ C)


def su2_tangent(x: AlgebraVector, basis: BasisKind) -> tuple[Su2Tangent, float]:
    """Realize ``x`` in su(2)+R: returns the su(2) part and the R coefficient.

    E1 = (e12 - e21)/2, E2 = i(e12 + e21)/2, E3 = i(e11 - e22)/2, E4 = e33.
    """
    a1, a2, a3, a4 = to_standard(x, basis)
    return Su2Tangent(0.5 * a3, 0.5 * complex(a1, a2)), float(a4)


def so3_tangent(x: AlgebraVector, basis: BasisKind) -> tuple[So3Tangent, float]:
    """Realize ``x`` in so(3)+R with E1 = e32 - e23, E2 = e13 - e31, E3 = e21 - e12."""
    a1, a2, a3, a4 = to_standard(x, basis)
    return So3Tangent(c12=-a3, c13=a2, c23=-a1), float(a4)
