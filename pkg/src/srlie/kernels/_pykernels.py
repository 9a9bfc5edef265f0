"""Reference (numpy) implementations of the hot loops.

The compiled extension ``_ckernels`` exposes the same functions with the same
signatures; ``srlie.kernels`` picks one of the two at import time.

Conventions shared by both backends:

* ``group`` is 0 for SU(2)xR and 1 for SO(3)xR; ``metric`` is 1 or 2.
* Endpoint rows are (Re A, Im A, Re B, Im B, v) for SU(2)xR and
  (c11, c12, ..., c33, v) for SO(3)xR.
* Algebra elements inside the integrator are carried in the standard basis
  E1..E3 (compact part, bracket = cross product) plus the central coefficient.
"""

from __future__ import annotations

import numpy as np

SU2R, SO3R = 0, 1


def _sinc(x):
    return np.sinc(x / np.pi)


def _versine(x):
    h = _sinc(0.5 * x)
    return 0.5 * h * h


def endpoints(group, metric, phi0, alpha2, beta, t):
    """Closed-form geodesic endpoints, broadcasting over the four parameter arrays."""
    phi0, alpha2, beta, t = np.broadcast_arrays(
        *(np.asarray(x, dtype=float) for x in (phi0, alpha2, beta, t)))
    rad = np.sqrt(np.maximum(1.0 - alpha2 * alpha2, 0.0))
    b = beta - alpha2 if metric == 1 else beta
    w = np.sqrt(rad * rad + b * b)
    v = alpha2 * t
    if group == SU2R:
        half = 0.5 * w * t
        m = 0.5 * t * _sinc(half)
        phase = np.exp(-0.5j * beta * t)
        A = (np.cos(half) + 1j * b * m) * phase
        B = m * rad * np.exp(1j * phi0) / phase
        return np.stack([A.real, A.imag, B.real, B.imag, v], axis=-1)
    a1, a3 = rad * np.cos(phi0), rad * np.sin(phi0)
    wt = w * t
    mu = t * _sinc(wt)
    nu = t * t * _versine(wt)
    M = np.empty(phi0.shape + (3, 3))
    M[..., 0, 0] = 1.0 - nu * (a3 * a3 + b * b)
    M[..., 0, 1] = a1 * a3 * nu - b * mu
    M[..., 0, 2] = a1 * b * nu + a3 * mu
    M[..., 1, 0] = a1 * a3 * nu + b * mu
    M[..., 1, 1] = 1.0 - nu * (a1 * a1 + b * b)
    M[..., 1, 2] = a3 * b * nu - a1 * mu
    M[..., 2, 0] = a1 * b * nu - a3 * mu
    M[..., 2, 1] = a3 * b * nu + a1 * mu
    M[..., 2, 2] = 1.0 - nu * (a1 * a1 + a3 * a3)
    c, s = np.cos(beta * t), np.sin(beta * t)
    # right factor Rz(-beta t) mixes the first two columns
    C = M.copy()
    C[..., :, 0] = M[..., :, 0] * c[..., None] - M[..., :, 1] * s[..., None]
    C[..., :, 1] = M[..., :, 0] * s[..., None] + M[..., :, 1] * c[..., None]
    out = np.empty(phi0.shape + (10,))
    out[..., :9] = C.reshape(phi0.shape + (9,))
    out[..., 9] = v
    return out


def endpoint_error(group, rows, target):
    """Frobenius distance on the compact block plus |dv|, row-wise."""
    d = rows - target
    if group == SU2R:
        frob = np.sqrt(2.0 * np.sum(d[..., :4] ** 2, axis=-1))
        return frob + np.abs(d[..., 4])
    return np.sqrt(np.sum(d[..., :9] ** 2, axis=-1)) + np.abs(d[..., 9])


def scan(group, metric, target, phi0s, alpha2s, betas, trels, err_out, idx_out,
         row_lo, row_hi):
    """Fill err_out[i, j, k] with min over phi0 of the endpoint error.

    Rows i in [row_lo, row_hi) of the alpha2 axis are processed. The time of
    cell (i, j, k) is trels[k] * 2 pi / w(alpha2s[i], betas[j]); idx_out holds
    the first phi0 index attaining the minimum.
    """
    target = np.asarray(target, dtype=float)
    phi = np.asarray(phi0s, dtype=float)[None, None, :]
    trels = np.asarray(trels, dtype=float)
    for i in range(row_lo, row_hi):
        a2 = alpha2s[i]
        b = np.asarray(betas, dtype=float) - a2 if metric == 1 else np.asarray(betas, dtype=float)
        w = np.sqrt(1.0 - a2 * a2 + b * b)
        t = (2.0 * np.pi / w)[:, None] * trels[None, :]
        rows = endpoints(group, metric, phi, a2, np.asarray(betas, dtype=float)[:, None, None],
                         t[:, :, None])
        err = endpoint_error(group, rows, target)
        idx = np.argmin(err, axis=-1)
        err_out[i] = np.take_along_axis(err, idx[..., None], axis=-1)[..., 0]
        idx_out[i] = idx


def _horizontal(metric, psi):
    # u = psi1 e1 + psi2 e2 + psi3 e3 in standard coordinates
    x1, x2 = psi[:, 0], psi[:, 2]
    x3 = -psi[:, 1] if metric == 1 else np.zeros_like(x1)
    return np.stack([x1, x2, x3], axis=-1), psi[:, 1]


def _covector_rhs(consts, psi):
    # psi_j' = sum_{i <= 3, k} C^k_{ij} psi_i psi_k
    return np.einsum("ijk,ni,nk->nj", consts[:3], psi[:, :3], psi)


def _dexpinv(theta, u):
    tu = np.cross(theta, u)
    return u + 0.5 * tu + np.cross(theta, tu) / 12.0


def _exp_su2(x):
    w = np.linalg.norm(x, axis=-1)
    half = 0.5 * w
    s = 0.5 * _sinc(half)
    return np.cos(half) + 1j * s * x[:, 2], s * (x[:, 0] + 1j * x[:, 1])


def _exp_so3(x):
    w = np.linalg.norm(x, axis=-1)
    K = np.zeros(x.shape[:1] + (3, 3))
    K[:, 0, 1], K[:, 0, 2] = -x[:, 2], x[:, 1]
    K[:, 1, 0], K[:, 1, 2] = x[:, 2], -x[:, 0]
    K[:, 2, 0], K[:, 2, 1] = -x[:, 1], x[:, 0]
    eye = np.broadcast_to(np.eye(3), K.shape)
    return eye + _sinc(w)[:, None, None] * K + _versine(w)[:, None, None] * (K @ K)


def integrate(group, metric, consts, psi0, t_end, steps, stride):
    """Batched RK4 / Munthe-Kaas integration from the identity.

    psi0 has shape (N, 4) and t_end shape (N,). Returns (points, covectors)
    sampled every ``stride`` steps (and at the end): shapes (N, S, dim) and
    (N, S, 4).
    """
    consts = np.asarray(consts, dtype=float)
    psi = np.array(psi0, dtype=float)
    t_end = np.asarray(t_end, dtype=float)
    n = psi.shape[0]
    h = t_end / steps
    dim = 5 if group == SU2R else 10
    marks = list(range(0, steps + 1, stride))
    if marks[-1] != steps:
        marks.append(steps)
    pts = np.empty((n, len(marks), dim))
    cov = np.empty((n, len(marks), 4))
    A = np.ones(n, dtype=complex)
    B = np.zeros(n, dtype=complex)
    C = np.broadcast_to(np.eye(3), (n, 3, 3)).copy()
    v = np.zeros(n)

    def record(slot):
        if group == SU2R:
            pts[:, slot] = np.stack([A.real, A.imag, B.real, B.imag, v], axis=-1)
        else:
            pts[:, slot, :9] = C.reshape(n, 9)
            pts[:, slot, 9] = v
        cov[:, slot] = psi

    slot = 0
    record(slot)
    hc = h[:, None]
    for step in range(1, steps + 1):
        k1 = _covector_rhs(consts, psi)
        u1, r1 = _horizontal(metric, psi)
        p2 = psi + 0.5 * hc * k1
        k2 = _covector_rhs(consts, p2)
        u2, r2 = _horizontal(metric, p2)
        K2 = _dexpinv(0.5 * hc * u1, u2)
        p3 = psi + 0.5 * hc * k2
        k3 = _covector_rhs(consts, p3)
        u3, r3 = _horizontal(metric, p3)
        K3 = _dexpinv(0.5 * hc * K2, u3)
        p4 = psi + hc * k3
        k4 = _covector_rhs(consts, p4)
        u4, r4 = _horizontal(metric, p4)
        K4 = _dexpinv(hc * K3, u4)
        theta = hc / 6.0 * (u1 + 2.0 * K2 + 2.0 * K3 + K4)
        v = v + h / 6.0 * (r1 + 2.0 * r2 + 2.0 * r3 + r4)
        psi = psi + hc / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if group == SU2R:
            eA, eB = _exp_su2(theta)
            A, B = A * eA - B * np.conj(eB), A * eB + B * np.conj(eA)
        else:
            C = C @ _exp_so3(theta)
        if step == marks[slot + 1]:
            slot += 1
            record(slot)
    return pts, cov
