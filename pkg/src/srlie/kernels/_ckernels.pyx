# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot loops in ``_pykernels`` (same signatures)."""

import numpy as np

from libc.math cimport cos, fabs, sin, sqrt, M_PI

cdef int SU2R = 0


cdef inline double _sinc(double x) nogil:
    cdef double x2
    if fabs(x) < 1e-4:
        x2 = x * x
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0
    return sin(x) / x


cdef inline double _versine(double x) nogil:
    cdef double h = _sinc(0.5 * x)
    return 0.5 * h * h


cdef inline void _su2_point(int metric, double phi0, double a2, double beta, double t,
                            double* out) nogil:
    cdef double rad = sqrt(max(1.0 - a2 * a2, 0.0))
    cdef double b = beta - a2 if metric == 1 else beta
    cdef double w = sqrt(rad * rad + b * b)
    cdef double half = 0.5 * w * t
    cdef double m = 0.5 * t * _sinc(half)
    cdef double n = cos(half)
    cdef double pc = cos(0.5 * beta * t), ps = sin(0.5 * beta * t)
    # A = (n + i b m) e^{-i beta t / 2}, B = m rad e^{i phi0} e^{i beta t / 2}
    out[0] = n * pc + b * m * ps
    out[1] = b * m * pc - n * ps
    out[2] = m * rad * cos(phi0 + 0.5 * beta * t)
    out[3] = m * rad * sin(phi0 + 0.5 * beta * t)
    out[4] = a2 * t


cdef inline void _so3_point(int metric, double phi0, double a2, double beta, double t,
                            double* out) nogil:
    cdef double rad = sqrt(max(1.0 - a2 * a2, 0.0))
    cdef double b = beta - a2 if metric == 1 else beta
    cdef double w = sqrt(rad * rad + b * b)
    cdef double a1 = rad * cos(phi0), a3 = rad * sin(phi0)
    cdef double mu = t * _sinc(w * t)
    cdef double nu = t * t * _versine(w * t)
    cdef double M[9]
    cdef double c = cos(beta * t), s = sin(beta * t)
    cdef int r
    M[0] = 1.0 - nu * (a3 * a3 + b * b)
    M[1] = a1 * a3 * nu - b * mu
    M[2] = a1 * b * nu + a3 * mu
    M[3] = a1 * a3 * nu + b * mu
    M[4] = 1.0 - nu * (a1 * a1 + b * b)
    M[5] = a3 * b * nu - a1 * mu
    M[6] = a1 * b * nu - a3 * mu
    M[7] = a3 * b * nu + a1 * mu
    M[8] = 1.0 - nu * (a1 * a1 + a3 * a3)
    for r in range(3):
        out[3 * r] = M[3 * r] * c - M[3 * r + 1] * s
        out[3 * r + 1] = M[3 * r] * s + M[3 * r + 1] * c
        out[3 * r + 2] = M[3 * r + 2]
    out[9] = a2 * t


cdef inline double _error(int group, const double* row, const double[::1] target) nogil:
    cdef double acc = 0.0, d
    cdef int k
    if group == SU2R:
        for k in range(4):
            d = row[k] - target[k]
            acc += d * d
        return sqrt(2.0 * acc) + fabs(row[4] - target[4])
    for k in range(9):
        d = row[k] - target[k]
        acc += d * d
    return sqrt(acc) + fabs(row[9] - target[9])


def endpoints(int group, int metric, phi0, alpha2, beta, t):
    """Closed-form geodesic endpoints, broadcasting over the four parameter arrays."""
    bp, ba, bb, bt = np.broadcast_arrays(
        *(np.asarray(x, dtype=float) for x in (phi0, alpha2, beta, t)))
    shape = bp.shape
    cdef double[::1] p = np.ascontiguousarray(bp).ravel()
    cdef double[::1] a = np.ascontiguousarray(ba).ravel()
    cdef double[::1] be = np.ascontiguousarray(bb).ravel()
    cdef double[::1] tt = np.ascontiguousarray(bt).ravel()
    cdef int dim = 5 if group == SU2R else 10
    out = np.empty((p.shape[0], dim))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(p.shape[0]):
            if group == SU2R:
                _su2_point(metric, p[i], a[i], be[i], tt[i], &o[i, 0])
            else:
                _so3_point(metric, p[i], a[i], be[i], tt[i], &o[i, 0])
    return out.reshape(shape + (dim,))


def endpoint_error(int group, rows, target):
    """Frobenius distance on the compact block plus |dv|, row-wise."""
    rows = np.asarray(rows, dtype=float)
    # python-level indexing here must avoid negative indices (wraparound is off)
    shape = rows.shape[:rows.ndim - 1]
    cdef double[:, ::1] r = np.ascontiguousarray(rows.reshape(rows.size // rows.shape[rows.ndim - 1],
                                                              rows.shape[rows.ndim - 1]))
    cdef double[::1] tg = np.ascontiguousarray(target, dtype=float)
    out = np.empty(r.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(r.shape[0]):
            o[i] = _error(group, &r[i, 0], tg)
    return out.reshape(shape)


def scan(int group, int metric, target, phi0s, alpha2s, betas, trels,
         double[:, :, ::1] err_out, long[:, :, ::1] idx_out, Py_ssize_t row_lo,
         Py_ssize_t row_hi):
    """Fill err_out[i, j, k] with min over phi0 of the endpoint error.

    Rows i in [row_lo, row_hi) of the alpha2 axis are processed. The time of
    cell (i, j, k) is trels[k] * 2 pi / w(alpha2s[i], betas[j]); idx_out holds
    the first phi0 index attaining the minimum. Runs without the GIL.
    """
    cdef double[::1] tg = np.ascontiguousarray(target, dtype=float)
    cdef double[::1] cph = np.cos(np.asarray(phi0s, dtype=float))
    cdef double[::1] sph = np.sin(np.asarray(phi0s, dtype=float))
    cdef double[::1] a2s = np.ascontiguousarray(alpha2s, dtype=float)
    cdef double[::1] bs = np.ascontiguousarray(betas, dtype=float)
    cdef double[::1] tr = np.ascontiguousarray(trels, dtype=float)
    cdef Py_ssize_t i, j, k, q, best_q
    cdef Py_ssize_t nphi = cph.shape[0]
    cdef double a2, rad, b, beta, w, t, e, best, half, m, n, pc, ps, mr
    cdef double ar, ai, dA, bre, bim, d, mu, nu, c, s, a1, a3
    cdef double row[10]
    cdef double M[9]
    cdef int r
    with nogil:
        for i in range(row_lo, row_hi):
            a2 = a2s[i]
            rad = sqrt(max(1.0 - a2 * a2, 0.0))
            for j in range(bs.shape[0]):
                beta = bs[j]
                b = beta - a2 if metric == 1 else beta
                w = sqrt(rad * rad + b * b)
                for k in range(tr.shape[0]):
                    t = tr[k] * 2.0 * M_PI / w
                    best = 1e300
                    best_q = 0
                    if group == SU2R:
                        # A does not depend on phi0; B turns with it
                        half = 0.5 * w * t
                        m = 0.5 * t * _sinc(half)
                        n = cos(half)
                        pc = cos(0.5 * beta * t)
                        ps = sin(0.5 * beta * t)
                        ar = n * pc + b * m * ps
                        ai = b * m * pc - n * ps
                        dA = (ar - tg[0]) * (ar - tg[0]) + (ai - tg[1]) * (ai - tg[1])
                        mr = m * rad
                        for q in range(nphi):
                            bre = mr * (cph[q] * pc - sph[q] * ps) - tg[2]
                            bim = mr * (sph[q] * pc + cph[q] * ps) - tg[3]
                            e = sqrt(2.0 * (dA + bre * bre + bim * bim)) + fabs(a2 * t - tg[4])
                            if e < best:
                                best = e
                                best_q = q
                    else:
                        mu = t * _sinc(w * t)
                        nu = t * t * _versine(w * t)
                        c = cos(beta * t)
                        s = sin(beta * t)
                        for q in range(nphi):
                            a1 = rad * cph[q]
                            a3 = rad * sph[q]
                            M[0] = 1.0 - nu * (a3 * a3 + b * b)
                            M[1] = a1 * a3 * nu - b * mu
                            M[2] = a1 * b * nu + a3 * mu
                            M[3] = a1 * a3 * nu + b * mu
                            M[4] = 1.0 - nu * (a1 * a1 + b * b)
                            M[5] = a3 * b * nu - a1 * mu
                            M[6] = a1 * b * nu - a3 * mu
                            M[7] = a3 * b * nu + a1 * mu
                            M[8] = 1.0 - nu * (a1 * a1 + a3 * a3)
                            for r in range(3):
                                row[3 * r] = M[3 * r] * c - M[3 * r + 1] * s
                                row[3 * r + 1] = M[3 * r] * s + M[3 * r + 1] * c
                                row[3 * r + 2] = M[3 * r + 2]
                            row[9] = a2 * t
                            e = _error(group, row, tg)
                            if e < best:
                                best = e
                                best_q = q
                    err_out[i, j, k] = best
                    idx_out[i, j, k] = best_q


cdef inline void _cross(const double* a, const double* b, double* out) nogil:
    out[0] = a[1] * b[2] - a[2] * b[1]
    out[1] = a[2] * b[0] - a[0] * b[2]
    out[2] = a[0] * b[1] - a[1] * b[0]


cdef inline void _dexpinv(const double* theta, const double* u, double* out) nogil:
    cdef double tu[3]
    cdef double ttu[3]
    cdef int k
    _cross(theta, u, tu)
    _cross(theta, tu, ttu)
    for k in range(3):
        out[k] = u[k] + 0.5 * tu[k] + ttu[k] / 12.0


cdef inline void _horizontal(int metric, const double* psi, double* u) nogil:
    u[0] = psi[0]
    u[1] = psi[2]
    u[2] = -psi[1] if metric == 1 else 0.0


cdef inline void _rhs(const double[:, :, ::1] cs, const double* psi, double* out) nogil:
    cdef int i, j, k
    cdef double acc
    for j in range(4):
        acc = 0.0
        for i in range(3):
            for k in range(4):
                acc += cs[i, j, k] * psi[i] * psi[k]
        out[j] = acc


cdef inline void _record(int group, double* q, double* C, double v, double* psi,
                         double* prow, double* crow) nogil:
    cdef int k
    if group == SU2R:
        # q = (Re A, Im A, Re B, Im B)
        for k in range(4):
            prow[k] = q[k]
        prow[4] = v
    else:
        for k in range(9):
            prow[k] = C[k]
        prow[9] = v
    for k in range(4):
        crow[k] = psi[k]


cdef inline void _advance(int group, double* q, double* C, const double* x) nogil:
    cdef double w = sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])
    cdef double half, s, ea_r, ea_i, eb_r, eb_i, ar, ai, br, bi
    cdef double sc, vs
    cdef double K[9]
    cdef double K2[9]
    cdef double E[9]
    cdef double out[9]
    cdef int r, c, k
    if group == SU2R:
        half = 0.5 * w
        s = 0.5 * _sinc(half)
        ea_r = cos(half)
        ea_i = s * x[2]
        eb_r = s * x[0]
        eb_i = s * x[1]
        ar, ai, br, bi = q[0], q[1], q[2], q[3]
        # A'' = A eA - B conj(eB), B'' = A eB + B conj(eA)
        q[0] = ar * ea_r - ai * ea_i - (br * eb_r + bi * eb_i)
        q[1] = ar * ea_i + ai * ea_r - (bi * eb_r - br * eb_i)
        q[2] = ar * eb_r - ai * eb_i + (br * ea_r + bi * ea_i)
        q[3] = ar * eb_i + ai * eb_r + (bi * ea_r - br * ea_i)
        return
    K[0], K[1], K[2] = 0.0, -x[2], x[1]
    K[3], K[4], K[5] = x[2], 0.0, -x[0]
    K[6], K[7], K[8] = -x[1], x[0], 0.0
    for r in range(3):
        for c in range(3):
            K2[3 * r + c] = 0.0
            for k in range(3):
                K2[3 * r + c] += K[3 * r + k] * K[3 * k + c]
    sc = _sinc(w)
    vs = _versine(w)
    for k in range(9):
        E[k] = sc * K[k] + vs * K2[k]
    E[0] += 1.0
    E[4] += 1.0
    E[8] += 1.0
    for r in range(3):
        for c in range(3):
            out[3 * r + c] = 0.0
            for k in range(3):
                out[3 * r + c] += C[3 * r + k] * E[3 * k + c]
    for k in range(9):
        C[k] = out[k]


def integrate(int group, int metric, consts, psi0, t_end, int steps, int stride):
    """Batched RK4 / Munthe-Kaas integration from the identity.

    psi0 has shape (N, 4) and t_end shape (N,). Returns (points, covectors)
    sampled every ``stride`` steps (and at the end): shapes (N, S, dim) and
    (N, S, 4).
    """
    cdef double[:, :, ::1] cs = np.ascontiguousarray(consts, dtype=float)
    cdef double[:, ::1] p0 = np.ascontiguousarray(psi0, dtype=float)
    cdef double[::1] te = np.ascontiguousarray(t_end, dtype=float)
    cdef Py_ssize_t n = p0.shape[0]
    marks_list = list(range(0, steps + 1, stride))
    if steps % stride:
        marks_list.append(steps)
    cdef long[::1] marks = np.asarray(marks_list, dtype=np.int64)
    cdef int dim = 5 if group == SU2R else 10
    pts = np.empty((n, len(marks_list), dim))
    cov = np.empty((n, len(marks_list), 4))
    cdef double[:, :, ::1] P = pts
    cdef double[:, :, ::1] V = cov
    cdef Py_ssize_t traj, slot
    cdef long step
    cdef int k
    cdef double h, v
    cdef double psi[4]
    cdef double tmp[4]
    cdef double k1[4]
    cdef double k2[4]
    cdef double k3[4]
    cdef double k4[4]
    cdef double u1[3]
    cdef double u2[3]
    cdef double u3[3]
    cdef double u4[3]
    cdef double K2[3]
    cdef double K3[3]
    cdef double K4[3]
    cdef double th[3]
    cdef double q[4]
    cdef double C[9]
    cdef double r1, r2, r3, r4
    with nogil:
        for traj in range(n):
            h = te[traj] / steps
            for k in range(4):
                psi[k] = p0[traj, k]
            q[0], q[1], q[2], q[3] = 1.0, 0.0, 0.0, 0.0
            for k in range(9):
                C[k] = 0.0
            C[0], C[4], C[8] = 1.0, 1.0, 1.0
            v = 0.0
            slot = 0
            _record(group, q, C, v, psi, &P[traj, 0, 0], &V[traj, 0, 0])
            for step in range(1, steps + 1):
                _rhs(cs, psi, k1)
                _horizontal(metric, psi, u1)
                r1 = psi[1]
                for k in range(4):
                    tmp[k] = psi[k] + 0.5 * h * k1[k]
                _rhs(cs, tmp, k2)
                _horizontal(metric, tmp, u2)
                r2 = tmp[1]
                for k in range(3):
                    th[k] = 0.5 * h * u1[k]
                _dexpinv(th, u2, K2)
                for k in range(4):
                    tmp[k] = psi[k] + 0.5 * h * k2[k]
                _rhs(cs, tmp, k3)
                _horizontal(metric, tmp, u3)
                r3 = tmp[1]
                for k in range(3):
                    th[k] = 0.5 * h * K2[k]
                _dexpinv(th, u3, K3)
                for k in range(4):
                    tmp[k] = psi[k] + h * k3[k]
                _rhs(cs, tmp, k4)
                _horizontal(metric, tmp, u4)
                r4 = tmp[1]
                for k in range(3):
                    th[k] = h * K3[k]
                _dexpinv(th, u4, K4)
                for k in range(3):
                    th[k] = h / 6.0 * (u1[k] + 2.0 * K2[k] + 2.0 * K3[k] + K4[k])
                v = v + h / 6.0 * (r1 + 2.0 * r2 + 2.0 * r3 + r4)
                for k in range(4):
                    psi[k] = psi[k] + h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k])
                _advance(group, q, C, th)
                if step == marks[slot + 1]:
                    slot += 1
                    _record(group, q, C, v, psi, &P[traj, slot, 0], &V[traj, slot, 0])
    return pts, cov
