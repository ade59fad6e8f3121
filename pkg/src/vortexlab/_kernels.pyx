# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same signatures and semantics as ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport floor, cos, sin, log, fabs

BACKEND = "cython"


cdef inline void _quintic(double t, double* w, double* dw) noexcept nogil:
    # w[3 * a + p]: weight of the p-th derivative at end a
    cdef double t2 = t * t
    cdef double t3 = t2 * t, t4 = t2 * t2, t5 = t2 * t2 * t
    w[0] = 1 - 10 * t3 + 15 * t4 - 6 * t5
    w[1] = t - 6 * t3 + 8 * t4 - 3 * t5
    w[2] = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5)
    w[3] = 10 * t3 - 15 * t4 + 6 * t5
    w[4] = -4 * t3 + 7 * t4 - 3 * t5
    w[5] = 0.5 * (t3 - 2 * t4 + t5)
    dw[0] = -30 * t2 + 60 * t3 - 30 * t4
    dw[1] = 1 - 18 * t2 + 32 * t3 - 15 * t4
    dw[2] = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4)
    dw[3] = 30 * t2 - 60 * t3 + 30 * t4
    dw[4] = -12 * t2 + 28 * t3 - 15 * t4
    dw[5] = 0.5 * (3 * t2 - 8 * t3 + 5 * t4)


def hermite5(D, double x0, double y0, double h, x, y):
    cdef const double complex[:, :, :, ::1] V = np.ascontiguousarray(D, dtype=np.complex128)
    cdef const double[::1] X = np.ascontiguousarray(np.ravel(x), dtype=np.float64)
    cdef const double[::1] Y = np.ascontiguousarray(np.ravel(y), dtype=np.float64)
    cdef Py_ssize_t n = X.shape[0], p, q, k, a, b, i0, j0, ii, jj
    out = np.empty(n, dtype=np.complex128)
    outx = np.empty(n, dtype=np.complex128)
    outy = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] O = out, OX = outx, OY = outy
    cdef double wx[6]
    cdef double dwx[6]
    cdef double wy[6]
    cdef double dwy[6]
    cdef double sx, sy
    cdef double complex f, acc, accx, accy
    with nogil:
        for p in range(n):
            sx = (X[p] - x0) / h
            sy = (Y[p] - y0) / h
            i0 = <Py_ssize_t> floor(sx)
            j0 = <Py_ssize_t> floor(sy)
            _quintic(sx - i0, wx, dwx)
            _quintic(sy - j0, wy, dwy)
            acc = 0
            accx = 0
            accy = 0
            for b in range(2):
                jj = j0 + b
                for a in range(2):
                    ii = i0 + a
                    for q in range(3):
                        for k in range(3):
                            f = V[k, q, jj, ii]
                            acc = acc + wx[3 * a + k] * wy[3 * b + q] * f
                            accx = accx + dwx[3 * a + k] * wy[3 * b + q] * f
                            accy = accy + wx[3 * a + k] * dwy[3 * b + q] * f
            O[p] = acc
            OX[p] = accx / h
            OY[p] = accy / h
    return out, outx, outy


cdef inline double _rate(double psi, const double[:, :, ::1] M, Py_ssize_t k) noexcept nogil:
    cdef double c = cos(psi), s = sin(psi)
    return M[k, 1, 0] * c * c + (M[k, 1, 1] - M[k, 0, 0]) * s * c - M[k, 0, 1] * s * s


def riccati_angle(mats, double dt, double psi0, int direction):
    cdef const double[:, :, ::1] M = np.ascontiguousarray(mats, dtype=np.float64)
    cdef Py_ssize_t K = (M.shape[0] - 1) // 2, k
    out = np.empty(K + 1)
    cdef double[::1] O = out
    cdef double psi = psi0, k1, k2, k3, k4
    with nogil:
        if direction > 0:
            O[0] = psi
            for k in range(K):
                k1 = _rate(psi, M, 2 * k)
                k2 = _rate(psi + 0.5 * dt * k1, M, 2 * k + 1)
                k3 = _rate(psi + 0.5 * dt * k2, M, 2 * k + 1)
                k4 = _rate(psi + dt * k3, M, 2 * k + 2)
                psi = psi + dt * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
                O[k + 1] = psi
        else:
            O[K] = psi
            for k in range(K, 0, -1):
                k1 = _rate(psi, M, 2 * k)
                k2 = _rate(psi - 0.5 * dt * k1, M, 2 * k - 1)
                k3 = _rate(psi - 0.5 * dt * k2, M, 2 * k - 1)
                k4 = _rate(psi - dt * k3, M, 2 * k - 2)
                psi = psi - dt * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
                O[k - 1] = psi
    return out


cdef inline void _mul(const double[:, :, ::1] M, Py_ssize_t k, double* P, double* out) noexcept nogil:
    out[0] = M[k, 0, 0] * P[0] + M[k, 0, 1] * P[2]
    out[1] = M[k, 0, 0] * P[1] + M[k, 0, 1] * P[3]
    out[2] = M[k, 1, 0] * P[0] + M[k, 1, 1] * P[2]
    out[3] = M[k, 1, 0] * P[1] + M[k, 1, 1] * P[3]


def cocycle_rk4(mats, double dt, int renorm_every):
    cdef const double[:, :, ::1] M = np.ascontiguousarray(mats, dtype=np.float64)
    cdef Py_ssize_t K = (M.shape[0] - 1) // 2, k, q
    out = np.empty((K + 1, 2, 2))
    logs = np.empty(K + 1)
    cdef double[:, :, ::1] O = out
    cdef double[::1] L = logs
    cdef double P[4]
    cdef double T[4]
    cdef double k1[4]
    cdef double k2[4]
    cdef double k3[4]
    cdef double k4[4]
    cdef double ls = 0.0, nrm
    P[0] = 1.0; P[1] = 0.0; P[2] = 0.0; P[3] = 1.0
    with nogil:
        O[0, 0, 0] = 1.0; O[0, 0, 1] = 0.0; O[0, 1, 0] = 0.0; O[0, 1, 1] = 1.0
        L[0] = 0.0
        for k in range(K):
            _mul(M, 2 * k, P, k1)
            for q in range(4):
                T[q] = P[q] + 0.5 * dt * k1[q]
            _mul(M, 2 * k + 1, T, k2)
            for q in range(4):
                T[q] = P[q] + 0.5 * dt * k2[q]
            _mul(M, 2 * k + 1, T, k3)
            for q in range(4):
                T[q] = P[q] + dt * k3[q]
            _mul(M, 2 * k + 2, T, k4)
            nrm = 0.0
            for q in range(4):
                P[q] = P[q] + dt * (k1[q] + 2 * k2[q] + 2 * k3[q] + k4[q]) / 6.0
                if fabs(P[q]) > nrm:
                    nrm = fabs(P[q])
            if (renorm_every > 0 and (k + 1) % renorm_every == 0) or nrm > 1e100:
                for q in range(4):
                    P[q] = P[q] / nrm
                ls = ls + log(nrm)
            O[k + 1, 0, 0] = P[0]; O[k + 1, 0, 1] = P[1]
            O[k + 1, 1, 0] = P[2]; O[k + 1, 1, 1] = P[3]
            L[k + 1] = ls
    return out, logs
