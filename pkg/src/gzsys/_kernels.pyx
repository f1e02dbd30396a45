# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``gzsys._kernels_py``; identical signatures and results."""

import numpy as np
cimport numpy as cnp

cdef extern from "complex.h" nogil:
    double cabs(double complex)

cdef double EPS = 2.220446049250313e-16


cdef inline void _horner(const double complex[:] c, double complex z,
                         double complex* p, double complex* dp, double* s) noexcept nogil:
    cdef Py_ssize_t k, m = c.shape[0]
    cdef double az = cabs(z)
    p[0] = c[m - 1]
    dp[0] = 0
    s[0] = cabs(p[0])
    for k in range(m - 2, -1, -1):
        dp[0] = dp[0] * z + p[0]
        p[0] = p[0] * z + c[k]
        s[0] = s[0] * az + cabs(c[k])


def horner(coeffs, double complex z):
    cdef const double complex[:] c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef double complex p, dp
    cdef double s
    _horner(c, z, &p, &dp, &s)
    return complex(p), complex(dp), float(s)


def aberth(coeffs, z0, int maxiter):
    cdef const double complex[:] c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zarr = np.array(z0, dtype=np.complex128)
    cdef double complex[:] z = zarr
    cdef Py_ssize_t deg = c.shape[0] - 1
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] donearr = np.zeros(deg, dtype=np.uint8)
    cdef unsigned char[:] done = donearr
    cdef double slack = 4.0 * (2 * deg + 1) * EPS
    cdef int it = 0
    cdef bint moved
    cdef Py_ssize_t k, j
    cdef double complex zk, p, dp, acc, d, denom, w
    cdef double s
    while it < maxiter:
        it += 1
        moved = False
        for k in range(deg):
            if done[k]:
                continue
            zk = z[k]
            _horner(c, zk, &p, &dp, &s)
            if cabs(p) <= slack * s:
                done[k] = 1
                continue
            acc = 0
            for j in range(deg):
                if j != k:
                    d = zk - z[j]
                    if d != 0:
                        acc = acc + 1.0 / d
            denom = dp / p - acc
            if denom == 0:
                w = (cabs(zk) + 1.0) * 1e-8 * (1 + 1j)
            else:
                w = 1.0 / denom
            z[k] = zk - w
            if cabs(w) <= 4.0 * EPS * (cabs(zk) + EPS):
                done[k] = 1
            moved = True
        if not moved:
            break
    return zarr, it, bool(np.all(donearr))


def hessenberg_charpolys(h):
    cdef const double complex[:, :] a = np.ascontiguousarray(h, dtype=np.complex128)
    cdef Py_ssize_t n = a.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.zeros((n + 1, n + 1), dtype=np.complex128)
    cdef double complex[:, :] polys = out
    cdef Py_ssize_t i, d, k
    cdef double complex hii, prod, coef
    polys[0, 0] = 1
    for i in range(1, n + 1):
        hii = a[i - 1, i - 1]
        for d in range(i, 0, -1):
            polys[i, d] = polys[i - 1, d - 1] - hii * polys[i - 1, d]
        polys[i, 0] = -hii * polys[i - 1, 0]
        prod = 1
        for k in range(i - 1, 0, -1):
            prod = prod * a[k, k - 1]
            coef = a[k - 1, i - 1] * prod
            if coef != 0:
                for d in range(k):
                    polys[i, d] = polys[i, d] - coef * polys[k - 1, d]
    return out


def hessenberg_from_charpolys(polys):
    cdef const double complex[:, :] p = np.ascontiguousarray(polys, dtype=np.complex128)
    cdef Py_ssize_t n = p.shape[0] - 1
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.zeros((n, n), dtype=np.complex128)
    cdef double complex[:, :] a = out
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] rarr = np.zeros(n + 1, dtype=np.complex128)
    cdef double complex[:] r = rarr
    cdef Py_ssize_t i, d, k
    cdef double complex coef
    for i in range(1, n + 1):
        for d in range(i + 1):
            r[d] = 0
        for d in range(i):
            r[d + 1] = r[d + 1] + p[i - 1, d]
        for d in range(i + 1):
            r[d] = r[d] - p[i, d]
        for k in range(i, 0, -1):
            coef = r[k - 1]
            a[k - 1, i - 1] = coef
            if coef != 0:
                for d in range(k):
                    r[d] = r[d] - coef * p[k - 1, d]
        if i < n:
            a[i, i - 1] = 1
    return out
