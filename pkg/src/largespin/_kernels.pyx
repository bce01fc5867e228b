# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Householder tridiagonalization and implicit QL kernels.

Mirrors ``largespin._kernels_py`` call for call.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot, copysign

cnp.import_array()

ctypedef double complex cplx


cdef inline double cabs2(cplx z) nogil:
    return z.real * z.real + z.imag * z.imag


def householder_tridiag(a_in, bint want_q=True):
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] arr = np.array(a_in, dtype=np.complex128, order="C", copy=True)
    cdef cplx[:, ::1] a = arr
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t k, i, j, m
    cdef double xnorm, ax0, vnorm, kk
    cdef cplx x0, phase, alpha, acc
    cdef cnp.ndarray[cplx, ndim=2, mode="c"] vs_arr = np.zeros((max(n - 2, 0), n), dtype=np.complex128)
    cdef cplx[:, ::1] vs = vs_arr
    cdef cnp.ndarray[cplx, ndim=1] p_arr = np.zeros(n, dtype=np.complex128)
    cdef cplx[::1] p = p_arr
    cdef cnp.ndarray[cplx, ndim=1] wv_arr = np.zeros(n, dtype=np.complex128)
    cdef cplx[::1] wv = wv_arr
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] used_arr = np.zeros(max(n - 2, 0), dtype=np.uint8)
    cdef cnp.uint8_t[::1] used = used_arr

    for k in range(n - 2):
        xnorm = 0.0
        for i in range(k + 1, n):
            xnorm += cabs2(a[i, k])
        xnorm = sqrt(xnorm)
        if xnorm == 0.0:
            continue
        used[k] = 1
        x0 = a[k + 1, k]
        ax0 = sqrt(cabs2(x0))
        if ax0 > 0.0:
            phase = x0 / ax0
        else:
            phase = 1.0
        alpha = -phase * xnorm
        for i in range(k + 1, n):
            vs[k, i] = a[i, k]
        vs[k, k + 1] = vs[k, k + 1] - alpha
        vnorm = 0.0
        for i in range(k + 1, n):
            vnorm += cabs2(vs[k, i])
        vnorm = sqrt(vnorm)
        for i in range(k + 1, n):
            vs[k, i] = vs[k, i] / vnorm
        # p = S v, kk = v^H p
        kk = 0.0
        for i in range(k + 1, n):
            acc = 0.0
            for j in range(k + 1, n):
                acc = acc + a[i, j] * vs[k, j]
            p[i] = acc
            kk += (vs[k, i].conjugate() * acc).real
        for i in range(k + 1, n):
            wv[i] = 2.0 * p[i] - 2.0 * kk * vs[k, i]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i, j] = a[i, j] - vs[k, i] * wv[j].conjugate() - wv[i] * vs[k, j].conjugate()
        a[k + 1, k] = alpha
        a[k, k + 1] = alpha.conjugate()
        for i in range(k + 2, n):
            a[i, k] = 0.0
            a[k, i] = 0.0

    cdef cnp.ndarray[double, ndim=1] d_arr = np.empty(n)
    cdef cnp.ndarray[double, ndim=1] e_arr = np.zeros(n)
    cdef cnp.ndarray[cplx, ndim=1] ph_arr = np.ones(n, dtype=np.complex128)
    cdef double[::1] d = d_arr
    cdef double[::1] e = e_arr
    cdef cplx[::1] ph = ph_arr
    cdef double ac
    for i in range(n):
        d[i] = a[i, i].real
    for k in range(n - 1):
        ac = sqrt(cabs2(a[k + 1, k]))
        e[k] = ac
        if ac > 0.0:
            ph[k + 1] = ph[k] * (a[k + 1, k] / ac)
        else:
            ph[k + 1] = ph[k]

    if not want_q:
        return d_arr, e_arr, None

    cdef cnp.ndarray[cplx, ndim=2, mode="c"] q_arr = np.eye(n, dtype=np.complex128)
    cdef cplx[:, ::1] q = q_arr
    for k in range(n - 2):
        if not used[k]:
            continue
        for i in range(n):
            acc = 0.0
            for j in range(k + 1, n):
                acc = acc + q[i, j] * vs[k, j]
            acc = 2.0 * acc
            for j in range(k + 1, n):
                q[i, j] = q[i, j] - acc * vs[k, j].conjugate()
    for i in range(n):
        for j in range(n):
            q[i, j] = q[i, j] * ph[j]
    return d_arr, e_arr, q_arr


def tql2(double[::1] d, double[::1] e, z=None, int max_iter=60):
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t l, m, i, k
    cdef int it
    cdef double dd, g, r, s, c, p, f, b, zi1
    cdef bint underflow
    cdef bint have_z = z is not None
    cdef double[:, ::1] zz
    if n == 0:
        return np.asarray(d)
    if have_z:
        zz = z
    e[n - 1] = 0.0
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = fabs(d[m]) + fabs(d[m + 1])
                if fabs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                raise ArithmeticError("QL iteration did not converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if have_z:
                    for k in range(n):
                        zi1 = zz[k, i + 1]
                        zz[k, i + 1] = s * zz[k, i] + c * zi1
                        zz[k, i] = c * zz[k, i] - s * zi1
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.asarray(d)
