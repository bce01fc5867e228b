"""Pure-Python (numpy) eigen kernels.

Same call signatures as the compiled ``_kernels`` extension; used when the
extension is not built or ``LARGESPIN_PURE_PYTHON=1`` is set.
"""

import math

import numpy as np


def householder_tridiag(a, want_q=True):
    """Reduce a complex Hermitian matrix to real symmetric tridiagonal form.

    Returns ``(d, e, u)`` with ``a = u @ T @ u^H`` where ``T`` has diagonal
    ``d`` and real non-negative sub-diagonal ``e[:n-1]`` (``e[n-1] = 0``).
    ``u`` is None when ``want_q`` is false.
    """
    a = np.array(a, dtype=np.complex128, copy=True)
    n = a.shape[0]
    reflectors = []
    for k in range(n - 2):
        x = a[k + 1:, k]
        xnorm = np.linalg.norm(x)
        if xnorm == 0.0:
            reflectors.append(None)
            continue
        x0 = x[0]
        ax0 = abs(x0)
        phase = x0 / ax0 if ax0 > 0.0 else 1.0
        alpha = -phase * xnorm
        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)
        sub = a[k + 1:, k + 1:]
        p = sub @ v
        kk = np.vdot(v, p).real
        wv = 2.0 * p - 2.0 * kk * v
        sub -= np.outer(v, wv.conj()) + np.outer(wv, v.conj())
        a[k + 1, k] = alpha
        a[k, k + 1] = np.conj(alpha)
        a[k + 2:, k] = 0.0
        a[k, k + 2:] = 0.0
        reflectors.append(v)

    d = a.diagonal().real.copy()
    c = np.array([a[k + 1, k] for k in range(n - 1)], dtype=np.complex128)
    e = np.zeros(n)
    ph = np.ones(n, dtype=np.complex128)
    for k in range(n - 1):
        ac = abs(c[k])
        e[k] = ac
        ph[k + 1] = ph[k] * (c[k] / ac) if ac > 0.0 else ph[k]

    if not want_q:
        return d, e, None
    q = np.eye(n, dtype=np.complex128)
    for k, v in enumerate(reflectors):
        if v is None:
            continue
        blk = q[:, k + 1:]
        blk -= 2.0 * np.outer(blk @ v, v.conj())
    q *= ph[np.newaxis, :]
    return d, e, q


def tql2(d, e, z=None, max_iter=60):
    """Implicit-shift QL on a real symmetric tridiagonal matrix, in place.

    ``d`` holds the diagonal, ``e[i]`` couples ``i`` and ``i+1``. When ``z`` is
    given its columns are rotated along (start from identity to obtain the
    tridiagonal eigenvectors). Eigenvalues are left unsorted in ``d``.
    """
    n = d.shape[0]
    if n == 0:
        return d
    e[n - 1] = 0.0
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                raise ArithmeticError("QL iteration did not converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
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
                if z is not None:
                    zi1 = z[:, i + 1].copy()
                    z[:, i + 1] = s * z[:, i] + c * zi1
                    z[:, i] = c * z[:, i] - s * zi1
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d
