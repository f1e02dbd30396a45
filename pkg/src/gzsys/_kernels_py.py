"""Pure-Python reference implementation of the inner loops.

The compiled module ``gzsys._kernels`` exposes the same four functions with
the same signatures; ``gzsys._backend`` picks one at import time.  All
polynomial coefficient arrays are ascending (``c[k]`` multiplies ``t**k``).
"""

import numpy as np

EPS = 2.220446049250313e-16


def horner(coeffs, z):
    """Return ``(p(z), p'(z), sum_k |c_k| |z|**k)`` for ascending coefficients."""
    c = coeffs
    p = complex(c[-1])
    dp = 0j
    az = abs(z)
    s = abs(p)
    for k in range(len(c) - 2, -1, -1):
        dp = dp * z + p
        p = p * z + c[k]
        s = s * az + abs(c[k])
    return p, dp, s


def aberth(coeffs, z0, maxiter):
    """Aberth-Ehrlich simultaneous iteration on a monic polynomial.

    Returns ``(roots, iterations, converged)``.  A root stops moving once its
    residual is below the Horner rounding bound or its correction is at
    rounding level.
    """
    c = [complex(v) for v in coeffs]
    deg = len(c) - 1
    z = [complex(v) for v in z0]
    done = [False] * deg
    slack = 4.0 * (2 * deg + 1) * EPS
    it = 0
    while it < maxiter:
        it += 1
        moved = False
        for k in range(deg):
            if done[k]:
                continue
            zk = z[k]
            p, dp, s = horner(c, zk)
            if abs(p) <= slack * s:
                done[k] = True
                continue
            acc = 0j
            for j in range(deg):
                if j != k:
                    d = zk - z[j]
                    if d != 0:
                        acc += 1.0 / d
            denom = dp / p - acc
            if denom == 0:
                # Degenerate configuration: nudge off the singular point.
                w = (abs(zk) + 1.0) * 1e-8 * (1 + 1j)
            else:
                w = 1.0 / denom
            z[k] = zk - w
            if abs(w) <= 4.0 * EPS * (abs(zk) + EPS):
                done[k] = True
            moved = True
        if not moved:
            break
    return np.array(z, dtype=complex), it, all(done)


def hessenberg_charpolys(h):
    """Characteristic polynomials of all leading blocks of an upper Hessenberg matrix.

    Row ``i`` of the returned ``(n+1, n+1)`` array holds ``det(t I - h_i)``.
    """
    n = h.shape[0]
    a = [[complex(h[r, c]) for c in range(n)] for r in range(n)]
    polys = [[0j] * (n + 1) for _ in range(n + 1)]
    polys[0][0] = 1 + 0j
    for i in range(1, n + 1):
        prev = polys[i - 1]
        cur = polys[i]
        hii = a[i - 1][i - 1]
        # (t - h_ii) p_{i-1}
        for d in range(i, 0, -1):
            cur[d] = prev[d - 1] - hii * prev[d]
        cur[0] = -hii * prev[0]
        prod = 1 + 0j
        for k in range(i - 1, 0, -1):
            prod *= a[k][k - 1]
            coef = a[k - 1][i - 1] * prod
            if coef != 0:
                pk = polys[k - 1]
                for d in range(k):
                    cur[d] -= coef * pk[d]
    return np.array(polys, dtype=complex)


def hessenberg_from_charpolys(polys):
    """Unit-subdiagonal Hessenberg matrix whose leading blocks have the given charpolys.

    ``polys`` is ``(n+1, n+1)``; row ``i`` is the monic degree-``i`` target.
    Column ``i`` solves ``t p_{i-1} - p_i = sum_k a_{k,i} p_{k-1}`` by peeling
    leading terms against the monic basis ``p_{i-1}, ..., p_0``.
    """
    n = polys.shape[0] - 1
    p = [[complex(v) for v in row] for row in polys]
    a = [[0j] * n for _ in range(n)]
    for i in range(1, n + 1):
        r = [0j] * (i + 1)
        for d in range(i):
            r[d + 1] += p[i - 1][d]
        for d in range(i + 1):
            r[d] -= p[i][d]
        for k in range(i, 0, -1):
            coef = r[k - 1]
            a[k - 1][i - 1] = coef
            if coef != 0:
                pk = p[k - 1]
                for d in range(k):
                    r[d] -= coef * pk[d]
        if i < n:
            a[i][i - 1] = 1 + 0j
    return np.array(a, dtype=complex).reshape(n, n)
