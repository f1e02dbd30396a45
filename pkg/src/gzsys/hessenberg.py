"""The unit-subdiagonal Hessenberg section of the Kostant-Wallach map.

Every point of C^{n(n+1)/2} is hit by exactly one matrix with ones on the
subdiagonal and zeros below it.  With ``p_0 = 1`` and ``p_i`` the level-``i``
target, column ``i`` satisfies

    t p_{i-1}(t) - p_i(t) = sum_{k=1}^{i} a_{k,i} p_{k-1}(t)

so its entries are read off by peeling leading terms against the monic
polynomials ``p_{i-1}, ..., p_0``.
"""

import numpy as np

from . import _backend
from .errors import PreconditionError
from .gzmap import Coords, KWPoint, RitzData, kw_map
from .numlin import DEFAULT_TOL, Polynomial, as_matrix


def hessenberg_from_coeffs(kw):
    if not isinstance(kw, KWPoint):
        raise PreconditionError("expected a KWPoint")
    if kw.n < 1:
        raise PreconditionError("need at least one level")
    return _backend.hessenberg_from_charpolys(kw.polynomials())


def hessenberg_from_ritz(r):
    if not isinstance(r, RitzData):
        r = RitzData(tuple(r))
    levels = tuple(Polynomial.from_roots(s).coeffs[:i] for i, s in enumerate(r.sigma, start=1))
    return hessenberg_from_coeffs(KWPoint(levels, Coords.CHAR_COEFFS))


def is_hessenberg_unit(m, tol=DEFAULT_TOL):
    """Ones on the subdiagonal and zeros below it, within tolerance."""
    a = as_matrix(m)
    n = a.shape[0]
    thr = tol.for_matrix(a)
    for r in range(n):
        for c in range(r - 1):
            if abs(a[r, c]) > thr:
                return False
        if r >= 1 and abs(a[r, r - 1] - 1) > thr:
            return False
    return True


def free_positions(n):
    """Positions ``(r, c)`` with ``r <= c`` (0-based) that carry the section's coordinates."""
    return [(r, c) for c in range(n) for r in range(c + 1)]


def section_condition(kw, h=1e-6):
    """Condition number of the Jacobian of the map restricted to the section.

    The map is polynomial in the free entries, so central differences with a
    small complex step are adequate for a diagnostic.
    """
    x = hessenberg_from_coeffs(kw)
    n = x.shape[0]
    cols = []
    for r, c in free_positions(n):
        e = np.zeros((n, n), dtype=complex)
        e[r, c] = h
        cols.append((kw_map(x + e).flat() - kw_map(x - e).flat()) / (2 * h))
    s = np.linalg.svd(np.array(cols).T, compute_uv=False)
    return float(s[0] / s[-1]) if s[-1] > 0 else float("inf")
