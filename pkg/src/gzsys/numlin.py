"""Dense complex linear algebra used throughout the package.

Characteristic polynomials, polynomial roots as multisets, tolerant rank and
nullspace, the matrix exponential and the trace form.  Every function is pure.
"""

from dataclasses import dataclass
from math import comb, factorial

import numpy as np
import scipy.linalg

from . import _backend
from .errors import ConvergenceError, NumericalError, PreconditionError

MAX_ABERTH_ITER = 500
# Coefficient errors of a characteristic polynomial are far more pessimistic
# than matrix-entry errors, so multiplicity merges use a much smaller defect
# threshold than rank decisions.  Measured window on degree <= 8: merges of
# exact multiple roots need >= 1e-7, false merges start near 1e-3.
MERGE_SCALE = 1e-5


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative tolerance pair.

    The effective threshold for an object of Frobenius norm ``norm`` and
    dimension ``n`` is ``max(abs_tol, rel_tol * norm * n)``.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-9

    def __post_init__(self):
        for v in (self.abs_tol, self.rel_tol):
            if not np.isfinite(v) or v < 0:
                raise PreconditionError("tolerances must be finite and non-negative")

    def threshold(self, norm, n):
        return max(self.abs_tol, self.rel_tol * float(norm) * n)

    def for_matrix(self, m):
        m = np.asarray(m)
        return self.threshold(np.linalg.norm(m), max(m.shape) if m.size else 1)


DEFAULT_TOL = Tolerance()


def as_matrix(m):
    """Validate and return ``m`` as a square finite complex128 array."""
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise PreconditionError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise PreconditionError("matrix has non-finite entries")
    return a


class Polynomial:
    """Polynomial with complex coefficients in ascending order."""

    def __init__(self, coeffs):
        c = np.atleast_1d(np.array(coeffs, dtype=complex))
        # trim exact zero leading coefficients, keeping at least one entry
        k = len(c)
        while k > 1 and c[k - 1] == 0:
            k -= 1
        self.coeffs = c[:k].copy()
        self.coeffs.setflags(write=False)

    @property
    def degree(self):
        if len(self.coeffs) == 1 and self.coeffs[0] == 0:
            return -1
        return len(self.coeffs) - 1

    @property
    def is_monic(self):
        return self.coeffs[-1] == 1

    @classmethod
    def from_roots(cls, roots):
        c = np.array([1.0 + 0j])
        for r in roots:
            nxt = np.zeros(len(c) + 1, dtype=complex)
            nxt[1:] += c
            nxt[:-1] -= r * c
            c = nxt
        return cls(c)

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def __eq__(self, other):
        return isinstance(other, Polynomial) and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self):
        return f"Polynomial({self.coeffs.tolist()})"


def charpoly(m):
    """Monic characteristic polynomial ``det(tI - m)``.

    The matrix is first reduced to Hessenberg form by a unitary similarity,
    then the leading-block recursion gives the coefficients.
    """
    a = as_matrix(m)
    n = a.shape[0]
    if n == 0:
        return Polynomial([1.0])
    h = scipy.linalg.hessenberg(a) if n > 2 else a
    polys = _backend.hessenberg_charpolys(h)
    return Polynomial(polys[n])


def leading_charpolys(m):
    """Characteristic polynomials of all leading blocks, as an ``(n+1, n+1)`` array."""
    a = as_matrix(m)
    n = a.shape[0]
    out = np.zeros((n + 1, n + 1), dtype=complex)
    out[0, 0] = 1
    for i in range(1, n + 1):
        out[i, : i + 1] = charpoly(a[:i, :i]).coeffs
    return out


def balance(x):
    """Diagonally similar copy of ``x`` with rows and columns of comparable norm.

    Spectra of all leading blocks are unchanged by diagonal similarity.
    """
    x = as_matrix(x)
    if not np.isfinite(np.linalg.norm(x)):
        raise NumericalError("matrix norm overflows double precision")
    if x.shape[0] > 1 and np.any(x):
        x = scipy.linalg.matrix_balance(x, permute=False)[0]
    return x


def _initial_guesses(c):
    n = len(c) - 1
    # Fujiwara bound on root moduli of a monic polynomial
    radius = 2.0 * max(abs(c[k]) ** (1.0 / (n - k)) for k in range(n))
    radius = max(radius, 1e-300)
    centre = -c[n - 1] / n
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    return centre + 0.5 * radius * np.exp(1j * angles)


def _merge_defect(c, centre, m):
    """Smallest max-norm change of the non-leading coefficients giving ``centre`` multiplicity ``m``."""
    n = len(c) - 1
    taylor = np.empty(m, dtype=complex)
    mat = np.zeros((m, n), dtype=complex)
    powers = centre ** np.arange(n + 1)
    for k in range(m):
        taylor[k] = sum(comb(l, k) * c[l] * powers[l - k] for l in range(k, n + 1))
        for l in range(k, n):
            mat[k, l] = comb(l, k) * powers[l - k]
    delta = np.linalg.lstsq(mat, -taylor, rcond=None)[0]
    return float(np.max(np.abs(delta)))


def _refine_centre(c, members):
    """Locate an m-fold root near the cluster mean via Newton on the (m-1)th derivative."""
    m = len(members)
    z = complex(np.mean(members))
    if m == 1:
        return z
    spread = max(abs(v - z) for v in members)
    q = np.polynomial.polynomial.polyder(c, m - 1)
    dq = np.polynomial.polynomial.polyder(q)
    w = z
    for _ in range(30):
        d = np.polynomial.polynomial.polyval(w, dq)
        if d == 0:
            break
        step = np.polynomial.polynomial.polyval(w, q) / d
        w = w - step
        if abs(step) <= 4 * np.finfo(float).eps * (abs(w) + 1e-300):
            break
    if not np.isfinite(w) or abs(w - z) > 2 * spread + cluster_radius([z]):
        return z
    return complex(w)


def _cluster(c, roots, tol):
    """Group approximate roots into multiplicities.

    Largest multiplicity first: for each seed root take its ``m`` nearest
    roots and accept them as one ``m``-fold root if the refined centre is a
    root of multiplicity ``m`` of a polynomial within tolerance of ``c``.
    Leftover values are then joined by single linkage within the cluster radius.
    """
    eps = MERGE_SCALE * tol.threshold(np.max(np.abs(c)), len(c) - 1)
    pool = [complex(v) for v in sort_multiset(roots)]
    everything = list(pool)
    groups = []
    while len(pool) > 1:
        found = None
        for m in range(len(pool), 1, -1):
            for seed in pool:
                near = sorted(range(len(pool)), key=lambda k: (abs(pool[k] - seed), k))[:m]
                members = [pool[k] for k in near]
                centre = _refine_centre(c, members)
                far = max(abs(v - centre) for v in members)
                # no other computed root may be nearer the centre than a member
                inside = sum(1 for v in everything if abs(v - centre) <= far)
                if inside > m:
                    continue
                if _merge_defect(c, centre, m) <= eps:
                    found = (near, centre)
                    break
            if found:
                break
        if not found:
            break
        near, centre = found
        groups.append([centre, len(near)])
        pool = [v for k, v in enumerate(pool) if k not in near]
    groups.extend([v, 1] for v in pool)

    radius = cluster_radius([g[0] for g in groups])
    merged = True
    while merged:
        merged = False
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                if abs(groups[a][0] - groups[b][0]) <= radius:
                    wa, wb = groups[a][1], groups[b][1]
                    groups[a] = [(wa * groups[a][0] + wb * groups[b][0]) / (wa + wb), wa + wb]
                    del groups[b]
                    merged = True
                    break
            if merged:
                break
    out = []
    for v, m in groups:
        out.extend([v] * m)
    return sort_multiset(out)


def cluster_radius(values):
    values = np.asarray(values)
    top = float(np.max(np.abs(values))) if values.size else 0.0
    return 1e-6 * (1.0 + top)


def sort_multiset(values):
    """Sort complex values lexicographically by (re, im); returns an array."""
    vals = np.asarray(values, dtype=complex)
    order = np.lexsort((vals.imag, vals.real))
    return vals[order]


def polyroots(p, tol=DEFAULT_TOL, cluster=True):
    """All roots of ``p`` with multiplicity, sorted by (re, im).

    Uses Aberth-Ehrlich iteration; raises ``ConvergenceError`` if it stalls.
    """
    if not isinstance(p, Polynomial):
        p = Polynomial(p)
    deg = p.degree
    if deg < 0:
        raise PreconditionError("the zero polynomial has no finite root multiset")
    if deg == 0:
        return np.zeros(0, dtype=complex)
    c = p.coeffs / p.coeffs[-1]
    zeros = 0
    while zeros < deg and c[zeros] == 0:
        zeros += 1
    c = c[zeros:]
    roots = np.zeros(zeros, dtype=complex)
    if len(c) > 1:
        if len(c) == 2:
            found = np.array([-c[0]])
        else:
            found, _, ok = _backend.aberth(c, _initial_guesses(c), MAX_ABERTH_ITER)
            if not ok:
                raise ConvergenceError(f"root iteration did not converge in {MAX_ABERTH_ITER} steps")
        roots = np.concatenate([roots, found])
    if cluster and len(roots) > 1:
        full = p.coeffs / p.coeffs[-1]
        return _cluster(full, roots, tol)
    return sort_multiset(roots)


def multiset_match_count(a, b, radius=None):
    """Size of a greedy nearest matching between two multisets.

    Elements of ``a`` are visited in (re, im) order; each takes the nearest
    unmatched element of ``b`` within ``radius`` (ties go to the earlier one).
    """
    a = sort_multiset(a)
    b = sort_multiset(b)
    if radius is None:
        radius = cluster_radius(np.concatenate([a, b]))
    used = np.zeros(len(b), dtype=bool)
    count = 0
    for v in a:
        best = -1
        best_d = radius
        for k, w in enumerate(b):
            if used[k]:
                continue
            d = abs(v - w)
            if d <= best_d and (best < 0 or d < best_d):
                best, best_d = k, d
        if best >= 0:
            used[best] = True
            count += 1
    return count


def multisets_equal(a, b, radius=None):
    return len(a) == len(b) and multiset_match_count(a, b, radius) == len(a)


def distinct_values(a, radius=None):
    """Representatives of the distinct values of a multiset under the cluster radius."""
    a = sort_multiset(a)
    if radius is None:
        radius = cluster_radius(a)
    reps = []
    for v in a:
        if all(abs(v - r) > radius for r in reps):
            reps.append(v)
    return np.array(reps, dtype=complex)


def singular_values(rows):
    m = np.atleast_2d(np.asarray(rows, dtype=complex))
    if m.size == 0:
        return np.zeros(0)
    return np.linalg.svd(m, compute_uv=False)


def rank_tol(rows, tol=DEFAULT_TOL):
    """Numerical rank of a list of vectors by singular-value thresholding."""
    m = np.atleast_2d(np.asarray(rows, dtype=complex))
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol.for_matrix(m)))


def nullspace(m, tol=DEFAULT_TOL):
    """Orthonormal basis of the numerical kernel; rows are the basis vectors."""
    a = np.atleast_2d(np.asarray(m, dtype=complex))
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols, dtype=complex)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    rank = int(np.sum(s > tol.for_matrix(a)))
    return vh[rank:].conj()


def _taylor_expm(a, terms=18):
    n = a.shape[0]
    out = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, terms + 1):
        term = term @ a / k
        out = out + term
    return out


def expm(m, tol=DEFAULT_TOL):
    """Matrix exponential.

    Nilpotent input (``||(m/||m||)^n|| <= tol``) uses the terminating series.
    Otherwise: scaling and squaring around a degree-18 Taylor core.
    """
    a = as_matrix(m)
    n = a.shape[0]
    norm = np.linalg.norm(a)
    if norm == 0:
        return np.eye(n, dtype=complex)
    unit = a / norm
    if np.linalg.norm(np.linalg.matrix_power(unit, n)) <= tol.threshold(1.0, n):
        out = np.eye(n, dtype=complex)
        term = np.eye(n, dtype=complex)
        for k in range(1, n):
            term = term @ a
            out = out + term / factorial(k)
        return out
    one_norm = np.linalg.norm(a, 1)
    if one_norm > 700 * n:
        raise NumericalError(f"matrix exponential overflows (1-norm {one_norm:.3g})")
    s = max(0, int(np.ceil(np.log2(one_norm / 0.5)))) if one_norm > 0.5 else 0
    with np.errstate(over="ignore", invalid="ignore"):
        out = _taylor_expm(a / 2.0**s)
        for _ in range(s):
            out = out @ out
    if not np.all(np.isfinite(out)):
        raise NumericalError("matrix exponential overflowed")
    return out


def _check_same(a, b):
    if a.shape != b.shape:
        raise PreconditionError(f"dimension mismatch: {a.shape} vs {b.shape}")


def commutator(a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    _check_same(a, b)
    return a @ b - b @ a


def trace_form(a, b):
    """The trace form ``tr(ab)``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    _check_same(a, b)
    return complex(np.sum(a * b.T))
