"""Strong regularity, checked three independent ways.

1. the n(n+1)/2 gradients of the GZ functions are linearly independent;
2. the Hamiltonian fields of the levels below the top span n(n-1)/2 dimensions;
3. each cutoff ``x_i`` is regular and no nonzero ``Z`` in gl(i) commutes with
   both ``x_i`` and (zero-padded) with ``x_{i+1}``.

The GZ functions are invariant under diagonal similarity and homogeneous
under scaling, so all three tests run on a diagonally balanced copy of ``x``
scaled to unit Frobenius norm.  Rank tests additionally equilibrate rows:
each row is scaled to unit length unless it is at rounding level relative to
its a-priori size, in which case it is set to zero.
Also: membership in the sets where adjacent level spectra are disjoint
(with or without simple spectra), and shared-eigenvalue counts.
"""

from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConsistencyError
from .gzmap import gradient, gz_indices, ham_field, ritz_values
from .numlin import (
    DEFAULT_TOL,
    as_matrix,
    balance,
    distinct_values,
    multiset_match_count,
    nullspace,
    rank_tol,
    singular_values,
)


def balanced_unit(x):
    """Diagonally balanced copy of ``x`` with unit Frobenius norm."""
    x = balance(x)
    s = np.linalg.norm(x)
    return x / s if s > 0 else x


def _equilibrate(rows, scales, tol):
    width = rows.shape[1] if rows.ndim == 2 else 1
    sizes = np.linalg.norm(rows, axis=-1) if rows.size else np.zeros(len(rows))
    keep = sizes > np.array([tol.threshold(sc, width) for sc in scales])
    out = np.zeros_like(rows)
    out[keep] = rows[keep] / sizes[keep, None]
    return out


def commutant_operator(m):
    """Matrix of ``Z -> ZM - MZ`` acting on row-major ``vec(Z)``."""
    n = m.shape[0]
    eye = np.eye(n)
    return np.kron(eye, m.T) - np.kron(m, eye)


def centralizer(m, tol=DEFAULT_TOL):
    """Basis (a list of matrices) of ``{Z : ZM = MZ}``."""
    m = as_matrix(m)
    n = m.shape[0]
    return [v.reshape(n, n) for v in nullspace(commutant_operator(m), tol)]


def _equilibrated_commutant(m, tol):
    op = commutant_operator(m)
    return _equilibrate(op, [np.linalg.norm(m)] * len(op), tol)


def centralizer_dim(m, tol=DEFAULT_TOL):
    m = as_matrix(m)
    return m.shape[0] ** 2 - rank_tol(_equilibrated_commutant(m, tol), tol)


def is_regular(m, tol=DEFAULT_TOL):
    m = as_matrix(m)
    return centralizer_dim(m, tol) == m.shape[0]


def _padding_selector(i):
    # vec(Z (+) 0) = P vec(Z) for Z in gl(i) placed in gl(i+1)
    p = np.zeros(((i + 1) ** 2, i * i))
    for r in range(i):
        for c in range(i):
            p[r * (i + 1) + c, r * i + c] = 1
    return p


def joint_centralizer_operator(x, i):
    """Stacked equations ``[Z, x_i] = 0`` and ``[Z (+) 0, x_{i+1}] = 0`` on gl(i)."""
    lower = commutant_operator(x[:i, :i])
    upper = commutant_operator(x[: i + 1, : i + 1]) @ _padding_selector(i)
    return np.vstack([lower, upper])


def _gradient_scale(x, i, j):
    # submultiplicative bound on ||j x_i^{j-1}||_F
    return j * max(1.0, np.linalg.norm(x[:i, :i]) ** (j - 1))


def gradient_rows(x, tol=DEFAULT_TOL):
    idx = gz_indices(x.shape[0])
    rows = np.array([gradient(x, i, j).reshape(-1) for i, j in idx])
    return _equilibrate(rows, [_gradient_scale(x, i, j) for i, j in idx], tol)


def field_rows(x, tol=DEFAULT_TOL):
    n = x.shape[0]
    if n < 2:
        return np.zeros((0, n * n), dtype=complex)
    idx = gz_indices(n, n - 1)
    rows = np.array([ham_field(x, i, j).reshape(-1) for i, j in idx])
    norm = np.linalg.norm(x)
    return _equilibrate(rows, [2 * norm * _gradient_scale(x, i, j) for i, j in idx], tol)


def is_sreg_differentials(x, tol=DEFAULT_TOL):
    y = balanced_unit(x)
    n = y.shape[0]
    r = rank_tol(gradient_rows(y, tol), tol)
    return r == n * (n + 1) // 2, r


def is_sreg_tangent(x, tol=DEFAULT_TOL):
    y = balanced_unit(x)
    n = y.shape[0]
    r = rank_tol(field_rows(y, tol), tol) if n > 1 else 0
    return r == n * (n - 1) // 2, r


def _centralizer_data(y, tol, margins=None):
    n = y.shape[0]
    regular = []
    for i in range(1, n + 1):
        op = _equilibrated_commutant(y[:i, :i], tol)
        rank, margin = _rank_margin(op, tol, i * i - i)
        regular.append(op.shape[1] - rank == i)
        if margins is not None:
            margins.append(margin)
    dims = []
    for i in range(1, n):
        op = joint_centralizer_operator(y, i)
        op = _equilibrate(op, [np.linalg.norm(y[: i + 1, : i + 1])] * len(op), tol)
        rank, margin = _rank_margin(op, tol, i * i)
        dims.append(op.shape[1] - rank)
        if margins is not None:
            margins.append(margin)
    return regular, dims


def is_sreg_centralizers(x, tol=DEFAULT_TOL):
    """Returns ``(verdict, joint centralizer dimensions for i = 1..n-1)``."""
    regular, dims = _centralizer_data(balanced_unit(x), tol)
    return all(regular) and not any(dims), dims


def _rank_margin(rows, tol, target):
    """Numerical rank, and the ratio of the ``target``-th singular value to
    the rank threshold (above 1 means the first ``target`` directions count
    as independent)."""
    s = singular_values(rows)
    thr = tol.for_matrix(np.atleast_2d(rows))
    rank = int(np.sum(s > thr))
    if target == 0:
        return rank, float("inf")
    if len(s) < target:
        return rank, 0.0
    return rank, float(s[target - 1] / thr)


@dataclass
class SregReport:
    n: int
    is_sreg: bool
    consistent: bool
    differentials_verdict: bool
    tangent_verdict: bool
    centralizer_verdict: bool
    per_level_regular: list
    diff_rank: int
    tangent_rank: int
    centralizer_intersection_dims: list
    diff_margin: float
    tangent_margin: float
    centralizer_margin: float

    def as_dict(self):
        return asdict(self)


def sreg_report(x, tol=DEFAULT_TOL):
    """Run all three tests.

    ``is_sreg`` follows the differential test (the definition); if the
    three verdicts differ, ``consistent`` is false and callers should alarm.
    """
    y = balanced_unit(x)
    n = y.shape[0]
    d_rank, d_margin = _rank_margin(gradient_rows(y, tol), tol, n * (n + 1) // 2)
    if n > 1:
        t_rank, t_margin = _rank_margin(field_rows(y, tol), tol, n * (n - 1) // 2)
    else:
        t_rank, t_margin = 0, float("inf")
    margins = []
    regular, dims = _centralizer_data(y, tol, margins)
    d_ok = d_rank == n * (n + 1) // 2
    t_ok = t_rank == n * (n - 1) // 2
    c_ok = all(regular) and not any(dims)
    return SregReport(
        n=n,
        is_sreg=d_ok,
        consistent=d_ok == t_ok == c_ok,
        differentials_verdict=d_ok,
        tangent_verdict=t_ok,
        centralizer_verdict=c_ok,
        per_level_regular=regular,
        diff_rank=d_rank,
        tangent_rank=t_rank,
        centralizer_intersection_dims=dims,
        diff_margin=d_margin,
        tangent_margin=t_margin,
        centralizer_margin=min(margins, default=float("inf")),
    )


def is_sreg(x, tol=DEFAULT_TOL):
    return is_sreg_differentials(x, tol)[0]


def _adjacent_shared(r):
    radius = r.radius()
    return [multiset_match_count(r.sigma[i], r.sigma[i + 1], radius) for i in range(r.n - 1)]


def is_in_theta_set(x, tol=DEFAULT_TOL):
    """Adjacent level spectra are disjoint."""
    r = ritz_values(x, tol)
    return not any(_adjacent_shared(r))


def is_in_omega_set(x, tol=DEFAULT_TOL):
    """Every level has simple spectrum and adjacent level spectra are disjoint."""
    r = ritz_values(x, tol)
    radius = r.radius()
    if any(len(distinct_values(s, radius)) != len(s) for s in r.sigma):
        return False
    return not any(_adjacent_shared(r))


@dataclass
class SharedCount:
    per_level: list
    total: int
    per_level_distinct: list
    total_distinct: int

    @property
    def predicted_orbit_count(self):
        return 2**self.total

    @property
    def predicted_orbit_count_distinct(self):
        return 2**self.total_distinct

    def as_dict(self):
        d = asdict(self)
        d["predicted_orbit_count"] = self.predicted_orbit_count
        d["predicted_orbit_count_distinct"] = self.predicted_orbit_count_distinct
        return d


def shared_eigenvalue_count(x, tol=DEFAULT_TOL):
    """Eigenvalues shared by adjacent levels.

    ``per_level`` counts with multiplicity (multiset intersection);
    ``per_level_distinct`` counts distinct shared values.  Which of the two
    the orbit-count formula intends is left open, so both are reported.
    """
    r = ritz_values(x, tol)
    radius = r.radius()
    multi = _adjacent_shared(r)
    distinct = []
    for i in range(r.n - 1):
        vals = distinct_values(r.sigma[i], radius)
        nxt = r.sigma[i + 1]
        distinct.append(sum(1 for v in vals if np.min(np.abs(nxt - v)) <= radius))
    return SharedCount(multi, sum(multi), distinct, sum(distinct))


def random_borel_conjugator(n, rng):
    """Random invertible ``g``; the Borel subalgebra is ``g b_+ g^{-1}``."""
    while True:
        g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
        s = np.linalg.svd(g, compute_uv=False)
        if s[-1] > 1e-3 * s[0]:
            return g


def sample_in_borel(g, rng):
    """Random element of ``g b_+ g^{-1}``."""
    n = g.shape[0]
    b = np.triu(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    return g @ b @ np.linalg.inv(g)


def samples_until_sreg(n, rng, max_samples=5, tol=DEFAULT_TOL):
    """Draw a random Borel subalgebra and sample it until a strongly regular
    element appears.  Returns the number of samples used, or ``None``.

    Raises ``ConsistencyError`` if the three tests disagree on a sample.
    """
    g = random_borel_conjugator(n, rng)
    for k in range(1, max_samples + 1):
        report = sreg_report(sample_in_borel(g, rng), tol)
        if not report.consistent:
            raise ConsistencyError(f"strong-regularity tests disagree: {report.as_dict()}")
        if report.is_sreg:
            return k
    return None
