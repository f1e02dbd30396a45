"""Gelfand-Zeitlin functions and the Kostant-Wallach map.

``f_{i,j}(x) = tr(x_i^j)`` where ``x_i`` is the leading ``i x i`` block of
``x``.  The map collects all of them, level by level.  Level ``i`` can also be
described by the non-leading coefficients of ``det(t - x_i)``; that is the
canonical coordinate system here because the inverse section is built from it.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import PreconditionError
from .numlin import (
    DEFAULT_TOL,
    as_matrix,
    balance,
    charpoly,
    cluster_radius,
    commutator,
    multisets_equal,
    polyroots,
    sort_multiset,
    trace_form,
)


class Coords(Enum):
    TRACES = "traces"
    CHAR_COEFFS = "coeffs"


@dataclass(frozen=True)
class KWPoint:
    """A point of C^{n(n+1)/2} with level structure 1, 2, ..., n.

    In ``CHAR_COEFFS`` level ``i`` holds ``(p_{i,1}, ..., p_{i,i})`` where
    ``p_{i,j}`` is the coefficient of ``t^{j-1}`` in the monic characteristic
    polynomial of the level-``i`` block.  In ``TRACES`` it holds
    ``(f_{i,1}, ..., f_{i,i})``.
    """

    levels: tuple
    coords: Coords = Coords.CHAR_COEFFS

    def __post_init__(self):
        levels = tuple(np.array(v, dtype=complex).reshape(-1) for v in self.levels)
        for i, v in enumerate(levels, start=1):
            if len(v) != i:
                raise PreconditionError(f"level {i} must have {i} entries, got {len(v)}")
            if not np.all(np.isfinite(v)):
                raise PreconditionError(f"level {i} has non-finite entries")
            v.setflags(write=False)
        object.__setattr__(self, "levels", levels)

    @property
    def n(self):
        return len(self.levels)

    def flat(self):
        if not self.levels:
            return np.zeros(0, dtype=complex)
        return np.concatenate(self.levels)

    @classmethod
    def from_flat(cls, n, values, coords=Coords.CHAR_COEFFS):
        values = np.asarray(values, dtype=complex).reshape(-1)
        if len(values) != n * (n + 1) // 2:
            raise PreconditionError(f"expected {n * (n + 1) // 2} values for n={n}")
        levels = []
        start = 0
        for i in range(1, n + 1):
            levels.append(values[start : start + i])
            start += i
        return cls(tuple(levels), coords)

    @classmethod
    def zeros(cls, n, coords=Coords.CHAR_COEFFS):
        return cls.from_flat(n, np.zeros(n * (n + 1) // 2), coords)

    def to_coeffs(self):
        if self.coords is Coords.CHAR_COEFFS:
            return self
        return traces_to_coeffs(self)

    def to_traces(self):
        if self.coords is Coords.TRACES:
            return self
        return coeffs_to_traces(self)

    def polynomials(self):
        """Monic level polynomials as an ``(n+1, n+1)`` ascending coefficient table."""
        c = self.to_coeffs()
        n = c.n
        table = np.zeros((n + 1, n + 1), dtype=complex)
        table[0, 0] = 1
        for i, v in enumerate(c.levels, start=1):
            table[i, :i] = v
            table[i, i] = 1
        return table


@dataclass(frozen=True)
class RitzData:
    """Level spectra ``sigma[i-1] = spectrum of x_i``, each sorted by (re, im)."""

    sigma: tuple

    def __post_init__(self):
        sig = tuple(sort_multiset(np.array(s, dtype=complex).reshape(-1)) for s in self.sigma)
        for i, s in enumerate(sig, start=1):
            if len(s) != i:
                raise PreconditionError(f"level {i} spectrum must have {i} values, got {len(s)}")
        object.__setattr__(self, "sigma", sig)

    @property
    def n(self):
        return len(self.sigma)

    def radius(self):
        allv = np.concatenate(self.sigma) if self.sigma else np.zeros(0)
        return cluster_radius(allv)


def _power_sums_to_coeffs(f):
    # Newton: k e_k = sum_{m=1}^k (-1)^{m-1} e_{k-m} p_m
    i = len(f)
    e = np.zeros(i + 1, dtype=complex)
    e[0] = 1
    for k in range(1, i + 1):
        acc = 0j
        for m in range(1, k + 1):
            acc += (-1) ** (m - 1) * e[k - m] * f[m - 1]
        e[k] = acc / k
    # coefficient of t^{j-1} in prod (t - lambda) is (-1)^{i-j+1} e_{i-j+1}
    return np.array([(-1) ** (i - j + 1) * e[i - j + 1] for j in range(1, i + 1)])


def _coeffs_to_power_sums(c):
    i = len(c)
    e = np.zeros(i + 1, dtype=complex)
    e[0] = 1
    for k in range(1, i + 1):
        e[k] = (-1) ** k * c[i - k]
    f = np.zeros(i, dtype=complex)
    for k in range(1, i + 1):
        acc = (-1) ** (k - 1) * k * e[k]
        for m in range(1, k):
            acc += (-1) ** (k - 1 + m) * e[k - m] * f[m - 1]
        f[k - 1] = acc
    return f


def traces_to_coeffs(kw):
    if kw.coords is not Coords.TRACES:
        raise PreconditionError("point is not in trace coordinates")
    return KWPoint(tuple(_power_sums_to_coeffs(v) for v in kw.levels), Coords.CHAR_COEFFS)


def coeffs_to_traces(kw):
    if kw.coords is not Coords.CHAR_COEFFS:
        raise PreconditionError("point is not in characteristic-coefficient coordinates")
    return KWPoint(tuple(_coeffs_to_power_sums(v) for v in kw.levels), Coords.TRACES)


def _check_level(n, i, j=None):
    if not 1 <= i <= n:
        raise PreconditionError(f"level {i} out of range 1..{n}")
    if j is not None and not 1 <= j <= i:
        raise PreconditionError(f"power {j} out of range 1..{i}")


def cutoff(x, i):
    """Leading principal ``i x i`` block."""
    x = as_matrix(x)
    _check_level(x.shape[0], i)
    return x[:i, :i].copy()


def gz_value(x, i, j):
    """``f_{i,j}(x) = tr(x_i^j)``."""
    x = as_matrix(x)
    _check_level(x.shape[0], i, j)
    return complex(np.trace(np.linalg.matrix_power(x[:i, :i], j)))


def kw_map(x, coords=Coords.CHAR_COEFFS):
    x = as_matrix(x)
    n = x.shape[0]
    if coords is Coords.TRACES:
        levels = tuple(np.array([gz_value(x, i, j) for j in range(1, i + 1)]) for i in range(1, n + 1))
        return KWPoint(levels, Coords.TRACES)
    levels = tuple(charpoly(x[:i, :i]).coeffs[:i] for i in range(1, n + 1))
    return KWPoint(levels, Coords.CHAR_COEFFS)


def ritz_values(x, tol=DEFAULT_TOL):
    """Spectra of all leading blocks.

    Computed on a balanced copy scaled to unit Frobenius norm, then rescaled.
    """
    x = balance(x)
    n = x.shape[0]
    scale = np.linalg.norm(x)
    if scale == 0:
        return RitzData(tuple(np.zeros(i, dtype=complex) for i in range(1, n + 1)))
    y = x / scale
    return RitzData(tuple(polyroots(charpoly(y[:i, :i]), tol) * scale for i in range(1, n + 1)))


def fibers_equal(x, y, tol=DEFAULT_TOL):
    """Whether every level spectrum of ``x`` equals that of ``y`` as a multiset."""
    rx = ritz_values(x, tol)
    ry = ritz_values(y, tol)
    if rx.n != ry.n:
        raise PreconditionError("matrices have different sizes")
    radius = max(rx.radius(), ry.radius())
    return all(multisets_equal(a, b, radius) for a, b in zip(rx.sigma, ry.sigma))


def gradient(x, i, j):
    """``j * x_i^{j-1}`` zero-padded to ``n x n``."""
    x = as_matrix(x)
    n = x.shape[0]
    _check_level(n, i, j)
    g = np.zeros((n, n), dtype=complex)
    g[:i, :i] = j * np.linalg.matrix_power(x[:i, :i], j - 1)
    return g


def ham_field(x, i, j):
    """Hamiltonian vector field of ``f_{i,j}`` at ``x``: ``[x, grad f_{i,j}(x)]``."""
    x = as_matrix(x)
    return commutator(x, gradient(x, i, j))


def poisson_bracket(x, first, second):
    """Lie-Poisson bracket ``tr(x [grad f, grad g])`` of two GZ functions."""
    x = as_matrix(x)
    return trace_form(x, commutator(gradient(x, *first), gradient(x, *second)))


def gz_indices(n, top=None):
    """All ``(i, j)`` with ``1 <= j <= i <= top`` in lexicographic order."""
    top = n if top is None else top
    return [(i, j) for i in range(1, top + 1) for j in range(1, i + 1)]
