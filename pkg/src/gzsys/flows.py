"""Gelfand-Zeitlin flows and the centralizer-group action on the nilfiber.

The flow of ``f_{i,j}`` for time ``t`` is conjugation by
``exp(t j x_i^{j-1})`` (zero-padded, identity outside the leading block).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, PreconditionError
from .gzmap import gz_indices, kw_map
from .numlin import DEFAULT_TOL, as_matrix, expm, rank_tol
from .sreg import balanced_unit, field_rows, is_regular, is_sreg

MAX_CYCLIC_TRIALS = 32


@dataclass(frozen=True)
class FlowTimes:
    """Times ``t[(i, j)]`` for ``1 <= j <= i <= n-1``."""

    n: int
    t: dict

    def __post_init__(self):
        want = set(gz_indices(self.n, self.n - 1))
        if set(self.t) != want:
            raise PreconditionError(f"flow times must be indexed by {sorted(want)}")
        object.__setattr__(self, "t", {k: complex(self.t[k]) for k in sorted(want)})

    @classmethod
    def zeros(cls, n):
        return cls(n, {k: 0j for k in gz_indices(n, n - 1)})

    @classmethod
    def from_flat(cls, n, values):
        keys = gz_indices(n, n - 1)
        values = list(values)
        if len(values) != len(keys):
            raise PreconditionError(f"expected {len(keys)} flow times for n={n}")
        return cls(n, dict(zip(keys, values)))

    @classmethod
    def random(cls, n, rng, scale=1.0):
        m = n * (n - 1) // 2
        v = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) * scale / np.sqrt(2)
        return cls.from_flat(n, v)

    def flat(self):
        return np.array([self.t[k] for k in gz_indices(self.n, self.n - 1)], dtype=complex)

    def norm(self):
        return float(np.linalg.norm(self.flat()))

    def __neg__(self):
        return FlowTimes(self.n, {k: -v for k, v in self.t.items()})

    def items(self):
        return [(k, self.t[k]) for k in gz_indices(self.n, self.n - 1)]


def flow_generator(x, i, j, t):
    """The leading ``i x i`` block of ``t j x_i^{j-1}``."""
    return t * j * np.linalg.matrix_power(x[:i, :i], j - 1)


def flow_step(x, i, j, t, tol=DEFAULT_TOL):
    """Run the flow of ``f_{i,j}`` for time ``t``."""
    x = as_matrix(x)
    n = x.shape[0]
    if not 1 <= j <= i <= n - 1:
        raise PreconditionError(f"flow index ({i},{j}) needs 1 <= j <= i <= {n - 1}")
    if t == 0:
        return x.copy()
    gen = flow_generator(x, i, j, t)
    g = expm(gen, tol)
    ginv = expm(-gen, tol)
    out = x.copy()
    # conjugation by blockdiag(g, I)
    out[:i, :] = g @ out[:i, :]
    out[:, :i] = out[:, :i] @ ginv
    return out


def a_action(x, times, order=None, tol=DEFAULT_TOL):
    """Compose all flows; ``order`` defaults to lexicographic in ``(i, j)``."""
    x = as_matrix(x)
    if times.n != x.shape[0]:
        raise PreconditionError("flow times and matrix disagree on n")
    keys = gz_indices(times.n, times.n - 1) if order is None else list(order)
    for i, j in keys:
        x = flow_step(x, i, j, times.t[(i, j)], tol)
    return x


def tangent_space_dim(x, tol=DEFAULT_TOL):
    """Dimension of the span of the Hamiltonian fields of levels 1..n-1 at ``x``."""
    x = as_matrix(x)
    if x.shape[0] < 2 or not np.any(x):
        return 0
    return rank_tol(field_rows(balanced_unit(x), tol), tol)


def principal_nilpotent(n):
    """Ones on the subdiagonal, zeros elsewhere."""
    return np.eye(n, k=-1, dtype=complex)


def _is_nilpotent(m, tol):
    n = m.shape[0]
    s = np.linalg.norm(m)
    if s == 0:
        return True
    return np.linalg.norm(np.linalg.matrix_power(m / s, n)) <= tol.threshold(1.0, n)


def regular_nilpotent_conjugator(m, rng=None, tol=DEFAULT_TOL):
    """``g`` with ``g^{-1} m g`` the principal nilpotent (ones on the subdiagonal).

    The columns are ``v, mv, ..., m^{n-1} v`` for a random cyclic vector ``v``.
    """
    m = as_matrix(m)
    n = m.shape[0]
    if not (_is_nilpotent(m, tol) and is_regular(m, tol)):
        raise PreconditionError("matrix is not regular nilpotent")
    if rng is None:
        rng = np.random.default_rng(0)
    scale = np.linalg.norm(m)
    unit = m / scale if scale > 0 else m
    for _ in range(MAX_CYCLIC_TRIALS):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        cols = [v]
        for _ in range(n - 1):
            cols.append(unit @ cols[-1])
        krylov = np.array(cols).T
        if rank_tol(krylov.T / np.linalg.norm(krylov), tol) == n:
            # undo the normalisation so that m g e_k = g e_{k+1}
            return krylov * (scale ** np.arange(n)) if scale > 0 else krylov
    raise ConvergenceError(f"no cyclic vector found in {MAX_CYCLIC_TRIALS} trials")


@dataclass(frozen=True)
class ZParams:
    """Per level ``i = 1..n-1`` the coefficients ``c_0, ..., c_{i-1}`` of
    ``z_i = sum_k c_k J_i^k`` (``J_i`` principal nilpotent); ``c_0 != 0``."""

    n: int
    coeffs: tuple

    def __post_init__(self):
        cs = tuple(np.array(c, dtype=complex).reshape(-1) for c in self.coeffs)
        if len(cs) != self.n - 1:
            raise PreconditionError(f"need {self.n - 1} levels of coefficients")
        for i, c in enumerate(cs, start=1):
            if len(c) != i:
                raise PreconditionError(f"level {i} needs {i} coefficients")
            if c[0] == 0:
                raise PreconditionError(f"level {i}: leading coefficient must be nonzero")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def identity(cls, n):
        return cls(n, tuple(np.eye(1, i, dtype=complex)[0] for i in range(1, n)))

    @classmethod
    def random(cls, n, rng, lead=(0.5, 2.0)):
        out = []
        for i in range(1, n):
            c = (rng.standard_normal(i) + 1j * rng.standard_normal(i)) / np.sqrt(2)
            c[0] = rng.uniform(*lead) * np.exp(2j * np.pi * rng.uniform())
            out.append(c)
        return cls(n, tuple(out))

    def element(self, i):
        """``z_i`` as an ``i x i`` matrix."""
        jb = principal_nilpotent(i)
        out = np.zeros((i, i), dtype=complex)
        power = np.eye(i, dtype=complex)
        for c in self.coeffs[i - 1]:
            out += c * power
            power = power @ jb
        return out


def _assert_nilfiber(x, tol):
    s = np.linalg.norm(x)
    c = kw_map(x / s).flat() if s > 0 else np.zeros(1)
    if np.max(np.abs(c)) > tol.threshold(1.0, x.shape[0]):
        raise PreconditionError("matrix is not in the nilfiber")
    if not is_sreg(x, tol):
        raise PreconditionError("matrix is not strongly regular")


def z_action_nilfiber(x, z, rng=None, tol=DEFAULT_TOL):
    """Act on a strongly regular nilfiber element.

    ``h_i = g_i z_i g_i^{-1}`` with ``g_i`` the conjugator of ``x_i``;
    returns ``Ad(h_1 h_2 ... h_{n-1}) x`` with every ``g_i`` computed from ``x``.
    """
    x = as_matrix(x)
    n = x.shape[0]
    if z.n != n:
        raise PreconditionError("parameters and matrix disagree on n")
    _assert_nilfiber(x, tol)
    if rng is None:
        rng = np.random.default_rng(0)
    total = np.eye(n, dtype=complex)
    total_inv = np.eye(n, dtype=complex)
    for i in range(1, n):
        g = regular_nilpotent_conjugator(x[:i, :i], rng, tol)
        zi = z.element(i)
        h = np.eye(n, dtype=complex)
        h[:i, :i] = g @ zi @ np.linalg.inv(g)
        hinv = np.eye(n, dtype=complex)
        hinv[:i, :i] = g @ np.linalg.inv(zi) @ np.linalg.inv(g)
        total = total @ h
        total_inv = hinv @ total_inv
    return total @ x @ total_inv
