"""Orbits of K = GL(n-1) x GL(1) on the flag variety of gl(n).

``K`` is the fixed group of ``theta = Ad(c)`` with ``c = diag(1, ..., 1, -1)``.
There are ``n`` closed orbits ``Closed(i)`` and one orbit ``Mixed(i, j)`` for
every ``i < j``.  A flag is classified by two integers:

* ``a`` = first ``k`` with ``V_k`` not inside ``H = span(e_1, ..., e_{n-1})``,
* ``b`` = first ``k`` with ``e_n`` in ``V_k``;

``a == b`` gives ``Closed(a)`` and ``a < b`` gives ``Mixed(a, b)``.

Conventions: permutations are 1-indexed tuples ``w`` with ``w[k-1] = w(k)``;
``perm_matrix(w) e_k = e_{w(k)}``; ``compose(u, v)(k) = u(v(k))`` so that
``perm_matrix(compose(u, v)) = perm_matrix(u) @ perm_matrix(v)``.  The root
``eps_a - eps_b`` is positive iff ``a < b``.  The flag of a group element is
spanned by its columns in order.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConsistencyError, PreconditionError
from .numlin import DEFAULT_TOL


# --- identifiers ----------------------------------------------------------


@dataclass(frozen=True, order=True)
class OrbitId:
    i: int
    j: int = 0  # 0 marks a closed orbit

    @property
    def closed(self):
        return self.j == 0

    def __str__(self):
        return f"Closed({self.i})" if self.closed else f"Mixed({self.i},{self.j})"

    @classmethod
    def parse(cls, text):
        t = text.strip().replace(" ", "")
        for prefix, ctor in (("Closed(", Closed), ("Mixed(", Mixed)):
            if t.startswith(prefix) and t.endswith(")"):
                parts = [int(p) for p in t[len(prefix) : -1].split(",")]
                return ctor(*parts)
        raise PreconditionError(f"cannot parse orbit id {text!r}")

    def check(self, n):
        if self.closed:
            if not 1 <= self.i <= n:
                raise PreconditionError(f"Closed({self.i}) needs 1 <= i <= {n}")
        elif not 1 <= self.i < self.j <= n:
            raise PreconditionError(f"Mixed({self.i},{self.j}) needs 1 <= i < j <= {n}")
        return self


def Closed(i):
    return OrbitId(i, 0)


def Mixed(i, j):
    if not i < j:
        raise PreconditionError("Mixed(i, j) needs i < j")
    return OrbitId(i, j)


@dataclass(frozen=True)
class Root:
    """The root ``eps_a - eps_b``."""

    a: int
    b: int

    def __post_init__(self):
        if self.a == self.b:
            raise PreconditionError("a root needs a != b")

    @property
    def positive(self):
        return self.a < self.b

    def __neg__(self):
        return Root(self.b, self.a)

    def __str__(self):
        return f"e{self.a}-e{self.b}"


def simple_root(k):
    return Root(k, k + 1)


def all_roots(n):
    return [Root(a, b) for a in range(1, n + 1) for b in range(1, n + 1) if a != b]


class RootType(Enum):
    REAL = "real"
    COMPACT_IMAGINARY = "compact imaginary"
    NONCOMPACT_IMAGINARY = "noncompact imaginary"
    COMPLEX_STABLE = "complex stable"
    COMPLEX_UNSTABLE = "complex unstable"


# --- permutations ---------------------------------------------------------


def identity_perm(n):
    return tuple(range(1, n + 1))


def transposition(i, j, n):
    w = list(range(1, n + 1))
    w[i - 1], w[j - 1] = j, i
    return tuple(w)


def compose(u, v):
    return tuple(u[v[k] - 1] for k in range(len(v)))


def inverse_perm(w):
    out = [0] * len(w)
    for k, wk in enumerate(w, start=1):
        out[wk - 1] = k
    return tuple(out)


def perm_matrix(w):
    n = len(w)
    p = np.zeros((n, n), dtype=complex)
    for k, wk in enumerate(w):
        p[wk - 1, k] = 1
    return p


def cycle_down(i, n):
    """The cycle ``(n n-1 ... i)``: ``i -> n`` and ``k -> k-1`` for ``i < k <= n``."""
    w = list(range(1, n + 1))
    if i < n:
        w[i - 1] = n
        for k in range(i + 1, n + 1):
            w[k - 1] = k - 1
    return tuple(w)


# --- involution and tau ---------------------------------------------------


def _c(n):
    d = np.ones(n, dtype=complex)
    d[-1] = -1
    return d


def theta(g):
    """``c g c^{-1}``; on the Lie algebra this is the same formula."""
    g = np.asarray(g, dtype=complex)
    d = _c(g.shape[0])
    return d[:, None] * g * d[None, :]


theta_lie = theta


def tau(g):
    """``g^{-1} theta(g)``."""
    g = np.asarray(g, dtype=complex)
    if abs(np.linalg.det(g)) == 0:
        raise PreconditionError("tau needs an invertible matrix")
    return np.linalg.solve(g, theta(g))


def _monomial_perm(m, tol):
    """Permutation of a monomial matrix (``m e_k`` is a multiple of ``e_{w(k)}``) or None."""
    n = m.shape[0]
    thr = tol.for_matrix(m)
    big = np.abs(m) > thr
    if not (np.all(big.sum(axis=0) == 1) and np.all(big.sum(axis=1) == 1)):
        return None
    return tuple(int(np.argmax(big[:, k])) + 1 for k in range(n))


def in_V(g, tol=DEFAULT_TOL):
    """Whether ``tau(g)`` is monomial."""
    return _monomial_perm(tau(g), tol) is not None


def springer_invariant(g, tol=DEFAULT_TOL):
    w = _monomial_perm(tau(g), tol)
    if w is None:
        raise PreconditionError("tau(g) is not monomial")
    return w


# --- special elements -----------------------------------------------------


def _block(k, n, block):
    if not 1 <= k <= n - 1:
        raise PreconditionError(f"simple root index {k} out of range 1..{n - 1}")
    g = np.eye(n, dtype=complex)
    g[k - 1 : k + 1, k - 1 : k + 1] = block
    return g


def cayley_matrix(k, n):
    """Unnormalized Cayley element: block ``[[1, i], [i, 1]]`` at ``(k, k+1)``."""
    return _block(k, n, np.array([[1, 1j], [1j, 1]]))


def reflection_matrix(k, n):
    """Block ``[[0, i], [i, 0]]`` at ``(k, k+1)``."""
    return _block(k, n, np.array([[0, 1j], [1j, 0]]))


def closed_orbit_group_element(i, n):
    Closed(i).check(n)
    return perm_matrix(cycle_down(i, n))


def orbit_rep_group_element(i, j, n):
    """``P_(n n-1 ... i) * cayley(i) * reflection(i+1) ... reflection(j-1)``."""
    Mixed(i, j).check(n)
    g = closed_orbit_group_element(i, n) @ cayley_matrix(i, n)
    for k in range(i + 1, j):
        g = g @ reflection_matrix(k, n)
    return g


def representative(orbit, n):
    orbit.check(n)
    if orbit.closed:
        return closed_orbit_group_element(orbit.i, n)
    return orbit_rep_group_element(orbit.i, orbit.j, n)


def random_k(n, rng):
    """Random element of ``GL(n-1) x GL(1)``."""
    k = np.zeros((n, n), dtype=complex)
    k[: n - 1, : n - 1] = (rng.standard_normal((n - 1, n - 1)) + 1j * rng.standard_normal((n - 1, n - 1))) / np.sqrt(2)
    k[: n - 1, : n - 1] += np.eye(n - 1)
    k[n - 1, n - 1] = rng.uniform(0.5, 2.0) * np.exp(2j * np.pi * rng.uniform())
    return k


# --- flags ----------------------------------------------------------------


@dataclass(frozen=True)
class Flag:
    """``V_k`` is spanned by the first ``k`` columns of ``basis``."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.array(self.basis, dtype=complex)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise PreconditionError("flag basis must be a square matrix")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def n(self):
        return self.basis.shape[0]

    @classmethod
    def standard(cls, n):
        return cls(np.eye(n, dtype=complex))

    @classmethod
    def of(cls, g):
        """The flag ``g`` applied to the standard flag."""
        return cls(np.asarray(g, dtype=complex))

    def moved(self, g):
        return Flag(np.asarray(g, dtype=complex) @ self.basis)


def _unit_vector(k, n):
    e = np.zeros(n, dtype=complex)
    e[k - 1] = 1
    return e


def closed_orbit_representative(i, n):
    """``(e_1, ..., e_{i-1}, e_n, e_i, ..., e_{n-1})``."""
    Closed(i).check(n)
    vecs = [_unit_vector(k, n) for k in range(1, i)] + [_unit_vector(n, n)]
    vecs += [_unit_vector(k, n) for k in range(i, n)]
    return Flag(np.array(vecs).T)


def orbit_representative(i, j, n):
    """``e_i + e_n`` in slot ``i`` and ``e_i`` in slot ``j``; the rest in order."""
    Mixed(i, j).check(n)
    vecs = [_unit_vector(k, n) for k in range(1, i)]
    vecs.append(_unit_vector(i, n) + _unit_vector(n, n))
    vecs += [_unit_vector(k, n) for k in range(i + 1, j)]
    vecs.append(_unit_vector(i, n))
    vecs += [_unit_vector(k, n) for k in range(j, n)]
    return Flag(np.array(vecs).T)


def flag_representative(orbit, n):
    orbit.check(n)
    if orbit.closed:
        return closed_orbit_representative(orbit.i, n)
    return orbit_representative(orbit.i, orbit.j, n)


def flag_invariants(flag, tol=DEFAULT_TOL):
    """The pair ``(a, b)`` described in the module docstring."""
    b = flag.basis
    n = flag.n
    s = np.linalg.svd(b, compute_uv=False)
    if s[-1] <= tol.threshold(s[0], n):
        raise PreconditionError("degenerate flag: basis is numerically singular")
    q, _ = np.linalg.qr(b)
    last = np.abs(q[n - 1, :])
    thr = tol.threshold(1.0, n)
    a = next(k for k in range(1, n + 1) if last[k - 1] > thr)
    cum = np.sqrt(np.cumsum(last**2))
    bb = next(k for k in range(1, n + 1) if cum[k - 1] > 1 - thr)
    return a, bb


def classify_flag(flag, tol=DEFAULT_TOL):
    a, b = flag_invariants(flag, tol)
    return Closed(a) if a == b else Mixed(a, b)


# --- orbit combinatorics --------------------------------------------------


@dataclass(frozen=True)
class OrbitInfo:
    orbit: OrbitId
    length: int
    dimension: int


def orbit_length(orbit):
    return 0 if orbit.closed else orbit.j - orbit.i


def enumerate_orbits(n):
    if n < 2:
        raise PreconditionError("need n >= 2")
    base = (n - 1) * (n - 2) // 2
    ids = [Closed(i) for i in range(1, n + 1)]
    ids += [Mixed(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return [OrbitInfo(o, orbit_length(o), base + orbit_length(o)) for o in ids]


def theta_v_on_root(orbit, r):
    """Action on roots: trivial for closed orbits, the transposition ``(i j)`` otherwise."""
    if orbit.closed:
        return r
    swap = {orbit.i: orbit.j, orbit.j: orbit.i}
    return Root(swap.get(r.a, r.a), swap.get(r.b, r.b))


def root_type(orbit, r):
    if orbit.closed:
        if orbit.i in (r.a, r.b):
            return RootType.NONCOMPACT_IMAGINARY
        return RootType.COMPACT_IMAGINARY
    image = theta_v_on_root(orbit, r)
    if image == -r:
        return RootType.REAL
    if image == r:
        return RootType.COMPACT_IMAGINARY
    return RootType.COMPLEX_STABLE if image.positive == r.positive else RootType.COMPLEX_UNSTABLE


def theta_v_matrix(g, tol=DEFAULT_TOL):
    """``T = g^{-1} c g``; the twisted involution is ``Ad(T)``.

    Raises if ``g`` is not in V or if ``Ad(T)`` fails to square to the
    identity within 1e-9.
    """
    if not in_V(g, tol):
        raise PreconditionError("g is not in V")
    g = np.asarray(g, dtype=complex)
    t = np.linalg.solve(g, _c(g.shape[0])[:, None] * g)
    # Ad(T)^2 = id iff T^2 is scalar
    t2 = t @ t
    scalar = np.trace(t2) / t.shape[0]
    if np.linalg.norm(t2 - scalar * np.eye(t.shape[0])) > 1e-9 * max(1.0, abs(scalar)):
        raise ConsistencyError("twisted involution is not an involution")
    return t


def theta_v_on_root_matrix(g, r, tol=DEFAULT_TOL):
    """Image of the root space of ``r`` under ``Ad(T)``: ``(image root, scalar)``."""
    t = theta_v_matrix(g, tol)
    n = t.shape[0]
    e = np.zeros((n, n), dtype=complex)
    e[r.a - 1, r.b - 1] = 1
    img = t @ e @ np.linalg.inv(t)
    thr = tol.for_matrix(img)
    hits = np.argwhere(np.abs(img) > thr)
    if len(hits) != 1:
        raise ConsistencyError("twisted involution does not permute root spaces")
    p, q = hits[0]
    return Root(int(p) + 1, int(q) + 1), complex(img[p, q])


def root_type_matrix(g, r, tol=DEFAULT_TOL):
    """Root type read off the matrix form of the twisted involution at ``g``."""
    image, scalar = theta_v_on_root_matrix(g, r, tol)
    if image == r:
        if abs(scalar - 1) <= 1e-9:
            return RootType.COMPACT_IMAGINARY
        if abs(scalar + 1) <= 1e-9:
            return RootType.NONCOMPACT_IMAGINARY
        raise ConsistencyError(f"imaginary root with eigenvalue {scalar}")
    if image == -r:
        return RootType.REAL
    return RootType.COMPLEX_STABLE if image.positive == r.positive else RootType.COMPLEX_UNSTABLE


def monoid_action(orbit, k, n):
    """``m(s_k) . orbit`` for the simple root ``eps_k - eps_{k+1}``."""
    orbit.check(n)
    if not 1 <= k <= n - 1:
        raise PreconditionError(f"simple root index {k} out of range 1..{n - 1}")
    i, j = orbit.i, orbit.j
    if orbit.closed:
        if k == i - 1:
            return Mixed(i - 1, i)
        if k == i:
            return Mixed(i, i + 1)
        return orbit
    if k == i - 1:
        return Mixed(i - 1, j)
    if k == j:
        return Mixed(i, j + 1)
    return orbit


def random_parabolic(k, n, rng):
    """Random element of the minimal parabolic for the simple root ``k``."""
    p = np.triu(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    p[np.diag_indices(n)] = rng.uniform(0.5, 2.0, n) * np.exp(2j * np.pi * rng.uniform(size=n))
    p[k, k - 1] = rng.uniform(0.5, 2.0) * np.exp(2j * np.pi * rng.uniform())
    return p


def monoid_action_geometric(orbit, k, n, rng, tol=DEFAULT_TOL):
    """Classify ``rep * p`` for a generic ``p`` in the minimal parabolic of ``k``."""
    g = representative(orbit, n) @ random_parabolic(k, n, rng)
    return classify_flag(Flag.of(g), tol)


def weak_order_chain(orbit):
    """Steps ``(source, k)`` from a closed orbit up to ``orbit``."""
    if orbit.closed:
        return []
    chain = []
    cur = Closed(orbit.i)
    for k in range(orbit.i, orbit.j):
        chain.append((cur, k))
        cur = Mixed(orbit.i, k + 1)
    return chain


def cayley_image(i, k, n):
    """Orbit of ``closed_rep(i) * cayley(k)`` with ``k`` in ``{i-1, i}``."""
    if k not in (i - 1, i):
        raise PreconditionError("the Cayley transform is noncompact only for k = i-1 or k = i")
    return classify_flag(Flag.of(closed_orbit_group_element(i, n) @ cayley_matrix(k, n)))


def cross_action(w, g):
    """``g * perm_matrix(w)^{-1}``."""
    return np.asarray(g, dtype=complex) @ perm_matrix(w).T


def twisted_conjugation(w_prime, w):
    """``w' w theta(w')^{-1}``; theta is inner here, so it acts trivially on W."""
    return compose(compose(w_prime, w), inverse_perm(w_prime))
