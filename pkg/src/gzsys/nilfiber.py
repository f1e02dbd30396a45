"""Components of the strongly regular part of the nilfiber.

Each sign sequence ``(s_2, ..., s_n)`` gives a flag order built by inserting
``i`` at the back (``+``) or the front (``-``) of the running order.  The
component is the set of matrices strictly triangular for that order whose
entries at the consecutive ("simple") positions are all nonzero.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .numlin import DEFAULT_TOL, as_matrix

MAX_ENUMERATE_N = 20


@dataclass(frozen=True)
class SignSequence:
    signs: tuple

    def __post_init__(self):
        signs = tuple(self.signs)
        if any(s not in "+-" or len(s) != 1 for s in signs):
            raise PreconditionError("signs must be '+' or '-'")
        object.__setattr__(self, "signs", signs)

    @property
    def n(self):
        return len(self.signs) + 1

    @classmethod
    def parse(cls, text):
        return cls(tuple(text.strip()))

    def __str__(self):
        return "".join(self.signs)


@dataclass(frozen=True)
class BorelPattern:
    sigma: tuple
    support: frozenset
    strict_support: frozenset
    simple_positions: tuple

    @property
    def n(self):
        return len(self.sigma)

    def mask(self, strict=True):
        """Boolean ``n x n`` array of allowed positions (0-based)."""
        m = np.zeros((self.n, self.n), dtype=bool)
        for r, c in self.strict_support if strict else self.support:
            m[r - 1, c - 1] = True
        return m

    def render(self):
        """Rows of ``*`` (allowed) and ``0``, diagonal included."""
        m = self.mask(strict=False)
        return ["".join("*" if v else "0" for v in row) for row in m]


def insertion_permutation(q):
    order = [1]
    for i, s in enumerate(q.signs, start=2):
        if s == "+":
            order.append(i)
        else:
            order.insert(0, i)
    return tuple(order)


def borel_pattern(q):
    sigma = insertion_permutation(q)
    n = len(sigma)
    support = frozenset((sigma[k], sigma[l]) for k in range(n) for l in range(k, n))
    strict = frozenset((sigma[k], sigma[l]) for k in range(n) for l in range(k + 1, n))
    simple = tuple((sigma[k], sigma[k + 1]) for k in range(n - 1))
    return BorelPattern(sigma, support, strict, simple)


def sample_component(q, rng):
    """Random element of the component: simple entries have modulus in [0.5, 2]."""
    pat = borel_pattern(q)
    n = pat.n
    x = np.zeros((n, n), dtype=complex)
    simple = set(pat.simple_positions)
    for r, c in sorted(pat.strict_support):
        if (r, c) in simple:
            x[r - 1, c - 1] = rng.uniform(0.5, 2.0) * np.exp(2j * np.pi * rng.uniform())
        else:
            x[r - 1, c - 1] = (rng.standard_normal() + 1j * rng.standard_normal()) / np.sqrt(2)
    return x


def all_sign_sequences(n):
    return [SignSequence(s) for s in itertools.product("+-", repeat=n - 1)]


def enumerate_components(n):
    if n < 1:
        raise PreconditionError("n must be positive")
    if n > MAX_ENUMERATE_N:
        raise PreconditionError(f"n={n} exceeds the enumeration limit {MAX_ENUMERATE_N}")
    return [(q, borel_pattern(q)) for q in all_sign_sequences(n)]


def _matches(x, pat, thr):
    allowed = pat.mask(strict=True)
    if np.any(np.abs(x[~allowed]) > thr):
        return False
    return all(abs(x[r - 1, c - 1]) > thr for r, c in pat.simple_positions)


def component_membership(x, tol=DEFAULT_TOL):
    """The sign sequence whose component contains ``x``, or ``None``.

    The flag order is rebuilt level by level: going from level ``i-1`` to
    ``i``, a nonzero entry in row ``i`` of the leading block means ``i`` was
    put in front (``-``), otherwise at the back.  The resulting pattern is
    then checked in full, so the answer is the unique matching component.
    """
    x = as_matrix(x)
    n = x.shape[0]
    thr = tol.for_matrix(x)
    signs = []
    for i in range(2, n + 1):
        row = np.abs(x[i - 1, : i - 1])
        signs.append("-" if np.any(row > thr) else "+")
    q = SignSequence(tuple(signs))
    return q if _matches(x, borel_pattern(q), thr) else None
