import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from gzsys.errors import PreconditionError
from gzsys.gzmap import KWPoint, RitzData, kw_map, ritz_values
from gzsys.hessenberg import free_positions, hessenberg_from_coeffs, hessenberg_from_ritz, is_hessenberg_unit, section_condition
from gzsys.numlin import multisets_equal
from gzsys.sreg import sreg_report

from conftest import cnormal


def test_zero_point_gives_principal_nilpotent():
    assert np.array_equal(hessenberg_from_coeffs(KWPoint.zeros(2)), [[0, 0], [1, 0]])
    assert np.array_equal(hessenberg_from_coeffs(KWPoint.zeros(3)), np.eye(3, k=-1))
    assert np.array_equal(hessenberg_from_ritz(RitzData(([0], [0, 0]))), [[0, 0], [1, 0]])


@pytest.mark.parametrize("n", [2, 3])
def test_recursion_against_symbolic_determinants(n):
    # the column recursion p_i = (t - a_ii) p_{i-1} - sum_k a_ki p_{k-1} equals det(t - x_i)
    t = sympy.symbols("t")
    a = sympy.Matrix(n, n, lambda r, c: sympy.Symbol(f"a{r}{c}") if r <= c else (1 if r == c + 1 else 0))
    p = [sympy.Integer(1)]
    for i in range(1, n + 1):
        pi = (t - a[i - 1, i - 1]) * p[i - 1] - sum(a[k - 1, i - 1] * p[k - 1] for k in range(1, i))
        p.append(sympy.expand(pi))
        assert sympy.expand((t * sympy.eye(i) - a[:i, :i]).det() - pi) == 0


def test_exact_integer_example():
    # x with known integer entries: its own coefficients must rebuild it exactly
    x = np.array([[2, -1, 3], [1, 0, 4], [0, 1, -2]], dtype=complex)
    assert np.allclose(hessenberg_from_coeffs(kw_map(x)), x)


def test_round_trip_many(rng):
    worst = 0.0
    for k in range(200):
        n = 2 + k % 7
        c = KWPoint.from_flat(n, cnormal(rng, n * (n + 1) // 2))
        h = hessenberg_from_coeffs(c)
        assert is_hessenberg_unit(h)
        worst = max(worst, np.linalg.norm(kw_map(h).flat() - c.flat()) / (1 + np.linalg.norm(c.flat())))
    assert worst <= 1e-8


def test_triangular_ritz_round_trip():
    h = hessenberg_from_ritz(RitzData(([1], [1, 2], [1, 2, 3])))
    assert is_hessenberg_unit(h)
    r = ritz_values(h)
    for got, want in zip(r.sigma, ([1], [1, 2], [1, 2, 3])):
        assert multisets_equal(got, want, 1e-8)


def test_non_interlacing_real_ritz_values_are_fine():
    # impossible for a Hermitian matrix: level-2 values do not interlace level-3 ones
    levels = ([0.0], [10.0, 11.0], [-5.0, -4.0, -3.0])
    r = ritz_values(hessenberg_from_ritz(RitzData(levels)))
    for got, want in zip(r.sigma, levels):
        assert multisets_equal(got, want, 1e-7)


@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_ritz_round_trip_property(seed, n):
    r = np.random.default_rng(seed)
    levels = tuple(cnormal(r, i) for i in range(1, n + 1))
    got = ritz_values(hessenberg_from_ritz(RitzData(levels)))
    for a, b in zip(got.sigma, levels):
        assert multisets_equal(a, b, 1e-6)


def test_is_hessenberg_unit_examples(rng):
    h = hessenberg_from_coeffs(KWPoint.from_flat(4, cnormal(rng, 10)))
    assert is_hessenberg_unit(h)
    assert not is_hessenberg_unit(np.eye(3))
    assert not is_hessenberg_unit(h.T)


def test_local_injectivity(rng):
    c = KWPoint.from_flat(4, cnormal(rng, 10))
    h = hessenberg_from_coeffs(c)
    for r, col in free_positions(4):
        e = h.copy()
        e[r, col] += 1e-3
        assert np.linalg.norm(kw_map(e).flat() - c.flat()) >= 1e-6


def test_free_positions_count():
    for n in range(1, 7):
        assert len(free_positions(n)) == n * (n + 1) // 2


def test_section_condition_finite(rng):
    assert np.isfinite(section_condition(KWPoint.from_flat(3, cnormal(rng, 6))))


def test_section_is_strongly_regular(rng):
    for n in range(1, 8):
        r = sreg_report(hessenberg_from_coeffs(KWPoint.from_flat(n, cnormal(rng, n * (n + 1) // 2))))
        assert r.is_sreg and r.consistent


def test_rejects_non_kwpoint():
    with pytest.raises(PreconditionError):
        hessenberg_from_coeffs([1, 2, 3])
