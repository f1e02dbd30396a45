import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gzsys.errors import PreconditionError
from gzsys.gzmap import (
    Coords,
    KWPoint,
    RitzData,
    coeffs_to_traces,
    cutoff,
    fibers_equal,
    gradient,
    gz_indices,
    gz_value,
    ham_field,
    kw_map,
    poisson_bracket,
    ritz_values,
    traces_to_coeffs,
)
from gzsys.hessenberg import hessenberg_from_coeffs
from gzsys.numlin import commutator, multisets_equal, trace_form

from conftest import cnormal

seeds = st.integers(0, 2**32 - 1)


def test_cutoff_examples(rng):
    x = cnormal(rng, 4, 4)
    assert np.array_equal(cutoff(x, 4), x)
    e = np.zeros((4, 4))
    e[3, 3] = 1
    assert np.array_equal(cutoff(e, 3), np.zeros((3, 3)))
    h = hessenberg_from_coeffs(KWPoint.from_flat(4, cnormal(rng, 10)))
    assert np.array_equal(cutoff(h, 2), h[:2, :2])
    with pytest.raises(PreconditionError):
        cutoff(x, 5)


def test_gz_value_examples():
    for i in range(1, 5):
        for j in range(1, i + 1):
            assert gz_value(np.eye(4), i, j) == pytest.approx(i)
            assert gz_value(np.eye(4, k=-1), i, j) == 0


def test_kw_map_zero():
    assert not np.any(kw_map(np.zeros((3, 3))).flat())
    assert not np.any(kw_map(np.zeros((3, 3)), Coords.TRACES).flat())


def test_kw_map_trace_coords_match_gz_values(rng):
    x = cnormal(rng, 4, 4)
    kw = kw_map(x, Coords.TRACES)
    assert np.allclose(kw.flat(), [gz_value(x, i, j) for i, j in gz_indices(4)])


def test_newton_by_hand():
    kw = KWPoint(([3], [3, 5]), Coords.TRACES)
    assert np.allclose(traces_to_coeffs(kw).levels[1], [2, -3])
    assert not np.any(traces_to_coeffs(KWPoint.zeros(3, Coords.TRACES)).flat())


@given(seeds, st.integers(1, 7))
def test_trace_coeff_round_trip(seed, n):
    kw = KWPoint.from_flat(n, cnormal(np.random.default_rng(seed), n * (n + 1) // 2))
    back = traces_to_coeffs(coeffs_to_traces(kw))
    assert np.allclose(back.flat(), kw.flat(), atol=1e-8 * (1 + np.abs(kw.flat()).max()) ** n)


@given(seeds, st.integers(1, 6))
def test_both_coordinate_systems_agree(seed, n):
    x = cnormal(np.random.default_rng(seed), n, n)
    assert np.allclose(kw_map(x, Coords.TRACES).to_coeffs().flat(), kw_map(x).flat(), atol=1e-9)


def test_kwpoint_validation():
    with pytest.raises(PreconditionError):
        KWPoint(([1], [1, 2, 3]))
    with pytest.raises(PreconditionError):
        KWPoint.from_flat(3, np.zeros(5))
    with pytest.raises(PreconditionError):
        KWPoint(([np.nan],))


def test_polynomial_table():
    t = KWPoint(([2], [2, -3])).polynomials()
    assert np.allclose(t, [[1, 0, 0], [2, 1, 0], [2, -3, 1]])


def test_ritz_examples():
    r = ritz_values(np.zeros((3, 3)))
    assert all(np.array_equal(s, np.zeros(i + 1)) for i, s in enumerate(r.sigma))
    r = ritz_values(np.diag([1.0, 2.0, 3.0]))
    assert [list(np.round(s.real, 10)) for s in r.sigma] == [[1], [1, 2], [1, 2, 3]]


def test_ritz_matches_eigvals(rng):
    x = cnormal(rng, 6, 6)
    r = ritz_values(x)
    for i in range(1, 7):
        assert multisets_equal(r.sigma[i - 1], np.linalg.eigvals(x[:i, :i]), 1e-8)


def test_ritz_data_validation():
    with pytest.raises(PreconditionError):
        RitzData(([1], [1]))


def test_fibers_equal_examples(rng):
    x = cnormal(rng, 3, 3)
    assert fibers_equal(x, x)
    e21 = np.array([[0, 0], [1, 0]])
    assert fibers_equal(np.zeros((2, 2)), e21)
    assert not fibers_equal(np.diag([1, 2]), np.diag([2, 1]))


def test_gradient_examples(rng):
    x = cnormal(rng, 4, 4)
    g = gradient(x, 2, 1)
    assert np.array_equal(g[:2, :2], np.eye(2)) and not np.any(g[2:]) and not np.any(g[:, 2:])
    assert np.allclose(gradient(x, 4, 2), 2 * x)


@given(seeds, st.integers(1, 5))
def test_gradient_finite_differences(seed, n):
    r = np.random.default_rng(seed)
    x = cnormal(r, n, n)
    y = cnormal(r, n, n)
    h = 1e-6
    for i, j in gz_indices(n):
        fd = (gz_value(x + h * y, i, j) - gz_value(x - h * y, i, j)) / (2 * h)
        assert abs(fd - trace_form(gradient(x, i, j), y)) <= 1e-6 * (1 + np.linalg.norm(x)) ** j


def test_ham_field_examples(rng):
    x = cnormal(rng, 4, 4)
    assert np.allclose(ham_field(x, 4, 1), 0)
    d = np.diag(cnormal(rng, 4))
    for i, j in gz_indices(4):
        assert np.allclose(ham_field(d, i, j), 0)


def test_poisson_self_bracket(rng):
    x = cnormal(rng, 4, 4)
    for idx in gz_indices(4):
        assert abs(poisson_bracket(x, idx, idx)) <= 1e-10


def test_poisson_commutativity_n5(rng):
    x = cnormal(rng, 5, 5)
    bound = 1e-8 * (1 + np.linalg.norm(x)) ** 3
    for a in gz_indices(5):
        for b in gz_indices(5):
            assert abs(poisson_bracket(x, a, b)) <= bound


def test_poisson_nonzero_off_family(rng):
    # a linear function outside the family does not commute: the bracket is not trivially zero
    x = cnormal(rng, 3, 3)
    a = np.zeros((3, 3))
    a[2, 0] = 1
    assert abs(trace_form(x, commutator(gradient(x, 2, 2), a))) > 1e-3


@given(seeds, st.integers(2, 5))
def test_projection_is_poisson(seed, i):
    # brackets of functions pulled back through the cutoff can be computed in gl(i)
    r = np.random.default_rng(seed)
    n = i + 2
    x = cnormal(r, n, n)
    a, b = cnormal(r, i, i), cnormal(r, i, i)
    xi = x[:i, :i]
    gf = xi @ a + a @ xi  # gradient of tr(a y^2)
    gg = b  # gradient of tr(b y)
    pad = lambda m: np.pad(m, ((0, n - i), (0, n - i)))
    big = trace_form(x, commutator(pad(gf), pad(gg)))
    small = trace_form(xi, commutator(gf, gg))
    assert abs(big - small) <= 1e-8 * (1 + np.linalg.norm(x)) ** 3


def test_gz_indices():
    assert gz_indices(3) == [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]
    assert gz_indices(3, 2) == [(1, 1), (2, 1), (2, 2)]
