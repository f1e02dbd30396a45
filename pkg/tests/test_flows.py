import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from gzsys.errors import PreconditionError
from gzsys.flows import (
    FlowTimes,
    ZParams,
    a_action,
    flow_step,
    principal_nilpotent,
    regular_nilpotent_conjugator,
    tangent_space_dim,
    z_action_nilfiber,
)
from gzsys.gzmap import gz_indices, kw_map
from gzsys.nilfiber import SignSequence, component_membership, sample_component
from gzsys.sreg import is_sreg

from conftest import cnormal

seeds = st.integers(0, 2**32 - 1)
E21 = np.array([[0, 0], [1, 0]], dtype=complex)


def _unit(x):
    return x / np.linalg.norm(x)


def _times(n, r, bound=2.0):
    t = FlowTimes.random(n, r)
    return FlowTimes.from_flat(n, t.flat() * min(1.0, bound / t.norm()))


def test_flow_times_validation():
    with pytest.raises(PreconditionError):
        FlowTimes(3, {(1, 1): 1})
    with pytest.raises(PreconditionError):
        FlowTimes.from_flat(3, [1, 2])
    t = FlowTimes.from_flat(3, [1, 2, 3])
    assert list(t.t) == [(1, 1), (2, 1), (2, 2)]
    assert np.allclose((-t).flat(), [-1, -2, -3])


def test_flow_step_examples(rng):
    x = cnormal(rng, 3, 3)
    assert np.array_equal(flow_step(x, 2, 1, 0), x)
    assert np.allclose(flow_step(E21, 1, 1, np.log(2)), [[0, 0], [0.5, 0]])
    with pytest.raises(PreconditionError):
        flow_step(x, 3, 1, 1.0)


def test_flow_step_matches_scipy_oracle(rng):
    x = cnormal(rng, 5, 5)
    i, j, t = 3, 2, 0.4 - 0.3j
    g = np.eye(5, dtype=complex)
    g[:3, :3] = scipy.linalg.expm(t * j * np.linalg.matrix_power(x[:3, :3], j - 1))
    assert np.allclose(flow_step(x, i, j, t), g @ x @ np.linalg.inv(g), atol=1e-12)


def test_zero_times_identity(rng):
    x = cnormal(rng, 4, 4)
    assert np.allclose(a_action(x, FlowTimes.zeros(4)), x)


@given(seeds, st.integers(2, 6))
def test_fiber_preserved(seed, n):
    r = np.random.default_rng(seed)
    x = _unit(cnormal(r, n, n))
    y = a_action(x, _times(n, r))
    assert np.linalg.norm(kw_map(y).flat() - kw_map(x).flat()) <= 1e-7 * (1 + np.linalg.norm(x)) ** n


@given(seeds, st.integers(2, 6))
def test_flows_commute_and_invert(seed, n):
    r = np.random.default_rng(seed)
    x = _unit(cnormal(r, n, n))
    t = _times(n, r)
    y = a_action(x, t)
    order = [tuple(k) for k in r.permutation(gz_indices(n, n - 1))]
    assert np.allclose(a_action(x, t, order=order), y, atol=1e-8 * (1 + np.linalg.norm(y)))
    back = a_action(y, -t, order=list(reversed(gz_indices(n, n - 1))))
    assert np.allclose(back, x, atol=1e-8)


@given(seeds, st.integers(2, 6))
def test_group_law(seed, n):
    r = np.random.default_rng(seed)
    x = _unit(cnormal(r, n, n))
    i = int(r.integers(1, n))
    j = int(r.integers(1, i + 1))
    s, u = cnormal(r, 2)
    two = flow_step(flow_step(x, i, j, s), i, j, u)
    assert np.allclose(flow_step(x, i, j, s + u), two, atol=1e-8 * (1 + np.linalg.norm(x)))


def test_tangent_dims(rng):
    assert tangent_space_dim(np.zeros((4, 4))) == 0
    assert tangent_space_dim(np.diag(np.arange(1.0, 5.0))) == 0
    for n in range(2, 7):
        x = _unit(cnormal(rng, n, n))
        assert tangent_space_dim(x) == n * (n - 1) // 2
        assert tangent_space_dim(a_action(x, _times(n, rng))) == n * (n - 1) // 2


def test_sreg_is_flow_invariant(rng):
    for n in range(2, 7):
        x = _unit(cnormal(rng, n, n))
        assert is_sreg(a_action(x, _times(n, rng)))


def test_conjugator_examples(rng):
    j3 = principal_nilpotent(3)
    g = regular_nilpotent_conjugator(j3, rng)
    assert np.allclose(np.linalg.solve(g, j3 @ g), j3)
    g = regular_nilpotent_conjugator(2 * E21, rng)
    assert np.allclose(np.linalg.solve(g, 2 * E21 @ g), E21)
    for n in range(2, 7):
        h = np.eye(n) + 0.5 * cnormal(rng, n, n)
        m = h @ principal_nilpotent(n) @ np.linalg.inv(h)
        g = regular_nilpotent_conjugator(m, rng)
        assert np.allclose(np.linalg.solve(g, m @ g), principal_nilpotent(n), atol=1e-8)


def test_conjugator_rejects_non_regular():
    with pytest.raises(PreconditionError):
        regular_nilpotent_conjugator(np.zeros((3, 3)))
    with pytest.raises(PreconditionError):
        regular_nilpotent_conjugator(np.eye(2))


def test_zparams():
    with pytest.raises(PreconditionError):
        ZParams(3, ([1], [0, 1]))
    with pytest.raises(PreconditionError):
        ZParams(3, ([1],))
    z = ZParams(3, ([2], [1, 3]))
    assert np.allclose(z.element(2), [[1, 0], [3, 1]])
    assert np.allclose(ZParams.identity(4).element(3), np.eye(3))


def test_z_identity_acts_trivially(rng):
    x = sample_component(SignSequence.parse("+-+"), rng)
    assert np.allclose(z_action_nilfiber(x, ZParams.identity(4), rng), x)


def test_z_action_stays_in_component(rng):
    for n in range(2, 8):
        q = SignSequence(tuple(rng.choice(["+", "-"], n - 1)))
        x = sample_component(q, rng)
        y = z_action_nilfiber(x, ZParams.random(n, rng), rng)
        assert component_membership(y) == q
        assert np.abs(kw_map(y / np.linalg.norm(y)).flat()).max() <= 1e-10
        assert np.linalg.norm(y - x) >= 1e-6


def test_z_action_requires_nilfiber(rng):
    with pytest.raises(PreconditionError):
        z_action_nilfiber(cnormal(rng, 3, 3), ZParams.identity(3))
    with pytest.raises(PreconditionError):
        z_action_nilfiber(np.zeros((3, 3)), ZParams.identity(3))


def test_nilfiber_flows_stay_in_component(rng):
    for n in range(2, 8):
        q = SignSequence(tuple(rng.choice(["+", "-"], n - 1)))
        for _ in range(5):
            y = a_action(sample_component(q, rng), FlowTimes.random(n, rng, 0.5))
            assert component_membership(y) == q
