import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gzsys import sreg
from gzsys.acceptance import degenerate_corpus
from gzsys.errors import ConsistencyError
from gzsys.gzmap import KWPoint, RitzData
from gzsys.hessenberg import hessenberg_from_coeffs, hessenberg_from_ritz
from gzsys.nilfiber import all_sign_sequences, sample_component
from gzsys.sreg import (
    centralizer,
    centralizer_dim,
    is_in_omega_set,
    is_in_theta_set,
    is_regular,
    is_sreg,
    is_sreg_centralizers,
    is_sreg_differentials,
    is_sreg_tangent,
    samples_until_sreg,
    shared_eigenvalue_count,
    sreg_report,
)

from conftest import cnormal

E21 = np.array([[0, 0], [1, 0]], dtype=complex)
E12 = E21.T.copy()


def test_centralizer_examples():
    assert len(centralizer(np.zeros((3, 3)))) == 9
    j = np.eye(3, k=-1)
    basis = centralizer(j)
    assert len(basis) == 3
    polys = np.array([np.eye(3).ravel(), j.ravel(), (j @ j).ravel()])
    for z in basis:
        # each basis element is a polynomial in j
        coef = np.linalg.lstsq(polys.T, z.ravel(), rcond=None)[0]
        assert np.allclose(polys.T @ coef, z.ravel())
    assert centralizer_dim(np.diag([1, 1, 2])) == 5


def test_is_regular_examples(rng):
    assert is_regular(np.eye(4, k=-1))
    assert not is_regular(np.zeros((2, 2)))
    c = np.polynomial.polynomial.polycompanion(np.append(cnormal(rng, 5), 1))
    assert is_regular(c)


def test_principal_nilpotent_2x2():
    assert is_sreg_differentials(E21) == (True, 3)
    assert is_sreg_tangent(E21) == (True, 1)
    assert is_sreg_centralizers(E21)[0]


def test_zero_is_not_sreg():
    for n in range(2, 6):
        assert not is_sreg_differentials(np.zeros((n, n)))[0]


def test_repeated_diagonal_not_tangent():
    assert not is_sreg_tangent(np.diag([1.0, 1.0]))[0]


def test_e12_is_strongly_regular():
    # [E11, E12] = E12, so nothing nonzero commutes with both cutoffs; E12 is in
    # the nilfiber component of the sign sequence "+"
    assert is_sreg_centralizers(E12) == (True, [0])
    assert is_sreg_differentials(E12) == (True, 3)
    assert is_sreg_tangent(E12) == (True, 1)


def test_diagonal_centralizers_fail():
    # E11 commutes with both cutoffs of a diagonal matrix
    ok, dims = is_sreg_centralizers(np.diag([1.0, 2.0]))
    assert not ok and dims == [1]


def test_hessenberg_outputs_are_sreg(rng):
    for n in range(2, 8):
        h = hessenberg_from_coeffs(KWPoint.from_flat(n, cnormal(rng, n * (n + 1) // 2)))
        assert is_sreg_differentials(h)[0]


def test_report_consistency_on_corpus(rng):
    corpus = degenerate_corpus(rng, 60)
    for n in range(2, 7):
        corpus.append(cnormal(rng, n, n))
        corpus.append(hessenberg_from_coeffs(KWPoint.from_flat(n, cnormal(rng, n * (n + 1) // 2))))
        corpus.extend(sample_component(q, rng) for q in all_sign_sequences(n)[:4])
    for x in corpus:
        r = sreg_report(x)
        assert r.consistent, r.as_dict()
        assert r.is_sreg == is_sreg(x)


def test_degenerate_corpus_has_non_sreg_members(rng):
    reports = [sreg_report(x) for x in degenerate_corpus(rng, 30)]
    assert sum(not r.is_sreg for r in reports) >= 20


@given(st.integers(0, 2**32 - 1), st.integers(2, 6))
def test_random_dense_is_sreg_with_margin(seed, n):
    r = sreg_report(cnormal(np.random.default_rng(seed), n, n))
    assert r.is_sreg and r.consistent
    assert min(r.diff_margin, r.tangent_margin, r.centralizer_margin) > 10


def test_report_fields():
    r = sreg_report(E21)
    d = r.as_dict()
    assert d["n"] == 2 and d["diff_rank"] == 3 and d["tangent_rank"] == 1
    assert d["per_level_regular"] == [True, True]
    assert d["centralizer_intersection_dims"] == [0]


def test_theta_examples():
    h = hessenberg_from_ritz(RitzData(([1], [4, 5], [7, 8, 9])))
    assert is_in_theta_set(h)
    assert is_in_omega_set(h)
    x = sample_component(all_sign_sequences(3)[1], np.random.default_rng(0))
    assert not is_in_theta_set(x)


def test_omega_rejects_repeated_level_eigenvalue():
    h = hessenberg_from_ritz(RitzData(([1], [4, 5], [7, 7, 9])))
    assert is_in_theta_set(h)
    assert not is_in_omega_set(h)
    assert sreg_report(h).is_sreg


def test_shared_counts():
    x = sample_component(all_sign_sequences(3)[0], np.random.default_rng(1))
    c = shared_eigenvalue_count(x)
    assert c.per_level == [1, 2] and c.total == 3
    assert c.per_level_distinct == [1, 1] and c.total_distinct == 2
    assert c.predicted_orbit_count == 8 and c.predicted_orbit_count_distinct == 4
    h = hessenberg_from_ritz(RitzData(([1], [4, 5], [7, 8, 9])))
    assert shared_eigenvalue_count(h).total == 0
    assert "predicted_orbit_count" in c.as_dict()


def test_shared_counts_partial():
    h = hessenberg_from_ritz(RitzData(([1], [1, 5], [5, 8, 9])))
    c = shared_eigenvalue_count(h)
    assert c.per_level == [1, 1] and c.total == 2


def test_borel_search_succeeds(rng):
    assert all(samples_until_sreg(4, rng) == 1 for _ in range(5))


def test_borel_search_alarm_on_disagreement(monkeypatch, rng):
    real = sreg.sreg_report

    def broken(x, tol=sreg.DEFAULT_TOL):
        r = real(x, tol)
        r.consistent = False
        return r

    monkeypatch.setattr(sreg, "sreg_report", broken)
    with pytest.raises(ConsistencyError):
        samples_until_sreg(3, rng)


def test_borel_sample_lies_in_borel(rng):
    g = sreg.random_borel_conjugator(4, rng)
    x = sreg.sample_in_borel(g, rng)
    b = np.linalg.solve(g, x @ g)
    assert np.allclose(np.tril(b, -1), 0, atol=1e-10)
