from fractions import Fraction as Fr

import mpmath
import numpy as np
import pytest

from hesse_hg.errors import ClusterError
from hesse_hg.monodromy import (
    H_matrix,
    M1,
    M2,
    M3,
    N2,
    eigen_structure,
    exp_params_mp,
    lam,
    m3_scalar,
    monodromy_word,
    parse_word,
    verify_relations,
)
from hesse_hg.parameters import DEFAULT_PARAMS, GroupElement, HGParams, act_on_params, random_nonresonant

P = DEFAULT_PARAMS
E = P.exp()
ONES = np.ones(9)


def test_lambda_at_defaults():
    expected = np.exp(2j * np.pi * (Fr(86, 77) - Fr(31, 30)))
    assert lam(E) == pytest.approx(expected, abs=1e-14)
    assert lam(E.dual()) == pytest.approx(1 / lam(E), abs=1e-14)


def test_relations_at_defaults():
    res = verify_relations(E)
    assert max(res.values()) <= 1e-12, res


@pytest.mark.parametrize("seed", [5, 6])
def test_relations_at_random_parameters_to_40_digits(seed):
    p = random_nonresonant(np.random.default_rng(seed))
    with mpmath.workdps(40):
        res = verify_relations(exp_params_mp(p))
    assert max(res.values()) <= 1e-30, res


def test_h10_closed_form():
    a1, a2, a3 = E.alpha
    b1, b2 = E.beta[:2]
    h10 = (a1 - b1) * (a2 - b1) * (a3 - b1) * (b2 - 1) / ((a1 - 1) * (a2 - 1) * (a3 - 1) * b1 * (b1 - b2))
    h = H_matrix(E)
    assert h[0] == 1
    assert h[1] == pytest.approx(h10, rel=1e-14)


def test_swapping_b1_b2_swaps_h_entries():
    h = H_matrix(E)
    hs = H_matrix(act_on_params(GroupElement.named("100"), P).exp())
    assert hs[[0, 2, 1, 3, 5, 4, 6, 8, 7]] == pytest.approx(h, rel=1e-12)


def test_row_of_ones_is_an_eigenvector_of_M3():
    m3 = M3(E).matrix
    assert np.max(np.abs(ONES @ m3 - lam(E) * ONES)) <= 1e-13


def test_M3_is_a_reflection():
    m3 = M3(E).matrix
    assert np.linalg.matrix_rank(m3 - np.eye(9), tol=1e-10) == 1
    assert np.linalg.det(m3) == pytest.approx(lam(E), abs=1e-12)


def test_trivial_lambda_gives_a_unipotent_M3():
    p = HGParams((Fr(1, 2), Fr(1, 3), Fr(1, 6)), (Fr(1, 7), Fr(3, 7), Fr(1, 11), Fr(26, 77)))
    e = p.exp()
    assert lam(e) == pytest.approx(1, abs=1e-14)
    assert np.isfinite(m3_scalar(e))
    m3 = M3(e).matrix
    assert eigen_structure(m3) == [(1 + 0j, 9)]
    assert np.max(np.abs(m3 - np.eye(9))) > 1e-3
    n = m3 - np.eye(9)
    assert np.max(np.abs(n @ n)) <= 1e-12


def test_M1_M2_spectra():
    b = E.beta
    for m, pair in ((M1(E), b[:2]), (M2(E), b[2:])):
        eig = eigen_structure(m)
        assert [k for _, k in eig] == [3, 3, 3]
        expected = [1, 1 / pair[0], 1 / pair[1]]
        for v, _ in eig:
            assert min(abs(v - w) for w in expected) <= 1e-12


def test_words():
    assert np.array_equal(monodromy_word([], E).matrix, np.eye(9))
    assert np.allclose(monodromy_word([1, -1], E).matrix, np.eye(9), atol=1e-15)
    assert np.allclose(monodromy_word([3, -3], E).matrix, np.eye(9), atol=1e-12)
    m = monodromy_word(parse_word("3,2,3,-2,2,2,3,-2,-2"), E).matrix
    assert np.allclose(m, N2(E).matrix.matrix)
    assert np.allclose(monodromy_word([1, 3], E).matrix, M1(E).matrix @ M3(E).matrix)


def test_N2_block_structure():
    rep = N2(E)
    assert rep.off_block <= 1e-12
    assert rep.det_residual <= 1e-12
    assert rep.top_left_residual <= 1e-12
    assert rep.eigvec_residual <= 1e-12


def test_H_invariance_detects_a_perturbed_entry():
    h = H_matrix(E).copy()
    h[4] += 1e-3
    assert verify_relations(E, h)["M3 H M3v^T=H"] > 1e-5


@pytest.mark.parametrize("text", ["4", "1,0", "a"])
def test_parse_word_rejects_bad_letters(text):
    with pytest.raises(ValueError):
        parse_word(text)


def test_parse_word():
    assert parse_word("") == []
    assert parse_word(" 3, -2 ") == [3, -2]


def test_close_clusters_are_reported():
    with pytest.raises(ClusterError):
        eigen_structure(np.diag([1, 1 + 1e-8, 2]), tol=1e-9, method="numeric")


def test_integer_lower_parameters_give_trivial_circuits():
    e = HGParams(P.a, (Fr(1), Fr(2), Fr(-1), Fr(3))).exp()
    assert np.allclose(M1(e).matrix, np.eye(9))
    assert np.allclose(M2(e).matrix, np.eye(9))
