import numpy as np
import pytest

from hesse_hg.errors import ParameterError
from hesse_hg.intersection import (
    DERIVATIONS,
    I20_explicit,
    all_self_intersections,
    base_self_intersections,
    intersection_ratios,
    to_json,
    triangle_factors,
)
from hesse_hg.monodromy import H_matrix
from hesse_hg.parameters import DEFAULT_PARAMS, LABELS, ExpParams, act_on_label, random_nonresonant

E = DEFAULT_PARAMS.exp()


def _draws(n, seed):
    rng = np.random.default_rng(seed)
    return [random_nonresonant(rng).exp() for _ in range(n)]


@pytest.mark.parametrize("e", [E, *_draws(4, 17)])
def test_ratios_match_the_invariant_form(e):
    assert np.max(np.abs(intersection_ratios(e) - H_matrix(e))) <= 1e-12


def test_origin_value_factorises():
    t1, t2 = triangle_factors(E)
    assert base_self_intersections(E)[(0, 0)] == pytest.approx(t1 * t2, rel=1e-14)


@pytest.mark.parametrize("e", [E, *_draws(3, 23)])
def test_group_derived_value_matches_closed_product(e):
    vals = all_self_intersections(e)
    assert vals[LABELS.index((2, 0))] == pytest.approx(I20_explicit(e), rel=1e-12)


def test_dual_parameters_conjugate_the_values():
    # unimodular parameters: the dual is the complex conjugate
    assert np.allclose(all_self_intersections(E.dual()), np.conj(all_self_intersections(E)), rtol=1e-12, atol=0)


def test_derivation_table_covers_missing_labels():
    covered = set(base_self_intersections(E)) | set(DERIVATIONS)
    assert covered == set(LABELS)
    for target, (source, g) in DERIVATIONS.items():
        assert act_on_label(g, source) == target


def test_vanishing_denominator():
    a = E.alpha
    b1, b2, b3, b4 = E.beta
    # alpha1 = beta1 beta3 makes the origin value singular
    e = ExpParams((b1 * b3, a[1], a[2]), E.beta)
    with pytest.raises(ParameterError):
        base_self_intersections(e)


def test_json_shape():
    doc = to_json(E)
    assert doc["order"][0] == "00"
    assert len(doc["values"]) == 9
