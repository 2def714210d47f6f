import cmath
from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hesse_hg.parameters import (
    DEFAULT_PARAMS,
    ExpParams,
    GroupElement,
    HGParams,
    LABELS,
    act_on_label,
    act_on_params,
    act_on_point,
    check_fundamental_conditions,
    check_infinity_conditions,
    check_nonresonance,
    cycle_notation,
    d4_to_s4,
    dual,
    group_elements,
    parse_params,
    random_nonresonant,
    solution_orbits,
)

fractions = st.fractions(min_value=-3, max_value=3, max_denominator=30)
params = st.builds(
    HGParams, st.tuples(fractions, fractions, fractions), st.tuples(fractions, fractions, fractions, fractions)
)


def named(name, sigma=(0, 1, 2)):
    return GroupElement.named(name, sigma)


B = (Fr(1), Fr(2), Fr(3), Fr(4))
P_B = HGParams((Fr(1, 2), Fr(1, 3), Fr(1, 5)), B)


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        HGParams((0.5, Fr(1, 3), Fr(1, 5)), B)


def test_wrong_arity():
    with pytest.raises(ValueError):
        HGParams((Fr(1), Fr(2)), B)


@pytest.mark.parametrize(
    "name, expected",
    [("100", (2, 1, 3, 4)), ("001", (3, 4, 1, 2)), ("000", (1, 2, 3, 4))],
)
def test_d4_on_lower_parameters(name, expected):
    assert act_on_params(named(name), P_B).b == tuple(Fr(v) for v in expected)


def test_points():
    x = (0.1, 0.2)
    assert act_on_point(named("001"), x) == (0.2, 0.1)
    assert act_on_point(named("100"), x) == x
    assert act_on_point(named("000"), x) == x


@pytest.mark.parametrize("name, cycle", [("101", "(1423)"), ("011", "(1324)"), ("000", "id")])
def test_d4_as_permutations(name, cycle):
    assert cycle_notation(d4_to_s4(named(name))) == cycle


def test_d4_to_s4_is_injective_homomorphism():
    d4 = [GroupElement((0, 1, 2), k) for k in range(8)]
    assert len({d4_to_s4(g) for g in d4}) == 8
    for g in d4:
        for h in d4:
            pg, ph = d4_to_s4(g), d4_to_s4(h)
            # reindex by h first, then by g
            composed = tuple(ph[pg[i] - 1] for i in range(4))
            assert d4_to_s4(g @ h) == composed


def test_s3_permutes_upper():
    g = named("000", (2, 0, 1))
    assert act_on_params(g, DEFAULT_PARAMS).a == (Fr(1, 5), Fr(1, 2), Fr(1, 3))


def test_group_has_48_distinct_elements_and_inverses():
    G = group_elements()
    assert len(set(G)) == 48
    for g in G:
        assert (g @ g.inverse()).is_identity()
        assert (g.inverse() @ g).is_identity()


def test_dual():
    half = HGParams((Fr(1, 2),) * 3, (Fr(1, 2),) * 4)
    assert dual(half) == HGParams((Fr(-1, 2),) * 3, (Fr(-1, 2),) * 4)
    e = ExpParams((1j, 1, 1), (1, 1, 1, 1))
    assert e.dual().alpha[0] == pytest.approx(-1j)


@given(params)
def test_dual_is_an_involution(p):
    assert dual(dual(p)) == p


@given(params)
def test_exponentials_invert_under_dual(p):
    e, ed = p.exp(), dual(p).exp()
    for u, v in zip(e.alpha + e.beta, ed.alpha + ed.beta):
        assert abs(u * v - 1) < 1e-12


def test_exponentials_of_large_arguments_stay_on_the_circle():
    p = HGParams((Fr(10**12 + 1, 2), Fr(1, 3), Fr(1, 5)), DEFAULT_PARAMS.b)
    assert abs(p.exp().alpha[0] + 1) < 1e-15
    assert abs(abs(p.exp().alpha[1]) - 1) < 1e-15
    assert p.exp().alpha[1] == pytest.approx(cmath.exp(2j * cmath.pi / 3))


def test_nonresonance_defaults_and_violations():
    assert check_nonresonance(DEFAULT_PARAMS) == []
    p = HGParams(DEFAULT_PARAMS.a, (Fr(1, 3), Fr(1, 3), Fr(1, 11), Fr(5, 11)))
    assert "b1−b2 ∈ ℤ" in check_nonresonance(p)
    p = HGParams((Fr(1), Fr(1, 3), Fr(1, 5)), DEFAULT_PARAMS.b)
    assert "a1 ∈ ℤ" in check_nonresonance(p)


def test_nonresonance_counts_every_condition():
    # all-integer parameters violate every membership
    p = HGParams((Fr(0),) * 3, (Fr(0),) * 4)
    assert len(check_nonresonance(p)) == 34


def test_fundamental_and_infinity_conditions():
    assert check_fundamental_conditions(DEFAULT_PARAMS) == []
    assert check_infinity_conditions(DEFAULT_PARAMS) == []
    p = HGParams((Fr(1, 2), Fr(3, 2), Fr(1, 5)), DEFAULT_PARAMS.b)
    assert check_infinity_conditions(p) == ["a1−a2 ∈ ℤ"]


def test_orbits():
    orbits = solution_orbits()
    assert frozenset({(0, 0)}) in orbits
    assert frozenset({(1, 0), (2, 0), (0, 1), (0, 2)}) in orbits
    assert frozenset({(1, 1), (2, 1), (1, 2), (2, 2)}) in orbits
    assert sum(len(o) for o in orbits) == 9


def test_label_action_is_a_permutation():
    for g in group_elements():
        assert sorted(act_on_label(g, lab) for lab in LABELS) == sorted(LABELS)


def test_random_nonresonant_is_reproducible():
    a = random_nonresonant(np.random.default_rng(5))
    b = random_nonresonant(np.random.default_rng(5))
    assert a == b
    assert check_nonresonance(a) == []


@given(params)
def test_text_and_json_round_trip(p):
    assert parse_params(p.to_text()) == p
    import json

    assert parse_params(json.dumps(p.to_json())) == p


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_params("alpha=1")
