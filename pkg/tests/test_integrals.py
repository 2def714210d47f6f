from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from scipy.special import gamma

from hesse_hg.errors import PoleError
from hesse_hg.integrals import (
    GAMMA_LABELS,
    c_prime,
    coefficient_identity_check,
    common_gamma,
    dirichlet_closed,
    dirichlet_quadrature,
    gamma_factor,
    inv_c_prime_sine,
)
from hesse_hg.parameters import DEFAULT_PARAMS, GroupElement, HGParams, act_on_params, random_nonresonant

P = DEFAULT_PARAMS
A = [float(v) for v in P.a]
B = [float(v) for v in P.b]


def test_origin_factor():
    a1, a2, _ = A
    b1, b2, b3, b4 = B
    expected = gamma(1 - a1) * gamma(1 - a2) / (
        gamma(1 - b1) * gamma(1 - b3) * gamma(b1 + b3 - a1 - 1) * gamma(1 - b2) * gamma(1 - b4) * gamma(b2 + b4 - a2 - 1)
    )
    assert gamma_factor("C00", P) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("label", GAMMA_LABELS)
def test_normalised_factor_is_a_common_multiple(label):
    jk = (int(label[1]), int(label[2]))
    ratio = gamma_factor(label, P) * common_gamma(P) / c_prime(P, jk)
    assert ratio == pytest.approx(1, rel=1e-12)
    assert gamma_factor("C'" + label[1:], P) == c_prime(P, jk)


@pytest.mark.parametrize("jk", [(j, k) for j in range(3) for k in range(3)])
def test_sine_form(jk):
    assert inv_c_prime_sine(P, jk) * c_prime(P, jk) == pytest.approx(1, rel=1e-12)


def test_group_maps_C10_to_C20():
    g = GroupElement.named("110", (1, 0, 2))
    assert gamma_factor("C10", act_on_params(g, P)) == pytest.approx(gamma_factor("C20", P), rel=1e-12)


def test_poles_raise():
    p = HGParams(P.a, (P.b[0], P.b[1], P.b[2], Fraction(1)))
    with pytest.raises(PoleError):
        gamma_factor("C00", p)


@pytest.mark.parametrize("args, value", [((1, 1, 1), 0.5), ((2, 1, 1), 1 / 6)])
def test_dirichlet(args, value):
    assert dirichlet_closed(*args) == pytest.approx(value, rel=1e-14)
    assert dirichlet_quadrature(*args) == pytest.approx(value, abs=1e-12)


@pytest.mark.parametrize("args", [(0.3, 0.7, 1.2), (1.5, 2.25, 0.6), (0.1, 0.1, 0.1), (3, 2, 1)])
def test_quadrature_matches_closed_form(args):
    closed = dirichlet_closed(*args).real
    assert abs(dirichlet_quadrature(*args) - closed) <= 1e-10 * closed


def test_quadrature_needs_positive_exponents():
    with pytest.raises(ValueError):
        dirichlet_quadrature(-0.5, 1, 1)


def test_dirichlet_accepts_complex_exponents():
    z = dirichlet_closed(0.5 + 0.2j, 1.1, 0.7)
    expected = gamma(0.5 + 0.2j) * gamma(1.1) * gamma(0.7) / gamma(2.3 + 0.2j)
    assert z == pytest.approx(expected)


@pytest.mark.parametrize("n", [(0, 0), (1, 0), (3, 2)])
def test_coefficient_identity_examples(n):
    tol = 1e-12 if n == (0, 0) else 1e-10
    assert coefficient_identity_check(P, *n) <= tol


def test_coefficient_identity_random_draws():
    rng = np.random.default_rng(11)
    for _ in range(3):
        p = random_nonresonant(rng)
        worst = max(coefficient_identity_check(p, n1, n2) for n1, n2 in product(range(6), repeat=2))
        assert worst <= 1e-10, p

