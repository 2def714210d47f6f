from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hesse_hg.errors import DomainError, ParameterError
from hesse_hg.parameters import DEFAULT_PARAMS, HGParams
from hesse_hg.series import (
    Truncation,
    check_pde_coefficients,
    coefficient_exact,
    hgf_deriv_eval,
    hgf_eval,
    hgf_eval_exact,
    hyp3f2_exact,
    in_domain,
    pochhammer,
    prefactored_deriv_eval,
)

from .oracles import cauchy_derivative, hyp3f2_oracle, series_oracle

P = DEFAULT_PARAMS
X = (Fr(1, 10), Fr(1, 20))


def test_pochhammer():
    assert pochhammer(Fr(3, 7), 0) == 1
    assert pochhammer(1, 6) == 720
    assert pochhammer(Fr(1, 2), 2) == Fr(3, 4)
    with pytest.raises(ValueError):
        pochhammer(1, -1)


def test_domain():
    assert in_domain((0, 0)) == (True, 1.0)
    ok, margin = in_domain((1 / 8, 1 / 8))
    assert not ok and margin == pytest.approx(0, abs=1e-15)
    ok, margin = in_domain((0.1, 0.05))
    assert ok and margin == pytest.approx(1 - 0.1 ** (1 / 3) - 0.05 ** (1 / 3))


def test_value_at_origin():
    sv = hgf_eval(P, (0, 0))
    assert sv.value == 1
    assert sv.terms_used == 0 or sv.tail_estimate == 0


def test_reference_value():
    ref = series_oracle(P.a, P.b, X, 60)
    sv = hgf_eval(P, (0.1, 0.05), Truncation(n_max=60))
    assert abs(sv.value - float(ref)) <= 1e-14
    assert sv.tail_estimate < 1e-14


def test_exact_partial_sum_matches_oracle():
    assert hgf_eval_exact(P, X, 12) == series_oracle(P.a, P.b, X, 12)


def test_outside_domain():
    with pytest.raises(DomainError):
        hgf_eval(P, (0.5, 0.5))


def test_lower_parameter_pole():
    p = HGParams(P.a, (Fr(-2), P.b[1], P.b[2], P.b[3]))
    with pytest.raises(ParameterError):
        hgf_eval(p, (0.1, 0.05))
    with pytest.raises(ParameterError):
        coefficient_exact(p, 3, 0)


def test_truncation_validation():
    with pytest.raises(ValueError):
        Truncation(n_max=-1)


def test_first_derivatives_at_origin():
    a1, a2, a3 = (float(v) for v in P.a)
    b1, b2, b3, b4 = (float(v) for v in P.b)
    assert hgf_deriv_eval(P, (0, 0), (1, 0)).value == pytest.approx(a1 * a2 * a3 / (b1 * b2))
    assert hgf_deriv_eval(P, (0, 0), (0, 1)).value == pytest.approx(a1 * a2 * a3 / (b3 * b4))
    assert hgf_deriv_eval(P, (0.1, 0.05), (0, 0)).value == hgf_eval(P, (0.1, 0.05)).value


@pytest.mark.parametrize("order", [(1, 0), (0, 2), (2, 1), (3, 0)])
def test_derivatives_against_contour_integrals(order):
    x = (0.1 + 0.01j, 0.05)
    got = hgf_deriv_eval(P, x, order).value
    ref = cauchy_derivative(lambda z: hgf_eval(P, z).value, x, order)
    assert abs(got - ref) <= 1e-9 * max(1.0, abs(ref))


def test_prefactored_power_rule():
    one = HGParams((Fr(0), Fr(0), Fr(0)), P.b)  # series identically 1
    x = (0.05, 0.02)
    got = prefactored_deriv_eval(one, (0.4, 0.7), x, (1, 0))
    assert got == pytest.approx(0.4 * x[0] ** -0.6 * x[1] ** 0.7)


def test_prefactored_without_prefactor():
    x = (0.1, 0.02)
    assert prefactored_deriv_eval(P, (0, 0), x, (1, 1)) == pytest.approx(hgf_deriv_eval(P, x, (1, 1)).value)


def test_prefactored_second_derivative():
    e = (1 - float(P.b[0]), 0)
    x = (0.1, 0.05)
    got = prefactored_deriv_eval(P, e, x, (2, 0))
    ref = cauchy_derivative(lambda z: prefactored_deriv_eval(P, e, z, (0, 0)), x, (2, 0), radius=(0.02, 0.02))
    assert abs(got - ref) <= 1e-6 * abs(ref)


def test_pde_coefficients():
    assert check_pde_coefficients(P, 40)
    assert check_pde_coefficients(P, 0)
    bad = check_pde_coefficients(P, 5, perturb={"b1": 1})
    assert not bad
    assert bad.first_offending == (1, 1, 0)


def test_restriction_to_3f2():
    z = Fr(1, 7)
    assert hgf_eval_exact(P, (z, 0), 20) == hyp3f2_exact(P.a, P.b[:2], z, 20)
    assert hyp3f2_exact(P.a, P.b[:2], z, 20) == hyp3f2_oracle(P.a, P.b[:2], z, 20)


def test_restriction_with_cancelling_parameter():
    # a3 = b2 collapses the x1 restriction to a 2F1
    p = HGParams((P.a[0], P.a[1], P.b[1]), P.b)
    z = Fr(1, 5)
    two_f_one = hyp3f2_oracle((P.a[0], P.a[1], Fr(1)), (P.b[0], Fr(1)), z, 20)
    assert hgf_eval_exact(p, (z, 0), 20) == two_f_one


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 8), st.integers(0, 8))
def test_coefficient_ratios(n1, n2):
    c = coefficient_exact(P, n1, n2)
    nxt = coefficient_exact(P, n1 + 1, n2)
    b1, b2 = P.b[:2]
    s = n1 + n2
    expected = (P.a[0] + s) * (P.a[1] + s) * (P.a[2] + s) / ((b1 + n1) * (b2 + n1) * (n1 + 1))
    assert nxt / c == expected


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 0.1), st.floats(0.0, 2 * np.pi))
def test_conjugate_symmetry(r, phase):
    x = (r * np.exp(1j * phase), 0.5 * r * np.exp(-0.5j * phase))
    v = hgf_eval(P, x).value
    w = hgf_eval(P, (np.conj(x[0]), np.conj(x[1]))).value
    assert abs(v - np.conj(w)) <= 1e-13 * max(1, abs(v))
