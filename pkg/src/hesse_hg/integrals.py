"""Gamma factors of the Euler-type integrals and Dirichlet-integral checks.

Each local solution ``F_jk`` equals ``C_jk`` times an integral of the common
integrand ``u(t, x)``.  Four factors are written out explicitly (labels 00,
10, 11, 21); the remaining five are pulled back from these by elements of
S3 x D4.  Expanding ``u`` in ``x`` turns the integral into products of
Dirichlet integrals over triangles, which is what
:func:`coefficient_identity_check` reproduces coefficient by coefficient.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gamma as _gamma
from scipy.special import roots_jacobi

from .errors import PoleError
from .parameters import GroupElement, HGParams, act_on_params
from .series import coefficient_exact, pochhammer

__all__ = [
    "GAMMA_LABELS",
    "gamma_factor",
    "c_prime",
    "inv_c_prime_sine",
    "common_gamma",
    "dirichlet_closed",
    "dirichlet_quadrature",
    "coefficient_identity_check",
]


def _G(z) -> complex:
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == round(z.real):
        raise PoleError(f"Gamma pole at {z.real:g}")
    return complex(_gamma(z))


def _floats(p: HGParams):
    return [float(v) for v in p.a], [float(v) for v in p.b]


def _c00(p):
    (a1, a2, a3), (b1, b2, b3, b4) = _floats(p)
    return _G(1 - a1) * _G(1 - a2) / (
        _G(1 - b1) * _G(1 - b3) * _G(b1 + b3 - a1 - 1) * _G(1 - b2) * _G(1 - b4) * _G(b2 + b4 - a2 - 1)
    )


def _c10(p):
    (a1, a2, a3), (b1, b2, b3, b4) = _floats(p)
    return (
        _G(b1 - a1) * _G(b1 - a2) * _G(b1 - a3)
        / (_G(b1 + b3 - a1 - 1) * _G(b2 + b4 - a2 - 1) * _G(1 - a3))
        / (_G(b1 - 1) * _G(b1 - b2) * _G(1 - b3) * _G(1 - b4))
    )


def _c11(p):
    (a1, a2, a3), (b1, b2, b3, b4) = _floats(p)
    return (
        _G(b1 + b3 - a3 - 1) * _G(b1 + b3 - a2 - 1)
        / (_G(b1 - 1) * _G(b3 - 1) * _G(1 - a3) * _G(b1 - b2) * _G(b3 - b4) * _G(b2 + b4 - a2 - 1))
    )


def _c21(p):
    (a1, a2, a3), (b1, b2, b3, b4) = _floats(p)
    return (
        _G(b2 + b3 - a1 - 1) * _G(b2 + b3 - a2 - 1) * _G(b2 + b3 - a3 - 1)
        / (_G(b1 + b3 - a1 - 1) * _G(b2 + b4 - a2 - 1) * _G(1 - a3))
        / (_G(b2 - 1) * _G(b3 - 1) * _G(b2 - b1) * _G(b3 - b4))
    )


_SWAP_A12 = (1, 0, 2)

# label -> (base label, group element g) with C_label(p) = C_base(g . p)
_DERIVED = {
    "C20": ("C10", GroupElement.named("110", _SWAP_A12)),
    "C01": ("C10", GroupElement.named("001")),
    "C02": ("C10", GroupElement.named("111", _SWAP_A12)),
    "C22": ("C11", GroupElement.named("110", _SWAP_A12)),
    "C12": ("C21", GroupElement.named("001")),
}
_BASE = {"C00": _c00, "C10": _c10, "C11": _c11, "C21": _c21}

GAMMA_LABELS = ("C00", "C10", "C20", "C01", "C11", "C21", "C02", "C12", "C22")


def gamma_factor(label: str, p: HGParams) -> complex:
    """Gamma factor ``C_jk`` (label ``"C10"`` etc.) or ``C'_jk`` (label ``"C'10"``)."""
    if label.startswith("C'"):
        return c_prime(p, (int(label[2]), int(label[3])))
    if label in _BASE:
        return _BASE[label](p)
    if label in _DERIVED:
        base, g = _DERIVED[label]
        return _BASE[base](act_on_params(g, p))
    raise KeyError(f"unknown gamma factor {label!r}")


def common_gamma(p: HGParams) -> complex:
    """``Gamma(1-a3) Gamma(b1+b3-a1-1) Gamma(b2+b4-a2-1)``, the ratio ``C'_jk / C_jk``."""
    (a1, a2, a3), (b1, b2, b3, b4) = _floats(p)
    return _G(1 - a3) * _G(b1 + b3 - a1 - 1) * _G(b2 + b4 - a2 - 1)


def _rows(p: HGParams):
    r1 = [float(p.b_entry(1, i)) for i in (1, 2, 3)]
    r2 = [float(p.b_entry(2, i)) for i in (1, 2, 3)]
    return r1, r2


def c_prime(p: HGParams, label: tuple[int, int]) -> complex:
    """Normalised factor ``C'_jk``; ``F_jk / C'_jk`` is the Gamma-ratio series ``G_jk``."""
    j, k = ((label[0] - 1) % 3, (label[1] - 1) % 3)
    r1, r2 = _rows(p)
    num = 1
    for ai in p.a:
        num *= _G(r1[j] + r2[k] - float(ai) - 1)
    den = 1
    for i in range(3):
        if i != j:
            den *= _G(r1[j] - r1[i])
        if i != k:
            den *= _G(r2[k] - r2[i])
    return num / den


def inv_c_prime_sine(p: HGParams, label: tuple[int, int]) -> complex:
    """``1 / C'_jk`` via the sine quotient and reflected Gamma values."""
    j, k = ((label[0] - 1) % 3, (label[1] - 1) % 3)
    r1, r2 = _rows(p)
    s = r1[j] + r2[k]
    num = math.pi
    for ai in p.a:
        num *= math.sin(math.pi * (float(ai) - s + 2)) * _G(float(ai) - s + 2)
    den = 1.0
    for i in range(3):
        if i != j:
            den *= math.sin(math.pi * (r1[j] - r1[i])) * _G(r1[i] - r1[j] + 1)
        if i != k:
            den *= math.sin(math.pi * (r2[k] - r2[i])) * _G(r2[i] - r2[k] + 1)
    if abs(den) < 1e-300:
        raise PoleError("a sine factor vanishes")
    return num / den


def dirichlet_closed(p1, p2, p3) -> complex:
    """Integral of ``t**(p1-1) s**(p2-1) (1-t-s)**(p3-1)`` over the unit triangle."""
    return _G(p1) * _G(p2) * _G(p3) / _G(complex(p1) + p2 + p3)


def _beta_by_jacobi(e_left: float, e_right: float, n: int) -> float:
    """``int_0^1 u**e_left (1-u)**e_right du`` with the fractional endpoint parts as Jacobi weights."""

    def split(e):
        if e == math.floor(e):
            return 0.0, int(e)
        w = e - math.floor(e) - 1.0
        return w, int(math.floor(e)) + 1

    w_left, k_left = split(e_left)
    w_right, k_right = split(e_right)
    # on [-1, 1]: (1+xi) ~ 2u, (1-xi) ~ 2(1-u)
    with np.errstate(invalid="ignore", divide="ignore"):
        xi, wts = roots_jacobi(n, w_right, w_left)
    poly = (1 + xi) ** k_left * (1 - xi) ** k_right
    return float(np.dot(wts, poly)) / 2.0 ** (1 + e_left + e_right)


def dirichlet_quadrature(p1: float, p2: float, p3: float, n: int = 64) -> float:
    """Same integral through ``t = u v, s = u (1 - v)`` and Gauss-Jacobi rules on both axes."""
    if min(p1, p2, p3) <= 0:
        raise ValueError("quadrature needs positive real exponents")
    outer = _beta_by_jacobi(p1 + p2 - 1, p3 - 1, n)
    inner = _beta_by_jacobi(p1 - 1, p2 - 1, n)
    return outer * inner


def coefficient_identity_check(p: HGParams, n1: int, n2: int) -> float:
    """Relative gap between the Euler-integral coefficient and the series coefficient at ``x**n``."""
    (a1, a2, a3), (b1, b2, b3, b4) = _floats(p)
    tri1 = dirichlet_closed(1 - b1 - n1, 1 - b3 - n2, b1 + b3 - a1 - 1)
    tri2 = dirichlet_closed(1 - b2 - n1, 1 - b4 - n2, b2 + b4 - a2 - 1)
    lhs = gamma_factor("C00", p) * tri1 * tri2 * pochhammer(a3, n1 + n2) / (
        math.factorial(n1) * math.factorial(n2)
    )
    rhs = float(coefficient_exact(p, n1, n2))
    return abs(lhs - rhs) / abs(rhs) if rhs != 0 else abs(lhs)
