"""Independent reference computations used by the tests."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np


def rising(c: Fraction, n: int) -> Fraction:
    out = Fraction(1)
    for i in range(n):
        out *= c + i
    return out


def series_oracle(a, b, x, n_max: int) -> Fraction:
    """Exact partial sum over n1 + n2 <= n_max, each term built from scratch."""
    x1, x2 = (Fraction(v) for v in x)
    total = Fraction(0)
    for n1 in range(n_max + 1):
        for n2 in range(n_max + 1 - n1):
            num = math.prod((rising(aj, n1 + n2) for aj in a), start=Fraction(1))
            den = (
                rising(b[0], n1) * rising(b[1], n1) * math.factorial(n1)
                * rising(b[2], n2) * rising(b[3], n2) * math.factorial(n2)
            )
            total += num / den * x1**n1 * x2**n2
    return total


def hyp3f2_oracle(a, b, z, n_max: int) -> Fraction:
    z = Fraction(z)
    return sum(
        (math.prod((rising(aj, n) for aj in a), start=Fraction(1))
         / (rising(b[0], n) * rising(b[1], n) * math.factorial(n)) * z**n
         for n in range(n_max + 1)),
        Fraction(0),
    )


def cauchy_jet(f, x, radius=(0.02, 0.02), n=32):
    """All mixed partial derivatives of ``f`` at ``x`` from one grid on a torus around ``x``.

    Returns ``d(m1, m2)``; the trapezoid rule on the torus is a 2-D FFT of the samples.
    """
    theta = 2 * np.pi * np.arange(n) / n
    z1 = x[0] + radius[0] * np.exp(1j * theta)
    z2 = x[1] + radius[1] * np.exp(1j * theta)
    grid = np.array([[f((u, v)) for v in z2] for u in z1])
    coeffs = np.fft.fft2(grid) / n**2

    def d(m1: int, m2: int) -> complex:
        scale = math.factorial(m1) * math.factorial(m2) / (radius[0] ** m1 * radius[1] ** m2)
        return complex(coeffs[m1, m2]) * scale

    return d


def cauchy_derivative(f, x, order, radius=(0.02, 0.02), n=32) -> complex:
    return cauchy_jet(f, x, radius, n)(*order)


def apply_operator(op, f, x, radius=(0.02, 0.02), n=32) -> tuple[complex, float]:
    """``op f`` at ``x`` together with the size of its largest term."""
    d = cauchy_jet(f, x, radius, n)
    total, scale = 0j, 0.0
    for mono, coeff in op.terms.items():
        term = complex(coeff(complex(x[0]), complex(x[1]))) * d(*mono)
        total += term
        scale = max(scale, abs(term))
    return total, scale
