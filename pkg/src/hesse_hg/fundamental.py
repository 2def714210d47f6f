"""Local solutions at the origin and at infinity, plus the normalised solutions ``G_jk``."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.special import loggamma

from .errors import DomainError, ParameterError
from .integrals import c_prime
from .parameters import LABELS, HGParams, check_fundamental_conditions, check_infinity_conditions
from .series import Truncation, _check_lower, in_domain, prefactored_deriv_eval

__all__ = [
    "LocalSolution",
    "shifted_params",
    "local_solutions",
    "eval_solution_vector",
    "solution_jet",
    "infinity_solutions",
    "eval_infinity_solutions",
    "eval_G",
    "STANDARD_ORDERS",
]

#: Derivative orders ``(m1, m2)`` of the standard monomials, in basis order.
STANDARD_ORDERS = ((0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (0, 1), (1, 1), (2, 1), (0, 2))


@dataclass(frozen=True)
class LocalSolution:
    """``x1**p1 x2**p2 F(shifted; x)``; ``label`` is ``(j, k)`` or ``("inf", family, i)``."""

    exponents: tuple[Fraction, Fraction]
    params: HGParams
    label: tuple

    def value(self, x: Sequence[complex], t: Truncation = Truncation(), branch=None) -> complex:
        return self.derivative(x, (0, 0), t, branch)

    def derivative(self, x, order, t: Truncation = Truncation(), branch=None) -> complex:
        exps = tuple(complex(float(e)) for e in self.exponents)
        return prefactored_deriv_eval(self.params, exps, x, order, t, branch)


def _row_shift(row: tuple[Fraction, Fraction], j: int) -> tuple[Fraction, Fraction]:
    """Lower row after multiplying by ``x**(1 - b_j)``; ``j = 0`` leaves it unchanged."""
    b1, b2 = row
    if j == 0:
        return b1, b2
    if j == 1:
        return 2 - b1, b2 - b1 + 1
    return b1 - b2 + 1, 2 - b2


def shifted_params(p: HGParams, label: tuple[int, int]) -> HGParams:
    """Parameters of the series multiplying ``x1**(1-b_{1j}) x2**(1-b_{2k})``."""
    j, k = label[0] % 3, label[1] % 3
    s = 2 - p.b_entry(1, j) - p.b_entry(2, k)
    row1 = _row_shift(p.b[0:2], j)
    row2 = _row_shift(p.b[2:4], k)
    q = HGParams(tuple(ai + s for ai in p.a), row1 + row2)
    bad = [f"shifted b{i + 1} = {v}" for i, v in enumerate(q.b) if v <= 0 and v.denominator == 1]
    if bad:
        raise ParameterError("a shifted lower parameter is a non-positive integer", bad)
    return q


def local_solutions(p: HGParams) -> list[LocalSolution]:
    """The nine solutions at the origin, in the fixed label order."""
    bad = check_fundamental_conditions(p)
    if bad:
        raise ParameterError("parameters are resonant at the origin", bad)
    out = []
    for j, k in LABELS:
        exps = (1 - p.b_entry(1, j), 1 - p.b_entry(2, k))
        out.append(LocalSolution(exps, shifted_params(p, (j, k)), (j, k)))
    return out


def eval_solution_vector(
    p: HGParams, x: Sequence[complex], t: Truncation = Truncation(), branch=None
) -> np.ndarray:
    return np.array([s.value(x, t, branch) for s in local_solutions(p)])


def solution_jet(
    p: HGParams, x: Sequence[complex], t: Truncation = Truncation(), branch=None
) -> np.ndarray:
    """9x9 matrix: row ``m`` holds the ``m``-th standard derivative of every local solution."""
    sols = local_solutions(p)
    return np.array([[s.derivative(x, o, t, branch) for s in sols] for o in STANDARD_ORDERS])


# ---------------------------------------------------------------------------
# solutions at infinity

def to_infinity_coords(x: Sequence[complex]) -> tuple[complex, complex]:
    x1, x2 = complex(x[0]), complex(x[1])
    return -x1 / x2, 1 / x2


def infinity_solutions(p: HGParams) -> list[LocalSolution]:
    """Nine solutions in ``y = (-x1/x2, 1/x2)``, ordered by ``i`` then family (none, b1, b2)."""
    bad = check_infinity_conditions(p)
    if bad:
        raise ParameterError("parameters are resonant at infinity", bad)
    a, b = p.a, p.b
    out = []
    for i in range(3):
        j, k = (r for r in range(3) if r != i)
        row2 = (a[i] - a[j] + 1, a[i] - a[k] + 1)
        for fam in range(3):
            s = 1 - p.b_entry(1, fam)
            upper = (a[i] + s, a[i] - b[2] + 1 + s, a[i] - b[3] + 1 + s)
            q = HGParams(upper, _row_shift(b[0:2], fam) + row2)
            out.append(LocalSolution((s, a[i]), q, ("inf", fam, i + 1)))
    return out


def eval_infinity_solutions(
    p: HGParams, y: Sequence[complex], t: Truncation = Truncation(), branch=None
) -> np.ndarray:
    return np.array([s.value(y, t, branch) for s in infinity_solutions(p)])


# ---------------------------------------------------------------------------
# normalised solutions

def _check_G_conditions(p: HGParams) -> None:
    r1 = [p.b_entry(1, c) for c in (1, 2, 0)]
    r2 = [p.b_entry(2, c) for c in (1, 2, 0)]
    bad = []
    for row, name in ((r1, "1"), (r2, "2")):
        for i in range(3):
            for j in range(i + 1, 3):
                if (row[i] - row[j]).denominator == 1:
                    bad.append(f"b{name}{i + 1}−b{name}{j + 1} ∈ ℤ")
    for ai in p.a:
        for u in r1:
            for v in r2:
                if (ai - u - v).denominator == 1:
                    bad.append(f"{ai}−{u}−{v} ∈ ℤ")
    if bad:
        raise ParameterError("a sine factor of the normalisation vanishes", bad)


def _gamma_series(q: HGParams, lower1, lower2, x, n_max: int) -> complex:
    """``sum_n prod Gamma(q.a + N) / (prod Gamma(lower1 + n1) prod Gamma(lower2 + n2)) x**n``."""
    n = np.arange(n_max + 1)
    n1, n2 = np.meshgrid(n, n, indexing="ij")
    N = n1 + n2
    logt = sum(loggamma(complex(float(ai)) + N) for ai in q.a)
    logt -= sum(loggamma(complex(float(v)) + n1) for v in lower1)
    logt -= sum(loggamma(complex(float(v)) + n2) for v in lower2)
    terms = np.exp(logt) * _powers(complex(x[0]), n1) * _powers(complex(x[1]), n2)
    return complex(np.sum(np.where(N <= n_max, terms, 0)))


def _powers(z: complex, n: np.ndarray) -> np.ndarray:
    return np.where(n == 0, 1.0, z ** n.astype(float))


def eval_G(
    p: HGParams,
    label: tuple[int, int],
    x: Sequence[complex],
    t: Truncation = Truncation(),
    route: str = "ratio",
) -> complex:
    """Normalised solution ``G_jk = F_jk / C'_jk``.

    ``route="ratio"`` divides the series value by ``C'_jk``.  ``route="sine"``
    multiplies the Gamma-ratio series by ``pi prod sin(pi a') / prod sin(pi b')``,
    the reflected form of the same normalisation.
    """
    _check_G_conditions(p)
    j, k = label[0] % 3, label[1] % 3
    sol = local_solutions(p)[LABELS.index((j, k))]
    if route == "ratio":
        return sol.value(x, t) / c_prime(p, (j, k))
    if route != "sine":
        raise ValueError(f"unknown route {route!r}")
    ok, _ = in_domain(x)
    if not ok:
        raise DomainError(f"x = {tuple(x)} lies outside the convergence domain")
    q = sol.params
    _check_lower(q.b)
    quotient = math.pi
    for ai in q.a:
        quotient *= math.sin(math.pi * float(ai))
    for bi in q.b:
        quotient /= math.sin(math.pi * float(bi))
    pref = 1
    for e, xv in zip(sol.exponents, x):
        if e != 0:
            pref *= cmath.exp(float(e) * cmath.log(complex(xv)))
    return pref * quotient * _gamma_series(q, (q.b[0], q.b[1], 1), (q.b[2], q.b[3], 1), x, t.n_max)
