"""Evaluation of the double series F(a;B;x) and its termwise derivatives.

The coefficient of ``x1**n1 * x2**n2`` is

    prod_j (a_j, n1+n2) / ((b1, n1) (b2, n1) n1! (b3, n2) (b4, n2) n2!)

and the series converges on ``|x1|**(1/3) + |x2|**(1/3) < 1``.  Floating
evaluation sums total-degree shells with recurrence-updated term ratios; an
exact rational evaluator that multiplies Pochhammer symbols directly is kept
for cross-checks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import BranchError, DomainError, ParameterError
from .parameters import HGParams

__all__ = [
    "Truncation",
    "SeriesValue",
    "pochhammer",
    "in_domain",
    "hgf_eval",
    "hgf_deriv_eval",
    "prefactored_deriv_eval",
    "hgf_eval_exact",
    "hyp3f2_exact",
    "coefficient_exact",
    "check_pde_coefficients",
]


@dataclass(frozen=True)
class Truncation:
    n_max: int = 60
    tail_tol: float = 1e-16

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError("n_max must be non-negative")
        if self.tail_tol < 0:
            raise ValueError("tail_tol must be non-negative")


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    terms_used: int
    tail_estimate: float


def pochhammer(c, n: int):
    """Rising factorial ``c (c+1) ... (c+n-1)``; works for Fraction, int, float and complex."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out = 1 if not isinstance(c, Fraction) else Fraction(1)
    for i in range(n):
        out *= c + i
    return out


def in_domain(x: Sequence[complex]) -> tuple[bool, float]:
    margin = 1.0 - abs(x[0]) ** (1.0 / 3.0) - abs(x[1]) ** (1.0 / 3.0)
    return margin > 0, margin


def _check_lower(b: Sequence[float]) -> None:
    for j, v in enumerate(b):
        if float(v) <= 0 and float(v) == round(float(v)):
            raise ParameterError(f"b{j + 1} = {v} is a non-positive integer", [f"b{j + 1} ∈ −ℕ"])


@lru_cache(maxsize=16)
def _shell_index(n: int) -> tuple[np.ndarray, np.ndarray]:
    k1, k2 = np.indices((n + 1, n + 1))
    s = (k1 + k2).ravel()
    return s, (s <= n)


def _term_grid(a, b, x, order, n_max):
    """Terms of the ``order``-th derivative series: ``T[k] = d_k x**k``, zero outside ``k1+k2 <= n_max``."""
    m1, m2 = order
    a = np.asarray(a, dtype=float)
    b1, b2, b3, b4 = (float(v) for v in b)
    x1, x2 = complex(x[0]), complex(x[1])

    # d_0 = c_m * m1! * m2!
    d0 = 1.0
    for aj in a:
        d0 *= pochhammer(float(aj), m1 + m2)
    d0 /= pochhammer(b1, m1) * pochhammer(b2, m1) * pochhammer(b3, m2) * pochhammer(b4, m2)

    n = n_max
    T = np.zeros((n + 1, n + 1), dtype=complex)
    T[0, 0] = d0
    if n == 0:
        return T
    k = np.arange(n, dtype=float)
    # first column: step in k1 at k2 = 0
    n1 = k + m1
    N = n1 + m2
    r1 = np.prod(a[:, None] + N[None, :], axis=0) / ((b1 + n1) * (b2 + n1) * (k + 1))
    T[1:, 0] = d0 * np.cumprod(r1 * x1)
    # then step in k2 for every row at once
    for k2 in range(n):
        rows = n - k2
        kk1 = np.arange(rows, dtype=float)
        n2 = k2 + m2
        NN = kk1 + m1 + n2
        r2 = np.prod(a[:, None] + NN[None, :], axis=0) / ((b3 + n2) * (b4 + n2) * (k2 + 1))
        T[:rows, k2 + 1] = T[:rows, k2] * r2 * x2
    return T


def _shell_sum(T: np.ndarray, t: Truncation) -> SeriesValue:
    n = T.shape[0] - 1
    s, keep = _shell_index(n)
    flat = T.ravel()
    w = np.where(keep, flat, 0)
    shells = np.bincount(s, weights=w.real, minlength=2 * n + 1)[: n + 1] + 1j * np.bincount(
        s, weights=w.imag, minlength=2 * n + 1
    )[: n + 1]
    shell_abs = np.bincount(s, weights=np.abs(w), minlength=2 * n + 1)[: n + 1]
    used = n
    if t.tail_tol > 0:
        cum_abs = np.cumsum(shell_abs)
        hit = np.nonzero(shell_abs[1:] <= t.tail_tol * cum_abs[1:])[0]
        if hit.size:
            used = int(hit[0]) + 1
    value = complex(shells[: used + 1].sum())
    return SeriesValue(value, used, float(shell_abs[used]))


def _series(a, b, x, order, t: Truncation) -> SeriesValue:
    ok, _ = in_domain(x)
    if not ok:
        raise DomainError(f"x = {tuple(x)} lies outside the convergence domain")
    _check_lower(b)
    return _shell_sum(_term_grid(a, b, x, order, t.n_max), t)


def hgf_eval(p: HGParams, x: Sequence[complex], t: Truncation = Truncation()) -> SeriesValue:
    """Partial sum of F(a;B;x) over total-degree shells."""
    return _series(p.a, p.b, x, (0, 0), t)


def hgf_deriv_eval(
    p: HGParams, x: Sequence[complex], order: tuple[int, int], t: Truncation = Truncation()
) -> SeriesValue:
    """Termwise ``d1**m1 d2**m2`` of the series."""
    m1, m2 = order
    if m1 < 0 or m2 < 0:
        raise ValueError("derivative orders must be non-negative")
    return _series(p.a, p.b, x, (m1, m2), t)


def _falling(p, i: int):
    out = 1
    for r in range(i):
        out *= p - r
    return out


def _power(xv: complex, e: complex, log_branch: complex | None) -> complex:
    if e == 0:
        return 1.0
    if xv == 0:
        if e.real > 0:
            return 0.0
        raise DomainError("power prefactor is singular at a coordinate hyperplane")
    if log_branch is None:
        if xv.imag == 0 and xv.real < 0 and complex(e).imag == 0 and float(e.real) != round(e.real):
            raise BranchError("point on the negative real axis: pass an explicit branch")
        return cmath.exp(e * cmath.log(xv))
    return cmath.exp(e * log_branch)


def prefactored_deriv_eval(
    p: HGParams,
    exponents: tuple[complex, complex],
    x: Sequence[complex],
    order: tuple[int, int],
    t: Truncation = Truncation(),
    branch: tuple[complex, complex] | None = None,
) -> complex:
    """``d1**m1 d2**m2 [x1**p1 x2**p2 S(x)]`` by the Leibniz rule.

    ``branch`` optionally supplies ``(log x1, log x2)``; otherwise principal
    logarithms are used.
    """
    p1, p2 = (complex(e) for e in exponents)
    m1, m2 = order
    x1, x2 = complex(x[0]), complex(x[1])
    logs = branch if branch is not None else (None, None)
    # coordinates where the prefactor is identically 1 do not need a branch
    total = 0j
    for i in range(m1 + 1):
        c1 = math.comb(m1, i) * _falling(p1, i)
        if c1 == 0:
            continue
        f1 = c1 * _power(x1, p1 - i, logs[0])
        for j in range(m2 + 1):
            c2 = math.comb(m2, j) * _falling(p2, j)
            if c2 == 0:
                continue
            f2 = c2 * _power(x2, p2 - j, logs[1])
            if f1 * f2 == 0:
                continue
            total += f1 * f2 * hgf_deriv_eval(p, x, (m1 - i, m2 - j), t).value
    return total


# ---------------------------------------------------------------------------
# exact rational arithmetic

def coefficient_exact(p: HGParams, n1: int, n2: int) -> Fraction:
    """Series coefficient of ``x1**n1 x2**n2`` from Pochhammer products."""
    num = Fraction(1)
    for aj in p.a:
        num *= pochhammer(aj, n1 + n2)
    b1, b2, b3, b4 = p.b
    den = (
        pochhammer(b1, n1) * pochhammer(b2, n1) * math.factorial(n1)
        * pochhammer(b3, n2) * pochhammer(b4, n2) * math.factorial(n2)
    )
    if den == 0:
        raise ParameterError("a lower parameter is a non-positive integer")
    return num / den


def hgf_eval_exact(p: HGParams, x: Sequence[Fraction], n_max: int) -> Fraction:
    """Exact partial sum over ``n1 + n2 <= n_max`` at rational ``x``."""
    x1, x2 = (Fraction(v) for v in x)
    total = Fraction(0)
    for n1 in range(n_max + 1):
        for n2 in range(n_max + 1 - n1):
            total += coefficient_exact(p, n1, n2) * x1**n1 * x2**n2
    return total


def hyp3f2_exact(a: Sequence[Fraction], b: Sequence[Fraction], z: Fraction, n_max: int) -> Fraction:
    """Exact partial sum of 3F2(a; b; z) through ``z**n_max``."""
    total, term = Fraction(0), Fraction(1)
    z = Fraction(z)
    for n in range(n_max + 1):
        total += term
        term = term * (a[0] + n) * (a[1] + n) * (a[2] + n) / ((b[0] + n) * (b[1] + n) * (n + 1)) * z
    return total


@dataclass(frozen=True)
class PDECheck:
    residual: Fraction
    first_offending: tuple[int, int, int] | None  # (equation, n1, n2)

    def __bool__(self):
        return self.residual == 0


def check_pde_coefficients(p: HGParams, N: int, perturb: dict | None = None) -> PDECheck:
    """Exact coefficientwise check of both differential equations for ``n1 + n2 <= N``.

    Equation ``i`` reads ``n_i (b_{i1}-1+n_i)(b_{i2}-1+n_i) c(n)`` on the left and
    ``prod_j (a_j + |n| - 1) c(n - e_i)`` on the right.  ``perturb`` maps a lower
    parameter name (``"b1"`` ..) to a shift applied to the left-hand side only.
    """
    shift = {f"b{j + 1}": Fraction(0) for j in range(4)}
    for k, v in (perturb or {}).items():
        shift[k] += Fraction(v)
    lhs_b = [p.b[j] + shift[f"b{j + 1}"] for j in range(4)]

    c = {}
    for s in range(N + 1):
        for n1 in range(s + 1):
            c[n1, s - n1] = coefficient_exact(p, n1, s - n1)

    worst, first = Fraction(0), None
    for s in range(N + 1):
        for n1 in range(s + 1):
            n2 = s - n1
            for eq, (ni, bb) in enumerate(((n1, lhs_b[0:2]), (n2, lhs_b[2:4])), start=1):
                lhs = ni * (bb[0] - 1 + ni) * (bb[1] - 1 + ni) * c[n1, n2]
                if ni == 0:
                    rhs = Fraction(0)
                else:
                    prev = (n1 - 1, n2) if eq == 1 else (n1, n2 - 1)
                    rhs = c[prev]
                    for aj in p.a:
                        rhs *= aj + s - 1
                diff = abs(lhs - rhs)
                if diff != 0 and first is None:
                    first = (eq, n1, n2)
                worst = max(worst, diff)
    return PDECheck(worst, first)
