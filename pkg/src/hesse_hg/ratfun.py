"""Exact rational functions in ``x1, x2`` over the rationals, backed by FLINT polynomials."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce as _fold

import flint
import numpy as np

__all__ = ["CTX", "X1", "X2", "poly_from_dict", "RationalFunction", "compile_matrix", "lcm_all"]

CTX = flint.fmpz_mpoly_ctx.get(("x1", "x2"), "deglex")
X1, X2 = CTX.gens()
_ONE = CTX.from_dict({(0, 0): 1})


def poly_from_dict(d: dict) -> flint.fmpz_mpoly:
    return CTX.from_dict({tuple(k): int(v) for k, v in d.items()})


def _grlex_terms(p: flint.fmpz_mpoly) -> list[tuple[tuple[int, int], int]]:
    items = [(tuple(int(e) for e in k), int(v)) for k, v in p.to_dict().items()]
    return sorted(items, key=lambda kv: (kv[0][0] + kv[0][1], kv[0][0]), reverse=True)


class RationalFunction:
    """``num / den`` with integer polynomials, coprime, ``den`` having positive leading coefficient.

    Rational constants are absorbed into the integer polynomials, so the pair
    is canonical: equal functions have identical ``(num, den)``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _reduced: bool = False):
        if den is None:
            den = _ONE
        if not _reduced:
            if num.is_zero():
                den = _ONE
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num, den = num / g, den / g
        if not num.is_zero() and den.leading_coefficient() < 0:
            num, den = -num, -den
        self.num, self.den = num, den

    @classmethod
    def const(cls, q) -> "RationalFunction":
        q = Fraction(q)
        return cls(CTX.from_dict({(0, 0): q.numerator}), CTX.from_dict({(0, 0): q.denominator}))

    @classmethod
    def x(cls, i: int) -> "RationalFunction":
        return cls((X1, X2)[i], _reduced=True)

    # -- arithmetic ------------------------------------------------------------
    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        g = self.den.gcd(other.den)
        sd, od = self.den / g, other.den / g
        return RationalFunction(self.num * od + other.num * sd, sd * other.den)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        g1, g2 = self.num.gcd(other.den), other.num.gcd(self.den)
        num = (self.num / g1) * (other.num / g2)
        if num.is_zero():
            return RationalFunction(num)
        return RationalFunction(num, (self.den / g2) * (other.den / g1), _reduced=True)

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RationalFunction(self.den, self.num, _reduced=True)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        return self * other.inverse()

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalFunction) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def diff(self, i: int) -> "RationalFunction":
        """Partial derivative in ``x_{i+1}``."""
        if self.den.is_constant():
            return RationalFunction(self.num.derivative(i), self.den)
        return RationalFunction(
            self.num.derivative(i) * self.den - self.num * self.den.derivative(i), self.den * self.den
        )

    # -- evaluation and output ---------------------------------------------------
    def __call__(self, x1, x2):
        """Exact value at rational points, floating value otherwise."""
        if _exact(x1, x2):
            x1, x2 = Fraction(x1), Fraction(x2)
            return _eval_terms(_grlex_terms(self.num), x1, x2) / _eval_terms(_grlex_terms(self.den), x1, x2)
        scale = Fraction(_grlex_terms(self.den)[0][1])
        num = [(m, float(Fraction(c) / scale)) for m, c in _grlex_terms(self.num)]
        den = [(m, float(Fraction(c) / scale)) for m, c in _grlex_terms(self.den)]
        return _eval_terms(num, x1, x2) / _eval_terms(den, x1, x2)

    def to_json(self) -> dict:
        """``{"num": [[[i, j], c], ...], "den": ...}`` in descending graded-lex order."""
        return {
            "num": [[list(m), str(c)] for m, c in _grlex_terms(self.num)],
            "den": [[list(m), str(c)] for m, c in _grlex_terms(self.den)],
        }

    @classmethod
    def from_json(cls, d: dict) -> "RationalFunction":
        num = poly_from_dict({tuple(m): int(c) for m, c in d["num"]})
        den = poly_from_dict({tuple(m): int(c) for m, c in d["den"]})
        return cls(num, den)

    def __repr__(self) -> str:
        if self.den.is_one():
            return f"({self.num})"
        return f"({self.num})/({self.den})"


def _exact(*vals) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in vals)


def _eval_terms(terms, x1, x2):
    return sum(c * x1**i * x2**j for (i, j), c in terms)


def compile_matrix(entries: list[list[RationalFunction]]):
    """Float evaluator for a matrix of rational functions.

    Every coefficient is divided by the leading coefficient of its own
    denominator before conversion, which keeps huge integers in range.
    Returns ``f(x1, x2) -> complex ndarray``.
    """
    rows, cols = len(entries), len(entries[0])
    n_terms, d_terms = [], []
    for r in range(rows):
        for c in range(cols):
            rf = entries[r][c]
            scale = Fraction(int(_grlex_terms(rf.den)[0][1]))
            n_terms.append([(m, float(Fraction(v) / scale)) for m, v in _grlex_terms(rf.num)])
            d_terms.append([(m, float(Fraction(v) / scale)) for m, v in _grlex_terms(rf.den)])
    max_deg = max(sum(m) for terms in n_terms + d_terms for m, _ in terms) if n_terms else 0

    def _pack(all_terms):
        k = max(len(t) for t in all_terms) or 1
        e1 = np.zeros((len(all_terms), k), dtype=int)
        e2 = np.zeros((len(all_terms), k), dtype=int)
        cf = np.zeros((len(all_terms), k))
        for idx, terms in enumerate(all_terms):
            for t, ((i, j), v) in enumerate(terms):
                e1[idx, t], e2[idx, t], cf[idx, t] = i, j, v
        return e1, e2, cf

    ne1, ne2, ncf = _pack(n_terms)
    de1, de2, dcf = _pack(d_terms)

    def evaluate(x1: complex, x2: complex) -> np.ndarray:
        p1 = complex(x1) ** np.arange(max_deg + 1)
        p2 = complex(x2) ** np.arange(max_deg + 1)
        num = np.sum(ncf * p1[ne1] * p2[ne2], axis=1)
        den = np.sum(dcf * p1[de1] * p2[de2], axis=1)
        return (num / den).reshape(rows, cols)

    return evaluate


def lcm_all(polys) -> flint.fmpz_mpoly:
    return _fold(lambda acc, p: acc * (p / acc.gcd(p)), polys, _ONE)
