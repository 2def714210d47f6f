"""Weyl-algebra operators over ``Q(x1, x2)``, left Groebner bases and the Pfaffian system.

Operators are stored in canonical form ``sum_alpha c_alpha(x) d1**a1 d2**a2`` (coefficients on
the left).  Monomials are ordered by total degree, ties broken in favour of the
higher power of ``d2``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Mapping

import sympy

from .errors import ReductionError, ResourceLimitError
from .parameters import HGParams
from .ratfun import CTX, X1, X2, RationalFunction, compile_matrix, lcm_all

__all__ = [
    "Monomial",
    "OreOperator",
    "monomial_key",
    "system_operators",
    "groebner",
    "normal_form",
    "standard_monomials",
    "holonomic_rank",
    "PfaffianSystem",
    "pfaffian",
    "pfaffian_for",
    "singular_factors",
    "R_POLY",
    "verify_R_identities",
    "swap_variables",
]

Monomial = tuple[int, int]
_RF = RationalFunction


def monomial_key(m: Monomial) -> tuple[int, int]:
    return (m[0] + m[1], m[1])


def _divides(a: Monomial, b: Monomial) -> bool:
    return a[0] <= b[0] and a[1] <= b[1]


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return max(a[0], b[0]), max(a[1], b[1])


def _deriv(c: _RF, g1: int, g2: int) -> _RF:
    for _ in range(g1):
        c = c.diff(0)
    for _ in range(g2):
        c = c.diff(1)
    return c


class OreOperator:
    """Element of ``Q(x1, x2)<d1, d2>`` in canonical form."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, _RF] | None = None):
        self.terms = {tuple(m): c for m, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def d(cls, i: int) -> "OreOperator":
        return cls({(1, 0) if i == 0 else (0, 1): _RF.const(1)})

    @classmethod
    def scalar(cls, c) -> "OreOperator":
        return cls({(0, 0): c if isinstance(c, _RF) else _RF.const(c)})

    @classmethod
    def x(cls, i: int) -> "OreOperator":
        return cls({(0, 0): _RF.x(i)})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, OreOperator) and self.terms == other.terms

    def __add__(self, other: "OreOperator") -> "OreOperator":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return OreOperator(out)

    def __neg__(self) -> "OreOperator":
        return OreOperator({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "OreOperator") -> "OreOperator":
        return self + (-other)

    def scale(self, c: _RF) -> "OreOperator":
        """Left multiplication by a rational function."""
        return OreOperator({m: c * v for m, v in self.terms.items()})

    def d_times(self, alpha: Monomial) -> "OreOperator":
        """Left multiplication by ``d**alpha`` using the Leibniz rule."""
        out: dict[Monomial, _RF] = {}
        for beta, c in self.terms.items():
            for g1 in range(alpha[0] + 1):
                for g2 in range(alpha[1] + 1):
                    dc = _deriv(c, g1, g2)
                    if dc.is_zero():
                        continue
                    coef = _RF.const(comb(alpha[0], g1) * comb(alpha[1], g2)) * dc
                    m = (alpha[0] - g1 + beta[0], alpha[1] - g2 + beta[1])
                    out[m] = out[m] + coef if m in out else coef
        return OreOperator(out)

    def __mul__(self, other: "OreOperator") -> "OreOperator":
        out = OreOperator()
        for alpha, c in self.terms.items():
            out = out + other.d_times(alpha).scale(c)
        return out

    def apply(self, f: _RF) -> _RF:
        """Action on a rational function."""
        total = _RF.const(0)
        for (m1, m2), c in self.terms.items():
            total = total + c * _deriv(f, m1, m2)
        return total

    def leading_monomial(self) -> Monomial:
        return max(self.terms, key=monomial_key)

    def leading_coefficient(self) -> _RF:
        return self.terms[self.leading_monomial()]

    def monic(self) -> "OreOperator":
        return self.scale(self.leading_coefficient().inverse())

    def order(self) -> int:
        return max(sum(m) for m in self.terms)

    def principal_part(self) -> "OreOperator":
        """Initial form for the weight ``(0, 0, 1, 1)``: the terms of top total order in ``d``."""
        top = self.order()
        return OreOperator({m: c for m, c in self.terms.items() if sum(m) == top})

    def __repr__(self) -> str:
        parts = [f"{c}*d1^{m[0]}*d2^{m[1]}" for m, c in sorted(self.terms.items(), key=lambda t: monomial_key(t[0]), reverse=True)]
        return " + ".join(parts) or "0"


def _theta(i: int) -> OreOperator:
    return OreOperator.x(i) * OreOperator.d(i)


def system_operators(p: HGParams) -> tuple[OreOperator, OreOperator]:
    """``L_i = theta_i (b - 1 + theta_i)(b' - 1 + theta_i) - x_i prod_j (a_j + theta_1 + theta_2)``."""
    one = OreOperator.scalar(1)
    euler = _theta(0) + _theta(1)
    upper = one
    for aj in p.a:
        upper = upper * (OreOperator.scalar(aj) + euler)
    ops = []
    for i, (u, v) in enumerate((p.b[0:2], p.b[2:4])):
        th = _theta(i)
        lhs = th * (OreOperator.scalar(u - 1) + th) * (OreOperator.scalar(v - 1) + th)
        ops.append(lhs - OreOperator.x(i) * upper)
    return ops[0], ops[1]


def swap_variables(op: OreOperator) -> OreOperator:
    """Exchange ``x1 <-> x2`` together with ``d1 <-> d2``."""
    out = {}
    for (m1, m2), c in op.terms.items():
        num = CTX.from_dict({(int(k[1]), int(k[0])): v for k, v in c.num.to_dict().items()})
        den = CTX.from_dict({(int(k[1]), int(k[0])): v for k, v in c.den.to_dict().items()})
        out[(m2, m1)] = _RF(num, den)
    return OreOperator(out)


# ---------------------------------------------------------------------------
# Groebner bases

def normal_form(f: OreOperator, basis: list[OreOperator]) -> OreOperator:
    """Full left reduction of ``f`` modulo ``basis``."""
    f = OreOperator(f.terms)
    rem: dict[Monomial, _RF] = {}
    leads = [(g.leading_monomial(), g) for g in basis]
    while f:
        m = f.leading_monomial()
        for lg, g in leads:
            if _divides(lg, m):
                t = g.d_times((m[0] - lg[0], m[1] - lg[1]))
                f = f - t.scale(f.terms[m] / t.terms[m])
                break
        else:
            rem[m] = f.terms.pop(m)
    return OreOperator(rem)


def groebner(gens: Iterable[OreOperator], max_steps: int = 10_000) -> list[OreOperator]:
    """Reduced left Groebner basis (Buchberger with the chain criterion), monic elements."""
    G: list[OreOperator] = []
    for f in gens:
        if not f:
            raise ValueError("generators must be nonzero")
        r = normal_form(f, G)
        if r:
            G.append(r.monic())
    pairs = {(i, j) for i in range(len(G)) for j in range(i)}
    steps = 0
    while pairs:
        steps += 1
        if steps > max_steps:
            raise ResourceLimitError(f"Groebner basis exceeded {max_steps} S-pair steps")
        i, j = min(pairs, key=lambda ij: monomial_key(_lcm(G[ij[0]].leading_monomial(), G[ij[1]].leading_monomial())))
        pairs.discard((i, j))
        a, b = G[i].leading_monomial(), G[j].leading_monomial()
        l = _lcm(a, b)
        if _chain_redundant(G, pairs, i, j, l):
            continue
        s = G[i].d_times((l[0] - a[0], l[1] - a[1])) - G[j].d_times((l[0] - b[0], l[1] - b[1]))
        r = normal_form(s, G)
        if r:
            G.append(r.monic())
            n = len(G) - 1
            pairs |= {(n, k) for k in range(n)}
    return _interreduce(G)


def _chain_redundant(G, pairs, i, j, l) -> bool:
    for k in range(len(G)):
        if k in (i, j) or not _divides(G[k].leading_monomial(), l):
            continue
        if (max(i, k), min(i, k)) not in pairs and (max(j, k), min(j, k)) not in pairs:
            return True
    return False


def _interreduce(G: list[OreOperator]) -> list[OreOperator]:
    lms = [g.leading_monomial() for g in G]
    keep = [
        g
        for idx, g in enumerate(G)
        if not any(k != idx and _divides(lms[k], lms[idx]) and (lms[k] != lms[idx] or k < idx) for k in range(len(G)))
    ]
    out = []
    for idx, g in enumerate(keep):
        m = g.leading_monomial()
        tail = OreOperator({k: v for k, v in g.terms.items() if k != m})
        out.append(OreOperator({m: g.terms[m]}) + normal_form(tail, keep[:idx] + keep[idx + 1 :]))
    return sorted(out, key=lambda g: monomial_key(g.leading_monomial()))


def standard_monomials(basis: list[OreOperator], bound: int = 64) -> list[Monomial]:
    """Monomials outside the initial ideal, sorted by ``(d2-degree, d1-degree)``.

    Raises ``ValueError`` when the set is infinite (the ideal is not zero-dimensional).
    """
    lms = [g.leading_monomial() for g in basis]
    if not any(m[1] == 0 for m in lms) or not any(m[0] == 0 for m in lms):
        raise ValueError("infinitely many standard monomials")
    std = [(i, j) for j in range(bound) for i in range(bound) if not any(_divides(l, (i, j)) for l in lms)]
    return std


def holonomic_rank(basis: list[OreOperator]) -> int:
    return len(standard_monomials(basis))


# ---------------------------------------------------------------------------
# Pfaffian system

@dataclass
class PfaffianSystem:
    """``d_i v = P_i v`` for ``v = (m(d) f)_{m in basis}``."""

    basis: list[Monomial]
    P: tuple[list[list[_RF]], list[list[_RF]]]
    _numeric: list = field(default_factory=list, repr=False, compare=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def denominators(self) -> list:
        return [c.den for Pi in self.P for row in Pi for c in row if not c.is_zero()]

    def integrability_residual(self) -> list[list[_RF]]:
        """``d2 P1 - d1 P2 + P1 P2 - P2 P1``; zero for a flat connection."""
        P1, P2 = self.P
        n = self.rank
        zero = _RF.const(0)
        out = []
        for r in range(n):
            row = []
            for c in range(n):
                acc = P1[r][c].diff(1) - P2[r][c].diff(0)
                for k in range(n):
                    if not P1[r][k].is_zero() and not P2[k][c].is_zero():
                        acc = acc + P1[r][k] * P2[k][c]
                    if not P2[r][k].is_zero() and not P1[k][c].is_zero():
                        acc = acc - P2[r][k] * P1[k][c]
                row.append(acc if not acc.is_zero() else zero)
            out.append(row)
        return out

    def is_integrable(self) -> bool:
        return all(c.is_zero() for row in self.integrability_residual() for c in row)

    def numeric(self, i: int):
        """Cached float evaluator ``(x1, x2) -> P_i`` as a complex ndarray."""
        if not self._numeric:
            self._numeric.extend(compile_matrix(Pi) for Pi in self.P)
        return self._numeric[i]

    def connection(self, x1: complex, x2: complex) -> tuple:
        return self.numeric(0)(x1, x2), self.numeric(1)(x1, x2)

    def to_json(self) -> dict:
        return {
            "basis": [list(m) for m in self.basis],
            "P1": [[c.to_json() for c in row] for row in self.P[0]],
            "P2": [[c.to_json() for c in row] for row in self.P[1]],
        }

    @classmethod
    def from_json(cls, d: dict) -> "PfaffianSystem":
        conv = lambda M: [[_RF.from_json(c) for c in row] for row in M]  # noqa: E731
        return cls([tuple(m) for m in d["basis"]], (conv(d["P1"]), conv(d["P2"])))

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def pfaffian(basis: list[OreOperator], std: list[Monomial] | None = None) -> PfaffianSystem:
    """Rows of ``P_i`` are the normal forms of ``d_i m`` for each standard monomial ``m``."""
    std = list(std if std is not None else standard_monomials(basis))
    index = {m: n for n, m in enumerate(std)}
    zero = _RF.const(0)
    P = []
    for e in ((1, 0), (0, 1)):
        rows = []
        for m in std:
            nf = normal_form(OreOperator({(m[0] + e[0], m[1] + e[1]): _RF.const(1)}), basis)
            row = [zero] * len(std)
            for mono, c in nf.terms.items():
                if mono not in index:
                    raise ReductionError(f"normal form contains non-standard monomial {mono}")
                row[index[mono]] = c
            rows.append(row)
        P.append(rows)
    return PfaffianSystem(std, (P[0], P[1]))


#: Ordered basis ``1, d1, d1^2, d1^3, d1^4, d2, d1 d2, d1^2 d2, d2^2`` used for transport.
PFAFFIAN_BASIS: list[Monomial] = [(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (0, 1), (1, 1), (2, 1), (0, 2)]

_PF_CACHE: dict[HGParams, PfaffianSystem] = {}


def pfaffian_for(p: HGParams) -> PfaffianSystem:
    """Pfaffian system of the hypergeometric system at ``p`` in :data:`PFAFFIAN_BASIS` order."""
    if p not in _PF_CACHE:
        G = groebner(system_operators(p))
        std = standard_monomials(G)
        if sorted(std) != sorted(PFAFFIAN_BASIS):
            raise ReductionError(f"unexpected standard monomials {std}")
        _PF_CACHE[p] = pfaffian(G, PFAFFIAN_BASIS)
    return _PF_CACHE[p]


# ---------------------------------------------------------------------------
# singular locus

R_POLY = (1 - X1 - X2) ** 3 - 27 * X1 * X2


@dataclass(frozen=True)
class FactorReport:
    factors: list  # (polynomial, multiplicity, tag)

    def tags(self) -> set[str]:
        return {t for _, _, t in self.factors}

    def to_json(self) -> list[dict]:
        return [{"factor": str(f), "multiplicity": m, "tag": t} for f, m, t in self.factors]


def singular_factors(pf: PfaffianSystem) -> FactorReport:
    """Factor the LCM of all denominators and tag each factor by its role."""
    _, facs = lcm_all(pf.denominators()).factor()
    known = {str(X1): "x1", str(X2): "x2"}
    out = []
    for f, mult in facs:
        if f.leading_coefficient() < 0:
            f = -f
        if str(f) in known:
            tag = known[str(f)]
        elif f == R_POLY or f == -R_POLY:
            tag = "R"
        else:
            tag = "apparent-candidate"
        out.append((f, int(mult), tag))
    return FactorReport(out)


def verify_R_identities() -> dict[str, bool]:
    """Exact checks of the three polynomial identities describing ``R = 0``."""
    z1, z2, t, w, x1, x2, t1 = sympy.symbols("z1 z2 t w x1 x2 t1")
    R = lambda u, v: (1 - u - v) ** 3 - 27 * u * v  # noqa: E731

    prod = sympy.Integer(1)
    for k1 in range(3):
        for k2 in range(3):
            prod *= 1 - w**k1 * z1 - w**k2 * z2
    lhs = sympy.Poly(sympy.expand(prod), w)
    # reduce modulo the minimal polynomial of a primitive cube root of unity
    lhs = lhs.rem(sympy.Poly(w**2 + w + 1, w))
    rhs = sympy.expand((1 - z1**3 - z2**3) ** 3 - 27 * z1**3 * z2**3)
    ident_i = sympy.expand(lhs.as_expr() - rhs) == 0

    ident_ii = sympy.expand(R(t**3, (1 - t) ** 3)) == 0

    quartic = (
        t1**4
        - 2 * (x1 - x2 + 1) * t1**3
        + (x1**2 + x2**2 + 1 + 2 * x1 * x2 + 4 * x1 - 2 * x2) * t1**2
        - 2 * x1 * (x1 + x2 + 1) * t1
        + x1**2
    )
    disc = sympy.discriminant(quartic, t1)
    ident_iii = sympy.expand(disc - 256 * x1**3 * x2**3 * R(x1, x2)) == 0
    return {"product_over_roots": ident_i, "parametrisation": ident_ii, "quartic_discriminant": ident_iii}
