"""Parameters of F(a;B;x), their exponentials, and the S3 x D4 symmetry.

Parameters are kept as exact :class:`fractions.Fraction` values so that the
integrality tests behind nonresonance are exact.  The symmetry group acts on
parameter tuples by reindexing: an element with position map ``perm`` sends a
tuple ``c`` to ``(c[perm[0]], c[perm[1]], ...)``.
"""

from __future__ import annotations

import cmath
import itertools
import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "HGParams",
    "ExpParams",
    "GroupElement",
    "D4_NAMES",
    "LABELS",
    "DEFAULT_PARAMS",
    "act_on_params",
    "act_on_point",
    "act_on_label",
    "d4_to_s4",
    "cycle_notation",
    "dual",
    "check_nonresonance",
    "check_fundamental_conditions",
    "check_infinity_conditions",
    "solution_orbits",
    "group_elements",
    "random_nonresonant",
    "parse_params",
]


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        raise TypeError("parameters must be exact; pass a string like '1/3'")
    return Fraction(v)


@dataclass(frozen=True)
class HGParams:
    """Exponents ``a = (a1, a2, a3)`` and ``b = (b1, b2, b3, b4)``.

    The lower-parameter matrix is ``[[b1, b2, 1], [b3, b4, 1]]``.
    """

    a: tuple[Fraction, Fraction, Fraction]
    b: tuple[Fraction, Fraction, Fraction, Fraction]

    def __post_init__(self):
        a = tuple(_frac(v) for v in self.a)
        b = tuple(_frac(v) for v in self.b)
        if len(a) != 3 or len(b) != 4:
            raise ValueError("need exactly 3 upper and 4 lower parameters")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def B(self) -> tuple[tuple[Fraction, Fraction, Fraction], tuple[Fraction, Fraction, Fraction]]:
        one = Fraction(1)
        return (self.b[0], self.b[1], one), (self.b[2], self.b[3], one)

    def b_entry(self, row: int, col: int) -> Fraction:
        """Entry ``b_{row,col}`` with ``row`` in {1, 2} and ``col`` read mod 3 (0 is the unit column)."""
        col %= 3
        if col == 0:
            return Fraction(1)
        return self.b[2 * (row - 1) + col - 1]

    def complex_a(self) -> tuple[complex, ...]:
        return tuple(complex(float(v)) for v in self.a)

    def complex_b(self) -> tuple[complex, ...]:
        return tuple(complex(float(v)) for v in self.b)

    def exp(self) -> "ExpParams":
        return ExpParams(tuple(_expi(v) for v in self.a), tuple(_expi(v) for v in self.b))

    def to_json(self) -> dict:
        return {"a": [_fmt(v) for v in self.a], "b": [_fmt(v) for v in self.b]}

    def to_text(self) -> str:
        return "a=" + ",".join(_fmt(v) for v in self.a) + " b=" + ",".join(_fmt(v) for v in self.b)

    def __str__(self) -> str:
        return self.to_text()


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _expi(q: Fraction) -> complex:
    # reduce mod 1 first so large exponents keep full precision
    frac = q - math.floor(q)
    return cmath.exp(2j * math.pi * float(frac))


@dataclass(frozen=True)
class ExpParams:
    """``alpha_i = exp(2 pi i a_i)`` and ``beta_j = exp(2 pi i b_j)``."""

    alpha: tuple[complex, complex, complex]
    beta: tuple[complex, complex, complex, complex]

    def __post_init__(self):
        if any(v == 0 for v in self.alpha + self.beta):
            raise ValueError("exponential parameters must be nonzero")

    def dual(self) -> "ExpParams":
        return ExpParams(tuple(1 / v for v in self.alpha), tuple(1 / v for v in self.beta))


DEFAULT_PARAMS = HGParams(
    (Fraction(1, 2), Fraction(1, 3), Fraction(1, 5)),
    (Fraction(1, 7), Fraction(3, 7), Fraction(1, 11), Fraction(5, 11)),
)

# ---------------------------------------------------------------------------
# symmetry group

#: D4 element names in the column order of the D4 -> S4 table.
D4_NAMES = ("000", "100", "010", "110", "001", "101", "011", "111")


def _d4_perm(s1: int, s2: int, tau: int) -> tuple[int, int, int, int]:
    # new row r = (b_{tau(r), sigma_r(1)}, b_{tau(r), sigma_r(2)}); 0-based positions
    t = (1, 0) if tau else (0, 1)
    out = []
    for row, flip in ((0, s1), (1, s2)):
        cols = (1, 0) if flip else (0, 1)
        out.extend(2 * t[row] + c for c in cols)
    return tuple(out)


_D4_PERMS = tuple(_d4_perm(*(int(ch) for ch in name)) for name in D4_NAMES)
_D4_INDEX = {p: i for i, p in enumerate(_D4_PERMS)}
_S3_PERMS = tuple(itertools.permutations(range(3)))


def _then(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    # reindexing by p then by q: c -> c[p] -> c[p][q] = c[p[q[i]]]
    return tuple(p[i] for i in q)


_D4_MUL = tuple(
    tuple(_D4_INDEX[_then(_D4_PERMS[h], _D4_PERMS[g])] for h in range(8)) for g in range(8)
)


@dataclass(frozen=True)
class GroupElement:
    """An element of S3 x D4.

    ``sigma`` permutes the upper parameters (``a_i -> a_{sigma(i)}``, 0-based);
    ``d4`` indexes :data:`D4_NAMES`.
    """

    sigma: tuple[int, int, int] = (0, 1, 2)
    d4: int = 0

    def __post_init__(self):
        if tuple(sorted(self.sigma)) != (0, 1, 2):
            raise ValueError(f"not a permutation of 3 letters: {self.sigma}")
        if not 0 <= self.d4 < 8:
            raise ValueError("d4 index must lie in 0..7")

    @classmethod
    def named(cls, name: str, sigma: Sequence[int] = (0, 1, 2)) -> "GroupElement":
        """Element ``sigma_{name}`` of D4, e.g. ``GroupElement.named("101")``."""
        return cls(tuple(sigma), D4_NAMES.index(name))

    @property
    def name(self) -> str:
        return D4_NAMES[self.d4]

    @property
    def b_perm(self) -> tuple[int, int, int, int]:
        return _D4_PERMS[self.d4]

    @property
    def swaps_x(self) -> bool:
        return self.name[2] == "1"

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        """``g @ h`` acts as ``h`` first, then ``g``."""
        return GroupElement(_then(other.sigma, self.sigma), _D4_MUL[self.d4][other.d4])

    def inverse(self) -> "GroupElement":
        for h in group_elements():
            if (self @ h).is_identity():
                return h
        raise AssertionError("group is not closed")

    def is_identity(self) -> bool:
        return self.sigma == (0, 1, 2) and self.d4 == 0


IDENTITY = GroupElement()


def group_elements() -> list[GroupElement]:
    """All 48 elements of S3 x D4."""
    return [GroupElement(s, d) for s in _S3_PERMS for d in range(8)]


def act_on_params(g: GroupElement, p: HGParams) -> HGParams:
    return HGParams(tuple(p.a[i] for i in g.sigma), tuple(p.b[i] for i in g.b_perm))


def act_on_exp(g: GroupElement, e: ExpParams) -> ExpParams:
    return ExpParams(tuple(e.alpha[i] for i in g.sigma), tuple(e.beta[i] for i in g.b_perm))


def act_on_point(g: GroupElement, x: Sequence[complex]) -> tuple:
    x1, x2 = x
    return (x2, x1) if g.swaps_x else (x1, x2)


def act_on_label(g: GroupElement, label: tuple[int, int]) -> tuple[int, int]:
    """Label ``(j', k')`` with ``F_jk(g.p; g.x) = F_{j'k'}(p; x)``."""
    j, k = label
    perm = g.b_perm
    # b'_{1j} = b[perm[j-1]] and b'_{2k} = b[perm[k+1]] (0-based); 0 stays the unit column
    new1 = perm[j - 1] if j else None
    new2 = perm[k + 1] if k else None
    if g.swaps_x:
        new1, new2 = new2, new1
    jj = 0 if new1 is None else new1 + 1
    kk = 0 if new2 is None else new2 - 1
    return jj, kk


def d4_to_s4(g: GroupElement) -> tuple[int, int, int, int]:
    """Image ``(pi(1), ..., pi(4))`` of the D4 part in S4 (1-based).

    ``g`` sends ``(b1, .., b4)`` to ``(b_{pi(1)}, .., b_{pi(4)})``.  With
    permutation products read left to right this is a homomorphism.
    """
    return tuple(i + 1 for i in g.b_perm)


def cycle_notation(perm: Sequence[int]) -> str:
    """Cycle string for a 1-based image tuple, e.g. ``(4, 3, 1, 2) -> '(1423)'``."""
    seen, cycles = set(), []
    for start in range(1, len(perm) + 1):
        if start in seen or perm[start - 1] == start:
            continue
        cyc, i = [], start
        while i not in seen:
            seen.add(i)
            cyc.append(str(i))
            i = perm[i - 1]
        cycles.append("(" + "".join(cyc) + ")")
    return "".join(cycles) or "id"


def dual(p: HGParams) -> HGParams:
    """Sign change of all seven parameters."""
    return HGParams(tuple(-v for v in p.a), tuple(-v for v in p.b))


# ---------------------------------------------------------------------------
# nonresonance

def _is_int(q: Fraction) -> bool:
    return q.denominator == 1


def _nonintegral_conditions(p: HGParams) -> list[tuple[str, Fraction]]:
    a, b = p.a, p.b
    out = []
    out += [(f"a{i + 1}", a[i]) for i in range(3)]
    out += [(f"b{j + 1}", b[j]) for j in range(4)]
    out += [("b1−b2", b[0] - b[1]), ("b3−b4", b[2] - b[3])]
    for i in range(3):
        for j in range(4):
            out.append((f"a{i + 1}−b{j + 1}", a[i] - b[j]))
    for i in range(3):
        for j in (0, 1):
            for k in (2, 3):
                out.append((f"a{i + 1}−b{j + 1}−b{k + 1}", a[i] - b[j] - b[k]))
    out.append(("a1+a2+a3−b1−b2−b3−b4", sum(a) - sum(b)))
    return out


def check_nonresonance(p: HGParams) -> list[str]:
    """Labels of every violated non-integrality condition (empty list = nonresonant)."""
    return [f"{name} ∈ ℤ" for name, v in _nonintegral_conditions(p) if _is_int(v)]


def check_fundamental_conditions(p: HGParams) -> list[str]:
    """Conditions under which the nine local solutions at the origin exist."""
    b = p.b
    conds = [(f"b{j + 1}", b[j]) for j in range(4)]
    conds += [("b1−b2", b[0] - b[1]), ("b3−b4", b[2] - b[3])]
    return [f"{name} ∈ ℤ" for name, v in conds if _is_int(v)]


def check_infinity_conditions(p: HGParams) -> list[str]:
    a, b = p.a, p.b
    conds = [("b1", b[0]), ("b2", b[1]), ("b1−b2", b[0] - b[1])]
    conds += [("a1−a2", a[0] - a[1]), ("a1−a3", a[0] - a[2]), ("a2−a3", a[1] - a[2])]
    return [f"{name} ∈ ℤ" for name, v in conds if _is_int(v)]


# ---------------------------------------------------------------------------
# solution labels

#: Fixed order of the nine solution labels (j, k).
LABELS = ((0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1), (0, 2), (1, 2), (2, 2))


def solution_orbits() -> list[frozenset]:
    """Orbits of the nine labels under the D4 action."""
    remaining = list(LABELS)
    orbits = []
    while remaining:
        seed = remaining[0]
        orb = frozenset(act_on_label(g, seed) for g in group_elements())
        orbits.append(orb)
        remaining = [lab for lab in remaining if lab not in orb]
    return orbits


# ---------------------------------------------------------------------------
# construction helpers

def random_nonresonant(rng, denominators: Iterable[int] = (5, 7, 9, 11, 13), max_tries: int = 1000) -> HGParams:
    """Random rational parameters in (-1, 1) passing :func:`check_nonresonance`."""
    dens = list(denominators)
    for _ in range(max_tries):
        vals = []
        for _ in range(7):
            d = int(rng.choice(dens))
            n = int(rng.integers(-d + 1, d))
            vals.append(Fraction(n, d))
        p = HGParams(vals[:3], vals[3:])
        if not check_nonresonance(p):
            return p
    raise RuntimeError("could not draw nonresonant parameters")


_TEXT_RE = re.compile(r"^\s*a\s*=\s*([^\s]+)\s+b\s*=\s*([^\s]+)\s*$")


def parse_params(text: str) -> HGParams:
    """Parse ``"a=1/2,1/3,1/5 b=1/7,3/7,1/11,5/11"`` or the JSON object form."""
    s = text.strip()
    if s.startswith("{"):
        obj = json.loads(s)
        return HGParams(tuple(Fraction(str(v)) for v in obj["a"]), tuple(Fraction(str(v)) for v in obj["b"]))
    m = _TEXT_RE.match(s)
    if not m:
        raise ValueError(f"cannot parse parameters: {text!r}")
    a = tuple(Fraction(v) for v in m.group(1).split(","))
    b = tuple(Fraction(v) for v in m.group(2).split(","))
    return HGParams(a, b)
