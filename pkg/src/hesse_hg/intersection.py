"""Self-intersection numbers of the twisted cycles attached to the nine local solutions."""

from __future__ import annotations

import numpy as np

from .errors import ParameterError
from .monodromy import LABEL_NAMES
from .parameters import LABELS, ExpParams, GroupElement, act_on_exp, act_on_label

__all__ = [
    "triangle_factors",
    "base_self_intersections",
    "all_self_intersections",
    "I20_explicit",
    "intersection_ratios",
    "DERIVATIONS",
]


def _q(num, den, what: str) -> complex:
    if abs(den) < 1e-13:
        raise ParameterError(f"{what}: vanishing denominator", [what])
    return num / den


def triangle_factors(e: ExpParams) -> tuple[complex, complex]:
    """The two one-dimensional factors whose product is ``I_00``."""
    a1, a2, _ = e.alpha
    b1, b2, b3, b4 = e.beta
    t1 = _q(1 - 1 / a1, (1 - 1 / b1) * (1 - 1 / b3) * (1 - b1 * b3 / a1), "triangle 1")
    t2 = _q(1 - 1 / a2, (1 - 1 / b2) * (1 - 1 / b4) * (1 - b2 * b4 / a2), "triangle 2")
    return t1, t2


def base_self_intersections(e: ExpParams) -> dict[tuple[int, int], complex]:
    """``I_jk`` for ``(00), (10), (11), (21)``."""
    a1, a2, a3 = e.alpha
    b1, b2, b3, b4 = e.beta
    i00 = _q((a1 - 1) * b1 * b3, (1 - b1) * (1 - b3) * (a1 - b1 * b3), "I00") * _q(
        (a2 - 1) * b2 * b4, (1 - b2) * (1 - b4) * (a2 - b2 * b4), "I00"
    )
    i10 = _q((a1 - b1) * (a3 - b1) * b3, (a1 - b1 * b3) * (a3 - 1) * (1 - b1) * (1 - b3), "I10") * _q(
        (a2 - b1) * b2 * b4, (a2 - b2 * b4) * (b2 - b1) * (1 - b4), "I10"
    )
    i11 = _q(a3 - b1 * b3, (1 - b1) * (1 - b3) * (a3 - 1), "I11") * _q(
        (a2 - b1 * b3) * b2 * b4, (b2 - b1) * (b4 - b3) * (a2 - b2 * b4), "I11"
    )
    i21 = _q(
        (a1 - b2 * b3) * (a2 - b2 * b3) * b1 * b4,
        (a1 - b1 * b3) * (a2 - b2 * b4) * (b1 - b2) * (b4 - b3),
        "I21",
    ) * _q(a3 - b2 * b3, (a3 - 1) * (1 - b2) * (1 - b3), "I21")
    return {(0, 0): i00, (1, 0): i10, (1, 1): i11, (2, 1): i21}


#: target label -> (source label, D4 element); the element sends the source solution to the target.
DERIVATIONS = {
    (2, 0): ((1, 0), GroupElement.named("100")),
    (0, 1): ((1, 0), GroupElement.named("001")),
    (0, 2): ((1, 0), GroupElement.named("101")),
    (2, 2): ((1, 1), GroupElement.named("110")),
    (1, 2): ((2, 1), GroupElement.named("110")),
}
for _target, (_source, _g) in DERIVATIONS.items():
    assert act_on_label(_g, _source) == _target, (_target, _source, _g)


def all_self_intersections(e: ExpParams) -> np.ndarray:
    """All nine ``I_jk`` in label order.

    Missing labels use ``I_target(e) = I_source(g.e) / I_00(g.e) * I_00(e)``.
    """
    base = base_self_intersections(e)
    values = dict(base)
    for target, (source, g) in DERIVATIONS.items():
        moved = base_self_intersections(act_on_exp(g, e))
        values[target] = moved[source] / moved[(0, 0)] * base[(0, 0)]
    return np.array([values[lab] for lab in LABELS], dtype=complex)


def intersection_ratios(e: ExpParams) -> np.ndarray:
    vals = all_self_intersections(e)
    return vals / vals[0]


def I20_explicit(e: ExpParams) -> complex:
    """Closed product for ``I_20``, written out independently of the group action."""
    a1, a2, a3 = e.alpha
    b1, b2, b3, b4 = e.beta
    return _q((a2 - b2) * (a3 - b2) * b4, (a2 - b2 * b4) * (a3 - 1) * (1 - b2) * (1 - b4), "I20") * _q(
        (a1 - b2) * b1 * b3, (a1 - b1 * b3) * (b1 - b2) * (1 - b3), "I20"
    )


def to_json(e: ExpParams) -> dict:
    vals = all_self_intersections(e)
    return {"order": LABEL_NAMES, "values": [[float(v.real), float(v.imag)] for v in vals]}
