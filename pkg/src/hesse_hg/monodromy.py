"""Closed-form circuit matrices of the rank-9 system and their identities.

The nine local solutions at the origin form a column vector ``F``; continuation
along a loop sends ``F`` to ``M F``.  For a word of loops the matrices multiply
in the order the loops are written: the loop ``rho rho'`` has matrix
``M_rho @ M_rho'``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .errors import ClusterError, ParameterError
from .parameters import LABELS, ExpParams, HGParams

__all__ = [
    "CircuitMatrix",
    "M1",
    "M2",
    "M3",
    "lam",
    "H_matrix",
    "m3_scalar",
    "N2",
    "N2Report",
    "reflection",
    "monodromy_word",
    "parse_word",
    "verify_relations",
    "exp_params_mp",
    "eigen_structure",
    "matrix_to_json",
    "LABEL_NAMES",
]

LABEL_NAMES = [f"{j}{k}" for j, k in LABELS]
_NEAR_ZERO = 1e-13


@dataclass(frozen=True)
class CircuitMatrix:
    matrix: np.ndarray
    label: str = ""

    def __matmul__(self, other: "CircuitMatrix") -> "CircuitMatrix":
        return CircuitMatrix(self.matrix @ other.matrix, f"{self.label}·{other.label}".strip("·"))

    def inverse(self) -> "CircuitMatrix":
        return CircuitMatrix(np.linalg.inv(self.matrix), f"({self.label})⁻¹")

    def to_json(self) -> dict:
        return {"label": self.label, "order": LABEL_NAMES, "matrix": matrix_to_json(self.matrix)}


def matrix_to_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def exp_params_mp(p: HGParams) -> ExpParams:
    """Exponential parameters as mpmath numbers at the working precision of the caller.

    Every function of this module accepts the result and then computes in
    object arrays, so call both inside the same ``mpmath.workdps`` block.
    """

    def ex(q):
        return mpmath.expjpi(2 * (mpmath.mpf(q.numerator) / q.denominator))

    return ExpParams(tuple(ex(v) for v in p.a), tuple(ex(v) for v in p.b))


def _dtype(e: ExpParams):
    return object if isinstance(e.alpha[0], mpmath.mpc) else complex


def _inv(m: np.ndarray) -> np.ndarray:
    if m.dtype != object:
        return np.linalg.inv(m)
    return np.array(mpmath.inverse(mpmath.matrix(m.tolist())).tolist(), dtype=object)


def _det(m: np.ndarray):
    if m.dtype != object:
        return np.linalg.det(m)
    return mpmath.det(mpmath.matrix(m.tolist()))


def _maxabs(m) -> float:
    return float(np.max(np.abs(np.asarray(m))))


def M1(e: ExpParams) -> CircuitMatrix:
    b1, b2 = e.beta[0], e.beta[1]
    return CircuitMatrix(np.diag([1, 1 / b1, 1 / b2] * 3).astype(_dtype(e)), "ρ1")


def M2(e: ExpParams) -> CircuitMatrix:
    b3, b4 = e.beta[2], e.beta[3]
    return CircuitMatrix(np.diag([1] * 3 + [1 / b3] * 3 + [1 / b4] * 3).astype(_dtype(e)), "ρ2")


def lam(e: ExpParams) -> complex:
    """Non-trivial eigenvalue ``beta1 beta2 beta3 beta4 / (alpha1 alpha2 alpha3)`` of ``M3``."""
    return np.prod(e.beta) / np.prod(e.alpha)


def _nonzero(value: complex, what: str) -> complex:
    if abs(value) < _NEAR_ZERO:
        raise ParameterError(f"{what} vanishes", [what])
    return value


def H_matrix(e: ExpParams) -> np.ndarray:
    """Diagonal entries ``(1, h10, h20, h01, h11, h21, h02, h12, h22)``."""
    a1, a2, a3 = e.alpha
    b1, b2, b3, b4 = e.beta

    def up(z):
        return (a1 - z) * (a2 - z) * (a3 - z)

    base = _nonzero((a1 - 1) * (a2 - 1) * (a3 - 1), "(α1−1)(α2−1)(α3−1)")
    d12 = _nonzero(b1 - b2, "β1−β2")
    d34 = _nonzero(b3 - b4, "β3−β4")
    h = [
        1,
        up(b1) * (b2 - 1) / (base * b1 * d12),
        up(b2) * (b1 - 1) / (base * b2 * -d12),
        up(b3) * (b4 - 1) / (base * b3 * d34),
        up(b1 * b3) * (b2 - 1) * (b4 - 1) / (base * b1 * b3 * d12 * d34),
        up(b2 * b3) * (b1 - 1) * (b4 - 1) / (base * b2 * b3 * -d12 * d34),
        up(b4) * (b3 - 1) / (base * b4 * -d34),
        up(b1 * b4) * (b2 - 1) * (b3 - 1) / (base * b1 * b4 * d12 * -d34),
        up(b2 * b4) * (b1 - 1) * (b3 - 1) / (base * b2 * b4 * -d12 * -d34),
    ]
    return np.array(h, dtype=_dtype(e))


def m3_scalar(e: ExpParams) -> complex:
    """``(1 - lam) / (1 H 1^T)`` in cancelled form.

    ``1 H 1^T`` carries the factor ``alpha1 alpha2 alpha3 - beta1 beta2 beta3 beta4``,
    exactly as ``1 - lam`` does; after cancelling it the quotient is
    ``prod (alpha_i - 1) prod beta_j / (prod alpha_i prod (beta_j - 1))``, which
    stays finite when ``lam = 1``.
    """
    num = np.prod([a - 1 for a in e.alpha]) * np.prod(e.beta)
    den = np.prod(e.alpha) * np.prod([b - 1 for b in e.beta])
    _nonzero(den, "∏(βj−1)")
    return num / den


def reflection(h: Sequence[complex], c: complex) -> np.ndarray:
    """``I - c H 1^T 1`` for a diagonal ``H`` given by its entries."""
    h = np.asarray(h)
    dt = object if h.dtype == object else complex
    return np.eye(len(h), dtype=dt) - c * np.outer(h, np.ones(len(h), dtype=dt))


def M3(e: ExpParams) -> CircuitMatrix:
    return CircuitMatrix(reflection(H_matrix(e), m3_scalar(e)), "ρ3")


_GENERATORS = {1: M1, 2: M2, 3: M3}


def parse_word(text: str) -> list[int]:
    """``"3,2,3,-2"`` -> ``[3, 2, 3, -2]``; an empty string is the empty word."""
    text = text.strip()
    if not text:
        return []
    word = [int(tok) for tok in text.replace(" ", "").split(",")]
    if any(abs(g) not in (1, 2, 3) for g in word):
        raise ValueError("word letters must be ±1, ±2 or ±3")
    return word


def monodromy_word(word: Iterable[int], e: ExpParams) -> CircuitMatrix:
    """Product ``M_{w1} M_{w2} ...``; negative letters are inverse loops."""
    cache: dict[int, np.ndarray] = {}
    out = np.eye(9, dtype=_dtype(e))
    names = []
    for g in word:
        if g not in cache:
            m = _GENERATORS[abs(g)](e).matrix
            cache[g] = m if g > 0 else _inv(m)
        out = out @ cache[g]
        names.append(f"ρ{abs(g)}" + ("⁻¹" if g < 0 else ""))
    return CircuitMatrix(out, "".join(names) or "id")


N2_WORD = [3, 2, 3, -2, 2, 2, 3, -2, -2]


@dataclass(frozen=True)
class N2Report:
    matrix: CircuitMatrix
    off_block: float
    det_residual: float
    top_left_residual: float
    eigvec_residual: float

    def to_json(self) -> dict:
        return {
            "matrix": self.matrix.to_json(),
            "off_block_max": self.off_block,
            "det_residual": self.det_residual,
            "top_left_residual": self.top_left_residual,
            "eigenvector_residual": self.eigvec_residual,
        }


def N2(e: ExpParams) -> N2Report:
    """``M3 (M2 M3 M2^-1)(M2^2 M3 M2^-2)`` with its block-structure diagnostics."""
    n2 = monodromy_word(N2_WORD, e)
    m = n2.matrix
    mask = np.kron(np.eye(3), np.ones((3, 3))) == 0
    off_block = _maxabs(m[mask])
    det_res = float(abs(_det(m) - lam(e) ** 3))
    h = H_matrix(e)
    lam_p = e.beta[0] * e.beta[1] / np.prod(e.alpha)
    top = reflection(h[:3], (1 - lam_p) / _nonzero(np.sum(h[:3]), "1 + h10 + h20"))
    top_res = _maxabs(m[:3, :3] - top)
    v = np.array([1, 1, 1, 0, 0, 0, 0, 0, 0], dtype=m.dtype)
    w = v @ m
    ev = _maxabs(w - (w[0] / v[0]) * v)
    return N2Report(n2, off_block, det_res, top_res, ev)


def verify_relations(e: ExpParams, H: np.ndarray | None = None) -> dict[str, float]:
    """Max-entry residuals of the group relations and of the H-invariance.

    ``H`` overrides the diagonal of the closed-form ``H`` in the invariance
    check only; useful for sensitivity tests.  With :func:`exp_params_mp` input
    the residuals reflect the mpmath working precision.
    """
    m1, m2, m3 = (f(e).matrix for f in (M1, M2, M3))
    ed = e.dual()
    m1d, m2d, m3d = (f(ed).matrix for f in (M1, M2, M3))
    Hd = np.diag(H_matrix(e) if H is None else np.asarray(H, dtype=_dtype(e)))

    def res(a, b):
        return _maxabs(a - b)

    mp = np.linalg.matrix_power
    return {
        "M1M2=M2M1": res(m1 @ m2, m2 @ m1),
        "(M1M3)^3=(M3M1)^3": res(mp(m1 @ m3, 3), mp(m3 @ m1, 3)),
        "(M2M3)^3=(M3M2)^3": res(mp(m2 @ m3, 3), mp(m3 @ m2, 3)),
        "M1 H M1v^T=H": res(m1 @ Hd @ m1d.T, Hd),
        "M2 H M2v^T=H": res(m2 @ Hd @ m2d.T, Hd),
        "M3 H M3v^T=H": res(m3 @ Hd @ m3d.T, Hd),
        "det M3=lam": float(abs(_det(m3) - lam(e))),
    }


def eigen_structure(M, tol: float = 1e-9, method: str = "auto") -> list[tuple[complex, int]]:
    """Eigenvalues grouped into clusters with multiplicities, largest cluster first.

    Numerically computed eigenvalues within ``tol`` of each other form one
    cluster; clusters closer than ``1000 tol`` raise :class:`ClusterError`.
    A defective eigenvalue splits by about ``sqrt(eps)``, so with
    ``method="auto"`` a failed clustering of ``I + (rank one)`` falls back to the
    exact spectrum of such a matrix: 1 with multiplicity ``n - 1`` and ``trace - (n - 1)``.
    """
    m = M.matrix if isinstance(M, CircuitMatrix) else np.asarray(M, dtype=complex)
    try:
        return _cluster(np.linalg.eigvals(m), tol)
    except ClusterError:
        if method != "auto":
            raise
        n = m.shape[0]
        s = np.linalg.svd(m - np.eye(n), compute_uv=False)
        if s.size < 2 or s[1] > 1e-12 * max(1.0, float(np.linalg.norm(m))):
            raise
        other = complex(np.trace(m) - (n - 1))
        if abs(other - 1) <= tol:
            return [(1.0 + 0j, n)]
        return [(1.0 + 0j, n - 1), (other, 1)]


def _cluster(vals: np.ndarray, tol: float) -> list[tuple[complex, int]]:
    clusters: list[list[complex]] = []
    for v in vals:
        hits = [c for c in clusters if min(abs(v - w) for w in c) <= tol]
        if not hits:
            clusters.append([v])
            continue
        merged = [v] + [w for c in hits for w in c]
        clusters = [c for c in clusters if all(c is not h for h in hits)] + [merged]
    centres = [np.mean(c) for c in clusters]
    for i in range(len(centres)):
        for j in range(i + 1, len(centres)):
            gap = abs(centres[i] - centres[j])
            if gap < 1e3 * tol:
                raise ClusterError(f"eigenvalue clusters separated by only {gap:.2e}")
    out = [(complex(np.mean(c)), len(c)) for c in clusters]
    return sorted(out, key=lambda t: (-t[1], t[0].real, t[0].imag))
