"""Numerical analytic continuation of the fundamental matrix along loops.

Every path is a chain of segments lying on complex lines
``x = origin + direction * s``; a segment is a map ``t -> s(t)`` on ``[0, 1]``.
The fundamental matrix ``Phi`` (rows: standard monomials, columns: local
solutions) obeys ``dPhi/dt = (P1 x1' + P2 x2') Phi`` along the path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import bisect

from .errors import ClearanceError, EigenError, RootError, SingularMatrixError, StepError, ZeroEntryError
from .fundamental import STANDARD_ORDERS, solution_jet
from .monodromy import M3 as closed_M3
from .monodromy import CircuitMatrix
from .parameters import ExpParams, HGParams
from .series import Truncation
from .weyl import PfaffianSystem, singular_factors

__all__ = [
    "Segment",
    "LoopPath",
    "R_on_line",
    "p1_coordinate",
    "build_loops",
    "check_clearance",
    "initial_fundamental_matrix",
    "TransportResult",
    "transport",
    "numeric_circuit_matrix",
    "RoundTrip",
    "round_trip",
    "GaugeReport",
    "gauge_compare_M3",
]

DEFAULT_EPS = (0.1, 0.05)
DEFAULT_DELTA = 0.2


@dataclass(frozen=True)
class Segment:
    """``x(t) = origin + direction * s(t)`` for ``t`` in ``[0, 1]``."""

    origin: tuple[complex, complex]
    direction: tuple[complex, complex]
    s: Callable[[float], complex]
    ds: Callable[[float], complex]
    kind: str = ""

    def point(self, t: float) -> tuple[complex, complex]:
        s = self.s(t)
        return self.origin[0] + self.direction[0] * s, self.origin[1] + self.direction[1] * s

    def velocity(self, t: float) -> tuple[complex, complex]:
        d = self.ds(t)
        return self.direction[0] * d, self.direction[1] * d

    def reversed(self) -> "Segment":
        s, ds = self.s, self.ds
        return Segment(self.origin, self.direction, lambda t: s(1 - t), lambda t: -ds(1 - t), self.kind)

    def to_json(self, samples: int = 3) -> dict:
        pts = [self.point(t) for t in np.linspace(0, 1, samples)]
        return {"kind": self.kind, "samples": [[[z.real, z.imag] for z in p] for p in pts]}


@dataclass(frozen=True)
class LoopPath:
    segments: tuple[Segment, ...]
    name: str = ""

    @property
    def start(self) -> tuple[complex, complex]:
        return self.segments[0].point(0.0)

    @property
    def end(self) -> tuple[complex, complex]:
        return self.segments[-1].point(1.0)

    def __add__(self, other: "LoopPath") -> "LoopPath":
        """Traverse ``self`` first, then ``other``."""
        return LoopPath(self.segments + other.segments, f"{self.name}{other.name}")

    def reversed(self) -> "LoopPath":
        return LoopPath(tuple(s.reversed() for s in reversed(self.segments)), f"({self.name})⁻¹")

    def winding(self, coord: int, centre: complex = 0, samples: int = 2048) -> int:
        """Winding number of coordinate ``coord`` around ``centre``."""
        total = 0.0
        for seg in self.segments:
            ts = np.linspace(0, 1, samples)
            z = np.array([seg.point(t)[coord] for t in ts]) - centre
            total += float(np.sum(np.angle(z[1:] / z[:-1])))
        return round(total / (2 * math.pi))

    def to_json(self) -> dict:
        return {"name": self.name, "segments": [s.to_json() for s in self.segments]}


def _line(origin, direction, s, ds, kind) -> Segment:
    return Segment(tuple(complex(v) for v in origin), tuple(complex(v) for v in direction), s, ds, kind)


def _straight(a: complex, b: complex) -> tuple[Callable, Callable]:
    return (lambda t: a + (b - a) * t), (lambda t: (b - a) + 0j)


def _circle(centre: complex, radius: float, phase0: float) -> tuple[Callable, Callable]:
    """Positively oriented full circle starting at ``centre + radius e^{i phase0}``."""
    w = 2j * math.pi
    return (
        lambda t: centre + radius * cmath.exp(1j * phase0 + w * t),
        lambda t: radius * w * cmath.exp(1j * phase0 + w * t),
    )


# ---------------------------------------------------------------------------
# loops

def R_on_line(r: float, eps1: float, eps2: float) -> float:
    return (1 - (eps1 + eps2) * r) ** 3 - 27 * eps1 * eps2 * r * r


def p1_coordinate(eps1: float, eps2: float) -> float:
    """Smallest real ``r > 1`` with ``R(eps1 r, eps2 r) = 0``."""
    if not (0 < eps2 < eps1 <= 0.125):
        raise ValueError("need 0 < eps2 < eps1 <= 1/8")

    def f(r):
        return R_on_line(r, eps1, eps2)

    if f(1.0) <= 0:
        raise RootError("base point is not on the positive side of R")
    grid = np.geomspace(1.0, 1e6, 4000)
    vals = [f(r) for r in grid]
    for lo, hi, flo, fhi in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if flo > 0 >= fhi:
            return bisect(f, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)
    raise RootError("no real root of R on the line in (1, 1e6)")


def build_loops(
    eps1: float = DEFAULT_EPS[0], eps2: float = DEFAULT_EPS[1], delta: float = DEFAULT_DELTA
) -> tuple[LoopPath, LoopPath, LoopPath]:
    """The three generating loops based at ``(eps1, eps2)``.

    ``rho1`` and ``rho2`` turn once around ``x1 = 0`` and ``x2 = 0``; ``rho3`` runs
    along the real line ``(eps1 r, eps2 r)`` to ``r1 - delta``, circles ``r1`` once
    positively and returns.
    """
    r1 = p1_coordinate(eps1, eps2)
    others = [z for z in np.roots(_cubic_in_r(eps1, eps2)) if abs(z - r1) > 1e-9]
    limit = min([r1 - 1] + [abs(z - r1) for z in others])
    if not 0 < delta < limit:
        raise ValueError(f"delta must lie in (0, {limit:.4g})")
    base = (eps1, eps2)
    rho1 = LoopPath((_line((0, eps2), (1, 0), *_circle(0, eps1, 0.0), "circle x1"),), "ρ1")
    rho2 = LoopPath((_line((eps1, 0), (0, 1), *_circle(0, eps2, 0.0), "circle x2"),), "ρ2")
    a = r1 - delta
    rho3 = LoopPath(
        (
            _line((0, 0), base, *_straight(1.0, a), "segment"),
            _line((0, 0), base, *_circle(r1, delta, math.pi), "circle P1"),
            _line((0, 0), base, *_straight(a, 1.0), "segment"),
        ),
        "ρ3",
    )
    return rho1, rho2, rho3


def _cubic_in_r(eps1: float, eps2: float) -> np.ndarray:
    s = eps1 + eps2
    # (1 - s r)^3 - 27 eps1 eps2 r^2
    return np.array([-(s**3), 3 * s * s - 27 * eps1 * eps2, -3 * s, 1.0])


def _restricted_roots(pf: PfaffianSystem, seg: Segment) -> np.ndarray:
    """Roots in ``s`` of the squarefree denominator of the Pfaffian on the segment's line."""
    P = np.polynomial.polynomial
    roots = []
    for f, _, _ in singular_factors(pf).factors:
        terms = [(tuple(int(e) for e in k), int(v)) for k, v in f.to_dict().items()]
        big = max(abs(c) for _, c in terms)
        poly = np.zeros(1, dtype=complex)
        for (i, j), c in terms:
            l1 = P.polypow([seg.origin[0], seg.direction[0]], i)
            l2 = P.polypow([seg.origin[1], seg.direction[1]], j)
            poly = P.polyadd(poly, (c / big) * P.polymul(l1, l2))
        poly = np.trim_zeros(np.asarray(poly), "b")
        if poly.size > 1:
            roots.extend(P.polyroots(poly))
    return np.array(roots, dtype=complex)


def check_clearance(pf: PfaffianSystem, path: LoopPath, min_clearance: float, samples: int = 256) -> float:
    """Smallest distance, in line coordinates, from the path to the singular locus."""
    worst = math.inf
    for seg in path.segments:
        roots = _restricted_roots(pf, seg)
        if roots.size == 0:
            continue
        s = np.array([seg.s(t) for t in np.linspace(0, 1, samples)])
        worst = min(worst, float(np.min(np.abs(s[:, None] - roots[None, :]))))
    if worst < min_clearance:
        raise ClearanceError(f"path {path.name} passes within {worst:.3g} of the singular locus")
    return worst


# ---------------------------------------------------------------------------
# transport

def initial_fundamental_matrix(
    p: HGParams, pf: PfaffianSystem, x: Sequence[float] = DEFAULT_EPS, t: Truncation = Truncation(n_max=160)
) -> np.ndarray:
    """``Phi0[m, jk] = (d^m F_jk)(x)`` for the standard monomials ``m`` in the Pfaffian basis order."""
    if [tuple(m) for m in pf.basis] != list(STANDARD_ORDERS):
        raise ValueError("Pfaffian basis order differs from the solution-jet order")
    phi = solution_jet(p, x, t)
    cond = np.linalg.cond(phi)
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularMatrixError(f"fundamental matrix has condition number {cond:.3g}")
    return phi


@dataclass(frozen=True)
class TransportResult:
    end: np.ndarray
    steps: int
    error_estimate: float
    segments: list = field(default_factory=list)


def _equilibrate(phi: np.ndarray, sweeps: int = 4) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal ``S, D`` making the rows and columns of ``S phi D`` comparable in size."""
    S = np.ones(phi.shape[0])
    D = np.ones(phi.shape[1])
    for _ in range(sweeps):
        scaled = np.abs(S[:, None] * phi * D[None, :])
        S /= np.sqrt(np.max(scaled, axis=1))
        scaled = np.abs(S[:, None] * phi * D[None, :])
        D /= np.sqrt(np.max(scaled, axis=0))
    return S, D


def _transport_once(pf: PfaffianSystem, path: LoopPath, phi0: np.ndarray, rtol: float, atol: float, max_step: float):
    P1, P2 = pf.numeric(0), pf.numeric(1)
    # the system is linear: transport S Phi D with S A S^-1 instead of Phi with A
    S, D = _equilibrate(phi0)
    n = phi0.shape[0]
    y = (S[:, None] * np.asarray(phi0, dtype=complex) * D[None, :]).ravel()
    conj = S[:, None] / S[None, :]
    steps = 0
    for seg in path.segments:

        def rhs(t, y, seg=seg):
            x1, x2 = seg.point(t)
            v1, v2 = seg.velocity(t)
            A = (P1(x1, x2) * v1 + P2(x1, x2) * v2) * conj
            return (A @ y.reshape(n, -1)).ravel()

        sol = solve_ivp(rhs, (0.0, 1.0), y, method="DOP853", rtol=rtol, atol=atol, max_step=max_step)
        if sol.status != 0:
            raise StepError(f"integration failed on {seg.kind}: {sol.message}")
        y = sol.y[:, -1]
        steps += sol.t.size - 1
    end = y.reshape(phi0.shape) / S[:, None] / D[None, :]
    return end, steps


def transport(
    pf: PfaffianSystem,
    path: LoopPath,
    phi0: np.ndarray,
    rtol: float = 1e-13,
    atol: float = 1e-15,
    max_step: float = 1 / 32,
    estimate_error: bool = True,
) -> TransportResult:
    """Continue ``phi0`` along ``path`` with an adaptive order-8 Runge-Kutta scheme.

    Rows and columns are equilibrated first, so ``atol`` applies to entries of
    unit size.  The error estimate compares against a second run at a hundred
    times the tolerances.
    """
    end, steps = _transport_once(pf, path, phi0, rtol, atol, max_step)
    err = math.nan
    if estimate_error:
        rough, _ = _transport_once(pf, path, phi0, 100 * rtol, 100 * atol, max_step)
        err = float(np.max(np.abs(np.linalg.solve(phi0, rough - end))))
    return TransportResult(end, steps, err)


def numeric_circuit_matrix(phi0: np.ndarray, phi1: np.ndarray, label: str = "") -> CircuitMatrix:
    """``M = (Phi0^-1 Phi1)^T``, so that continuation sends the solution vector ``F`` to ``M F``."""
    return CircuitMatrix(np.linalg.solve(phi0, phi1).T, label)


@dataclass(frozen=True)
class RoundTrip:
    state: float
    basis: float

    def to_json(self) -> dict:
        return {"state": self.state, "basis": self.basis}


def round_trip(pf: PfaffianSystem, path: LoopPath, phi0: np.ndarray, **kwargs) -> RoundTrip:
    """Transport along ``path`` and back again.

    ``state`` is the largest relative change of a column of the fundamental
    matrix.  ``basis`` is the defect ``max |Phi0^-1 Phi_back - I|`` measured in
    the initial solutions, which also carries the conditioning of ``Phi0``.
    """
    kwargs.setdefault("estimate_error", False)
    there = transport(pf, path, phi0, **kwargs).end
    back = transport(pf, path.reversed(), there, **kwargs).end
    cols = np.linalg.norm(back - phi0, axis=0) / np.linalg.norm(phi0, axis=0)
    basis = np.max(np.abs(np.linalg.solve(phi0, back) - np.eye(phi0.shape[1])))
    return RoundTrip(float(np.max(cols)), float(basis))


@dataclass(frozen=True)
class GaugeReport:
    residual: float
    eigenvalue: complex
    eigenvector: np.ndarray
    normalized: np.ndarray

    def to_json(self) -> dict:
        return {
            "residual": self.residual,
            "eigenvalue": [self.eigenvalue.real, self.eigenvalue.imag],
            "eigenvector": [[complex(v).real, complex(v).imag] for v in self.eigenvector],
        }


def gauge_compare_M3(m3num, e: ExpParams, separation: float = 1e-6) -> GaugeReport:
    """Rescale the solutions so that the left ``lam``-eigenvector becomes ``(1, ..., 1)`` and compare."""
    m = m3num.matrix if isinstance(m3num, CircuitMatrix) else np.asarray(m3num, dtype=complex)
    vals, vecs = np.linalg.eig(m.T)
    dist = np.abs(vals - 1)
    k = int(np.argmax(dist))
    rest = np.delete(dist, k)
    if dist[k] <= separation or (rest.size and np.max(rest) >= dist[k] - separation):
        raise EigenError("no simple eigenvalue separated from the eigenvalue 1")
    v = vecs[:, k]
    mags = np.abs(v)
    if mags.min() / mags.max() < 1e-8:
        raise ZeroEntryError("the eigenvalue's left eigenvector has a vanishing entry")
    v = v / v[0]
    normalized = np.diag(v) @ m @ np.diag(1 / v)
    residual = float(np.max(np.abs(normalized - closed_M3(e).matrix)))
    return GaugeReport(residual, complex(vals[k]), v, normalized)
