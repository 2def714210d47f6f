"""Verification suites: each returns a list of check records with residual and tolerance."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import mpmath
import numpy as np

from . import continuation as cont
from .integrals import coefficient_identity_check, dirichlet_closed, dirichlet_quadrature
from .intersection import I20_explicit, all_self_intersections, intersection_ratios
from .monodromy import M1, M2, M3, N2, H_matrix, eigen_structure, exp_params_mp, lam, verify_relations
from .parameters import HGParams, random_nonresonant
from .series import check_pde_coefficients
from .weyl import (
    PFAFFIAN_BASIS,
    groebner,
    pfaffian_for,
    singular_factors,
    standard_monomials,
    system_operators,
    verify_R_identities,
)

__all__ = ["Check", "SUITES", "run_suite"]

EXPECTED_LEADS = {(5, 0), (3, 1), (1, 2), (0, 3)}


@dataclass
class Check:
    check: str
    passed: bool
    residual: float | str | None = None
    tolerance: float | None = None
    detail: object = None

    def to_json(self) -> dict:
        out = {"check": self.check, "status": "pass" if self.passed else "fail"}
        if self.residual is not None:
            out["residual"] = self.residual
        if self.tolerance is not None:
            out["tolerance"] = self.tolerance
        if self.detail is not None:
            out["detail"] = self.detail
        return out


def _le(name: str, value: float, tol: float, detail=None) -> Check:
    return Check(name, bool(value <= tol), float(value), tol, detail)


def suite_pde(p: HGParams, cfg) -> list[Check]:
    res = check_pde_coefficients(p, 40)
    return [Check("pde coefficients n1+n2<=40", bool(res), str(res.residual), 0.0, res.first_offending)]


def _rank_check(p: HGParams, tag: str) -> list[Check]:
    t = time.perf_counter()
    G = groebner(system_operators(p))
    elapsed = time.perf_counter() - t
    std = standard_monomials(G)
    leads = {g.leading_monomial() for g in G}
    return [
        Check(f"rank {tag}", len(std) == 9, None, None, {"rank": len(std), "seconds": round(elapsed, 3)}),
        Check(f"standard monomials {tag}", sorted(std) == sorted(PFAFFIAN_BASIS), None, None, [list(m) for m in std]),
        Check(f"initial terms {tag}", leads == EXPECTED_LEADS, None, None, sorted(list(m) for m in leads)),
        Check(f"runtime {tag}", elapsed <= 60, elapsed, 60.0),
    ]


def suite_rank(p: HGParams, cfg) -> list[Check]:
    out = _rank_check(p, "params")
    rng = np.random.default_rng(cfg.seed)
    for k in range(3):
        out += _rank_check(random_nonresonant(rng), f"draw {k + 1}")
    return out


def suite_pfaffian(p: HGParams, cfg) -> list[Check]:
    pf = pfaffian_for(p)
    report = singular_factors(pf)
    ids = verify_R_identities()
    out = [
        Check("integrability", pf.is_integrable()),
        Check("factors x1, x2, R present", {"x1", "x2", "R"} <= report.tags(), None, None, report.to_json()),
    ]
    out += [Check(f"R identity: {name}", ok) for name, ok in ids.items()]
    return out


def suite_monodromy(p: HGParams, cfg) -> list[Check]:
    e = p.exp()
    tol = 1e-12
    out = [_le(name, r, tol) for name, r in verify_relations(e).items()]
    rep = N2(e)
    out += [
        _le("N2 off-block", rep.off_block, tol),
        _le("det N2 = lam^3", rep.det_residual, tol),
        _le("N2 top-left block", rep.top_left_residual, tol),
        _le("(1,1,1,0,...) eigenvector of N2", rep.eigvec_residual, tol),
    ]
    eig = eigen_structure(M3(e), tol=1e-9, method="numeric")
    mults = sorted(m for _, m in eig)
    lam_ok = any(m == 1 and abs(v - lam(e)) <= 1e-9 for v, m in eig)
    out.append(Check("M3 eigenvalues {lam:1, 1:8}", mults == [1, 8] and lam_ok, None, 1e-9))
    rng = np.random.default_rng(cfg.seed)
    for k, q in enumerate([p] + [random_nonresonant(rng) for _ in range(5)]):
        with mpmath.workdps(40):
            res = verify_relations(exp_params_mp(q))
        out.append(_le(f"M1M2=M2M1 exactly, set {k}", res.pop("M1M2=M2M1"), 0.0, q.to_text()))
        out.append(_le(f"relations at 40 digits, set {k}", max(res.values()), tol, q.to_text()))
    return out


def suite_intersection(p: HGParams, cfg) -> list[Check]:
    e = p.exp()
    ratio = np.max(np.abs(intersection_ratios(e) - H_matrix(e)))
    i20 = abs(I20_explicit(e) - all_self_intersections(e)[2])
    return [_le("I_jk / I_00 = h_jk", ratio, 1e-12), _le("I_20 explicit product", i20, 1e-12)]


def suite_integrals(p: HGParams, cfg) -> list[Check]:
    t = time.perf_counter()
    worst = max(coefficient_identity_check(p, n1, n2) for n1 in range(6) for n2 in range(6))
    quad = 0.0
    for args in ((1, 1, 1), (2, 1, 1), (0.3, 0.7, 1.2), (2.5, 1.3, 0.2)):
        closed = dirichlet_closed(*args).real
        quad = max(quad, abs(dirichlet_quadrature(*args) - closed) / abs(closed))
    elapsed = time.perf_counter() - t
    return [
        _le("coefficient identity n1,n2<=5", worst, 1e-10),
        _le("Dirichlet quadrature vs closed form", quad, 1e-10),
        _le("runtime", elapsed, 5.0),
    ]


def suite_continuation(p: HGParams, cfg) -> list[Check]:
    e = p.exp()
    pf = pfaffian_for(p)
    loops = cont.build_loops(cfg.eps1, cfg.eps2, cfg.delta)
    phi0 = cont.initial_fundamental_matrix(p, pf, (cfg.eps1, cfg.eps2))
    out = []
    mats = []
    for path, ref in zip(loops, (M1(e), M2(e), None)):
        cont.check_clearance(pf, path, min(cfg.eps1, cfg.eps2, cfg.delta) / 2)
        res = cont.transport(pf, path, phi0, estimate_error=False)
        m = cont.numeric_circuit_matrix(phi0, res.end, path.name)
        mats.append(m)
        if ref is not None:
            out.append(_le(f"{path.name} numeric vs closed form", float(np.max(np.abs(m.matrix - ref.matrix))), 1e-6))
    g = cont.gauge_compare_M3(mats[2], e)
    mags = np.abs(g.eigenvector)
    out.append(_le("ρ3 gauge-normalised vs closed-form M3", g.residual, 1e-5))
    out.append(Check("λ-eigenvector has no vanishing entry", bool(mags.min() / mags.max() > 1e-8), float(mags.min() / mags.max()), 1e-8))
    return out


SUITES: dict[str, Callable] = {
    "pde": suite_pde,
    "rank": suite_rank,
    "pfaffian": suite_pfaffian,
    "monodromy": suite_monodromy,
    "intersection": suite_intersection,
    "integrals": suite_integrals,
    "continuation": suite_continuation,
}


def run_suite(name: str, p: HGParams, cfg) -> list[Check]:
    return SUITES[name](p, cfg)
