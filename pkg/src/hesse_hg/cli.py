"""Command-line interface; every command prints one JSON (or CSV) document on stdout.

Exit codes: 0 success, 1 a verification check failed, 2 usage error,
3 parameter error, 4 point outside the convergence domain, 5 any other
package error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import continuation as cont
from . import intersection, monodromy
from .errors import DomainError, HesseError, ParameterError
from .fundamental import eval_infinity_solutions, eval_solution_vector, to_infinity_coords
from .integrals import GAMMA_LABELS, coefficient_identity_check, gamma_factor
from .parameters import (
    DEFAULT_PARAMS,
    LABELS,
    HGParams,
    check_nonresonance,
    dual,
    parse_params,
)
from .series import Truncation, check_pde_coefficients, hgf_deriv_eval
from .verify import SUITES, run_suite
from .weyl import groebner, pfaffian_for, singular_factors, standard_monomials, system_operators

SCHEMA = "hesse-hg/1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PARAM, EXIT_DOMAIN, EXIT_ERROR = range(6)
SERIES_ONLY = {"eval", "pde-check"}


@dataclass
class RunConfig:
    params: HGParams = DEFAULT_PARAMS
    truncation: Truncation = field(default_factory=Truncation)
    eps1: float = cont.DEFAULT_EPS[0]
    eps2: float = cont.DEFAULT_EPS[1]
    delta: float = cont.DEFAULT_DELTA
    seed: int = 0
    output: str = "json"
    warnings: list[str] = field(default_factory=list)

    def validate(self, command: str) -> None:
        """Nonresonance violations are warnings for series-only commands and errors otherwise."""
        bad = check_nonresonance(self.params)
        if bad and command not in SERIES_ONLY:
            raise ParameterError("parameters are resonant", bad)
        self.warnings = [f"resonant: {v}" for v in bad]


def threads() -> int:
    try:
        return max(1, int(os.environ.get("HESSE_HG_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# serialization

def cx(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}" if obj.denominator != 1 else str(obj.numerator)
    if isinstance(obj, (complex, np.complexfloating)):
        return cx(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else None
    if isinstance(obj, (np.integer, np.bool_)):
        return obj.item()
    return obj


def emit_json(doc: dict) -> str:
    return json.dumps(_jsonable(doc), ensure_ascii=False, allow_nan=False)


def _flatten(obj: Any, prefix: str, rows: list) -> None:
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(v, f"{prefix}.{k}" if prefix else str(k), rows)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten(v, f"{prefix}[{i}]", rows)
    else:
        rows.append((prefix, "" if obj is None else obj))


def emit_csv(doc: dict) -> str:
    """Two columns ``key,value`` with nested keys written as ``a.b[0][1]``."""
    rows: list = []
    _flatten(_jsonable(doc), "", rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("key", "value"))
    w.writerows(rows)
    return buf.getvalue()


def _parse_point(text: str) -> tuple[complex, complex]:
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two coordinates 'x1,x2'")
    try:
        return tuple(complex(s.replace("i", "j")) for s in parts)  # type: ignore[return-value]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_pair(text: str) -> tuple[int, int]:
    try:
        m1, m2 = (int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected two integers 'm1,m2'") from None
    return m1, m2


def _load_params(text: str | None) -> HGParams:
    if text is None:
        return DEFAULT_PARAMS
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            text = fh.read()
    return parse_params(text)


# ---------------------------------------------------------------------------
# commands

def _labels():
    return [f"{j}{k}" for j, k in LABELS]


def cmd_eval(cfg: RunConfig, args) -> dict:
    sv = hgf_deriv_eval(cfg.params, args.x, args.deriv, cfg.truncation)
    return {
        "x": [cx(v) for v in args.x],
        "derivative": list(args.deriv),
        "value": cx(sv.value),
        "terms_used": sv.terms_used,
        "tail_estimate": sv.tail_estimate,
    }


def cmd_fundsys(cfg: RunConfig, args) -> dict:
    vals = eval_solution_vector(cfg.params, args.x, cfg.truncation)
    return {"x": [cx(v) for v in args.x], "labels": _labels(), "values": [cx(v) for v in vals]}


def cmd_infinity(cfg: RunConfig, args) -> dict:
    y = to_infinity_coords(args.x)
    vals = eval_infinity_solutions(cfg.params, y, cfg.truncation)
    labels = [f"a{i}/{fam}" for i in (1, 2, 3) for fam in ("1", "b1", "b2")]
    return {"x": [cx(v) for v in args.x], "y": [cx(v) for v in y], "labels": labels, "values": [cx(v) for v in vals]}


def cmd_pde_check(cfg: RunConfig, args) -> dict:
    res = check_pde_coefficients(cfg.params, args.N)
    return {
        "N": args.N,
        "status": "pass" if res else "fail",
        "residual": str(res.residual),
        "first_offending": res.first_offending,
    }


def cmd_rank(cfg: RunConfig, args) -> dict:
    G = groebner(system_operators(cfg.params))
    std = standard_monomials(G)
    return {
        "rank": len(std),
        "standard_monomials": [list(m) for m in std],
        "initial_terms": sorted(list(g.leading_monomial()) for g in G),
    }


def cmd_pfaffian(cfg: RunConfig, args) -> dict:
    pf = pfaffian_for(cfg.params)
    return {
        "integrable": pf.is_integrable(),
        "singular_factors": singular_factors(pf).to_json(),
        "system": pf.to_json(),
    }


def _mat(m) -> list:
    return monodromy.matrix_to_json(m.matrix if hasattr(m, "matrix") else m)


def cmd_matrices(cfg: RunConfig, args) -> dict:
    p = dual(cfg.params) if args.dual else cfg.params
    e = p.exp()
    out: dict = {"evaluated_at": p.to_json(), "dual": args.dual, "order": _labels()}
    if args.word is not None:
        word = monodromy.parse_word(args.word)
        out["word"] = word
        out["matrix"] = _mat(monodromy.monodromy_word(word, e))
        return out
    out.update(
        M1=_mat(monodromy.M1(e)),
        M2=_mat(monodromy.M2(e)),
        M3=_mat(monodromy.M3(e)),
        H=[cx(v) for v in monodromy.H_matrix(e)],
        lam=cx(monodromy.lam(e)),
        N2=_mat(monodromy.N2(e).matrix),
        intersections=[cx(v) for v in intersection.all_self_intersections(e)],
    )
    return out


def cmd_intersect(cfg: RunConfig, args) -> dict:
    e = cfg.params.exp()
    vals = intersection.all_self_intersections(e)
    return {
        "labels": _labels(),
        "values": [cx(v) for v in vals],
        "ratios": [cx(v) for v in vals / vals[0]],
        "h": [cx(v) for v in monodromy.H_matrix(e)],
    }


def cmd_integral_check(cfg: RunConfig, args) -> dict:
    p = cfg.params
    n = args.n
    residuals = [[coefficient_identity_check(p, n1, n2) for n2 in range(n + 1)] for n1 in range(n + 1)]
    gammas = {lab: cx(gamma_factor(lab, p)) for lab in GAMMA_LABELS}
    worst = max(max(r) for r in residuals)
    return {"n": n, "max_residual": worst, "residuals": residuals, "gamma_factors": gammas}


def cmd_continue(cfg: RunConfig, args) -> dict:
    p = cfg.params
    pf = pfaffian_for(p)
    loops = cont.build_loops(cfg.eps1, cfg.eps2, cfg.delta)
    phi0 = cont.initial_fundamental_matrix(p, pf, (cfg.eps1, cfg.eps2))

    def run(path):
        clearance = cont.check_clearance(pf, path, min(cfg.eps1, cfg.eps2, cfg.delta) / 2)
        res = cont.transport(pf, path, phi0)
        m = cont.numeric_circuit_matrix(phi0, res.end, path.name)
        return path, clearance, res, m

    with ThreadPoolExecutor(max_workers=threads()) as pool:
        runs = list(pool.map(run, loops))
    out: dict = {"base_point": [cfg.eps1, cfg.eps2], "delta": cfg.delta, "order": _labels(), "loops": []}
    for path, clearance, res, m in runs:
        out["loops"].append(
            {
                "name": path.name,
                "path": path.to_json(),
                "clearance": clearance,
                "steps": res.steps,
                "error_estimate": res.error_estimate,
                "matrix": _mat(m),
            }
        )
    out["gauge"] = cont.gauge_compare_M3(runs[2][3], p.exp()).to_json()
    return out


def cmd_verify(cfg: RunConfig, args) -> dict:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    with ThreadPoolExecutor(max_workers=threads()) as pool:
        results = list(pool.map(lambda n: (n, run_suite(n, cfg.params, cfg)), names))
    checks: list[dict] = []
    for name, items in results:
        checks += [dict(c.to_json(), suite=name) for c in items]
    out: dict = {"suite": args.suite, "status": "pass" if all(c["status"] == "pass" for c in checks) else "fail"}
    if args.suite == "rank":
        out["rank"] = checks[0]["detail"]["rank"]
    out["checks"] = checks
    return out


COMMANDS = {
    "eval": cmd_eval,
    "fundsys": cmd_fundsys,
    "infinity": cmd_infinity,
    "pde-check": cmd_pde_check,
    "rank": cmd_rank,
    "pfaffian": cmd_pfaffian,
    "matrices": cmd_matrices,
    "intersect": cmd_intersect,
    "integral-check": cmd_integral_check,
    "continue": cmd_continue,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params", help="'a=1/2,1/3,1/5 b=1/7,3/7,1/11,5/11', a JSON object, or @file")
    common.add_argument("--nmax", type=int, default=Truncation.n_max, help="series truncation degree")
    common.add_argument("--tol", type=float, default=Truncation.tail_tol, help="series tail tolerance")
    common.add_argument("--eps1", type=float, default=cont.DEFAULT_EPS[0])
    common.add_argument("--eps2", type=float, default=cont.DEFAULT_EPS[1])
    common.add_argument("--delta", type=float, default=cont.DEFAULT_DELTA, help="radius of the loop around R")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="output", action="store_const", const="json", default="json")
    fmt.add_argument("--csv", dest="output", action="store_const", const="csv")

    parser = argparse.ArgumentParser(prog="hesse-hg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("eval", "evaluate the series or one of its derivatives")
    p.add_argument("--x", type=_parse_point, required=True, help="point 'x1,x2' (complex allowed)")
    p.add_argument("--deriv", type=_parse_pair, default=(0, 0), help="derivative orders 'm1,m2'")
    for name, text in (("fundsys", "the nine local solutions at the origin"), ("infinity", "the nine solutions at infinity")):
        add(name, text).add_argument("--x", type=_parse_point, required=True)
    add("pde-check", "exact coefficient check of both equations").add_argument("--N", type=int, default=40)
    add("rank", "Groebner basis, standard monomials and rank")
    add("pfaffian", "Pfaffian system and its singular factors")
    p = add("matrices", "closed-form circuit and intersection matrices")
    p.add_argument("--dual", action="store_true", help="evaluate at the dual parameters")
    p.add_argument("--word", help="comma-separated loop word such as '3,2,3,-2'")
    add("intersect", "self-intersection numbers and their ratios")
    add("integral-check", "Euler-integral coefficient identity").add_argument("--n", type=int, default=5)
    add("continue", "numerical transport along the three generating loops")
    add("verify", "run a verification suite").add_argument("suite", choices=[*SUITES, "all"])
    return parser


def make_config(args) -> RunConfig:
    return RunConfig(
        params=_load_params(args.params),
        truncation=Truncation(n_max=args.nmax, tail_tol=args.tol),
        eps1=args.eps1,
        eps2=args.eps2,
        delta=args.delta,
        seed=args.seed,
        output=args.output,
    )


def _error_doc(command: str | None, exc: Exception) -> dict:
    doc = {"schema": SCHEMA, "command": command, "error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ParameterError):
        doc["violations"] = exc.violations
    return doc


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = getattr(args, "output", "json")
    try:
        cfg = make_config(args)
        cfg.validate(args.command)
        body = COMMANDS[args.command](cfg, args)
        doc = {"schema": SCHEMA, "command": args.command, "params": cfg.params.to_json(), **body}
        if cfg.warnings:
            doc["warnings"] = cfg.warnings
        code = EXIT_FAIL if doc.get("status") == "fail" else EXIT_OK
    except ParameterError as exc:
        doc, code = _error_doc(args.command, exc), EXIT_PARAM
    except DomainError as exc:
        doc, code = _error_doc(args.command, exc), EXIT_DOMAIN
    except (HesseError, ValueError, OSError) as exc:
        doc, code = _error_doc(args.command, exc), EXIT_ERROR
    sys.stdout.write(emit_csv(doc) if fmt == "csv" else emit_json(doc) + "\n")
    if code not in (EXIT_OK, EXIT_FAIL):
        print(f"hesse-hg: {doc['error']}: {doc['message']}", file=sys.stderr)
    return code


__all__ = ["RunConfig", "main", "build_parser", "emit_json", "emit_csv"]
