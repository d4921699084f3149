"""Command-line front end: ``qlimit <command> [flags]``.

Every command prints a header carrying the defaults in force, then one report
per check. Exit codes: 0 all PASS, 1 any FAIL, 3 INCONCLUSIVE without FAIL,
2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from types import SimpleNamespace

import numpy as np

from . import morphisms as M
from . import numeric as NUM
from . import prolimit as PL
from .errors import QLimitError
from .parser import parse_expression
from .presentations import build_preset
from .report import FAIL, INCONCLUSIVE, PASS, CheckReport, exit_code, timed
from .rewrite import DEGLEX, complete_bounded, orient

COMMANDS = ("verify", "nf", "reduce-zero", "complete", "diagram", "coassoc", "welldef",
            "density", "system", "hypotheses", "kappa", "numeric")

DEFAULTS = dict(preset="suq", n=2, N=3, d=None, max_rules=5000, seed=0, tol=None,
                report="records", det_tuples="all", side="both", morphism="delta",
                sections="naive", words=20, dims="1,2,4", q=1.0, samples=8, expr=None,
                action=None)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global flags")
    g.add_argument("--preset", choices=("suq", "contraction", "circle"), default="suq")
    g.add_argument("-n", type=int, default=2, help="level of the presentation")
    g.add_argument("-N", type=int, default=3, help="depth of an inverse system")
    g.add_argument("-d", type=int, default=None, help="degree bound")
    g.add_argument("-m", "--max-rules", type=int, default=5000, dest="max_rules")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--tol", type=float, default=None)
    g.add_argument("--report", choices=("text", "records"), default="records")
    g.add_argument("--det-tuples", choices=("distinct", "all"), default="all", dest="det_tuples")
    g.add_argument("--side", choices=("left", "right", "both"), default="both")
    g.add_argument("--morphism", choices=("delta", "theta", "pi", "section"), default="delta")
    g.add_argument("--sections", choices=("naive", "none"), default="naive")
    g.add_argument("--words", type=int, default=20)
    g.add_argument("--dims", default="1,2,4")
    g.add_argument("--q", type=float, default=1.0)
    g.add_argument("--samples", type=int, default=8)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    top = argparse.ArgumentParser(prog="qlimit", description="Checks for presented quantum groups "
                                  "and their inverse limits.")
    sub = top.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name in ("nf", "reduce-zero"):
            sp.add_argument("expr_pos", nargs="?", metavar="EXPR")
            sp.add_argument("--expr", dest="expr_flag", metavar="EXPR")
        if name == "system":
            sp.add_argument("action", choices=("validate",))
    return top


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _family(cfg) -> str:
    return "w" if cfg.preset == "contraction" else "u"


def _degree(cfg, n: int | None = None) -> int:
    if cfg.d is not None:
        return cfg.d
    if cfg.preset == "suq":
        return M.default_degree(n if n is not None else cfg.n)
    return 3


def _system(cfg):
    if cfg.preset == "suq":
        return M.level_system("u", cfg.n, _degree(cfg), cfg.det_tuples)
    pres = build_preset(cfg.preset, cfg.n)
    S = orient(pres.algebraic_relations)
    if pres.algebraic_relations and _degree(cfg) >= 2:
        S, _ = complete_bounded(S, _degree(cfg), cfg.max_rules)
    return S


def _pres(cfg):
    return build_preset(cfg.preset, cfg.n, cfg.det_tuples)


def header(cfg) -> dict:
    h = {"command": cfg.command + (f" {cfg.action}" if cfg.action else ""),
         "preset": cfg.preset, "n": 1 if cfg.preset == "circle" else cfg.n, "order": DEGLEX}
    if cfg.command in ("system", "hypotheses", "kappa"):
        h["N"] = cfg.N
    if cfg.command in ("system", "hypotheses") and cfg.d is None:
        h["degree"] = "per-level " + ",".join(f"n{k}:{v}" for k, v in M.DEFAULT_DEGREE.items())
    else:
        h["degree"] = _degree(cfg)
    h["max_rules"] = cfg.max_rules
    h["det_tuples"] = cfg.det_tuples
    h["tol_accept"] = cfg.tol if cfg.tol is not None else NUM.ACCEPT_TOL
    h["tol_reject"] = NUM.REJECT_TOL
    h["seed"] = cfg.seed
    if cfg.command in ("numeric", "hypotheses"):
        h["samples"] = cfg.samples
    if cfg.command == "numeric":
        h["q"] = cfg.q
    return h


def render(cfg, reports: list[CheckReport], out=None) -> None:
    out = out or sys.stdout
    h = header(cfg)
    if cfg.report == "records":
        out.write("# " + " ".join(f"{k}={_hval(v)}" for k, v in h.items()) + "\n")
        for r in reports:
            out.write(r.record() + "\n")
    else:
        out.write("qlimit report\n")
        for k, v in h.items():
            out.write(f"  {k}: {v}\n")
        for r in reports:
            out.write("\n" + r.text() + "\n")
    code = exit_code(reports)
    summary = {0: "all PASS", 1: "FAIL", 3: "INCONCLUSIVE"}[code]
    out.write(f"# exit={code} ({summary})\n" if cfg.report == "records"
              else f"\nexit {code}: {summary}\n")


def _hval(v) -> str:
    s = str(v)
    return f'"{s}"' if " " in s else s


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def relations_check(cfg, S=None) -> CheckReport:
    """Every defining relation reduces to zero in its own system."""
    pres = _pres(cfg)
    with timed() as t:
        S = S or _system(cfg)
        bad = [r.label for r in pres.algebraic_relations if not S.reduces_to_zero(r.body)]
    status = FAIL if bad else PASS
    return CheckReport(f"relations:{cfg.preset}:n={pres.level}", status,
                       witness=f"relation {bad[0]} has nonzero normal form" if bad else None,
                       confluence_status=S.confluence_status, runtime_ms=t["ms"],
                       data={"relations": len(pres.algebraic_relations), "rules": len(S)})


def completion_check(cfg) -> CheckReport:
    pres = _pres(cfg)
    d = _degree(cfg)
    with timed() as t:
        S0 = orient(pres.algebraic_relations)
        if pres.algebraic_relations and d >= 2:
            S, rep = complete_bounded(S0, d, cfg.max_rules)
            added, unresolved = rep.new_rules_added, rep.unresolved_critical_pairs
        else:
            S, added, unresolved = S0, 0, []
        audit = S.audit()
    status = PASS if S.confluence_status.startswith("confluent") and not audit else INCONCLUSIVE
    if audit:
        status = FAIL
    details = [str(r) for r in S.rules]
    details += [f"unresolved {p}" for p in unresolved[:10]]
    return CheckReport(
        f"complete:{cfg.preset}:n={pres.level}", status,
        witness=f"audit: {audit[0]}" if audit else None,
        degree_bound=d, confluence_status=S.confluence_status, runtime_ms=t["ms"],
        details=details,
        data={"oriented_rules": len(S0), "rules": len(S), "new_rules_added": added,
              "unresolved_pairs": len(unresolved), "audit_problems": len(audit)})


def numeric_check(cfg) -> CheckReport:
    pres = _pres(cfg)
    tol = cfg.tol if cfg.tol is not None else NUM.ACCEPT_TOL
    with timed() as t:
        qv = cfg.q if pres.name == "suq" else None
        reps = NUM.sample_reps(pres, cfg.samples, cfg.seed, qv)
        worst: dict = {}
        for rep in reps:
            for label, val in NUM.rep_residual(rep, tol, pres).residuals.items():
                worst[label] = max(worst.get(label, -np.inf), val)
        gmax = max(NUM.generator_norms(r) for r in reps)
    overall = max(worst.values(), default=0.0)
    status = PASS if overall <= tol else FAIL
    bad = max(worst, key=worst.get) if worst else None
    details = [f"{k}: max residual {v:.3e}" for k, v in worst.items()]
    data = {"representations": len(reps), "max_generator_norm": f"{gmax:.12f}"}
    if pres.norm_relations:
        data["norm_bounds"] = f"no violation found in {len(reps)} samples" if status == PASS else "violated"
    return CheckReport(f"numeric:{cfg.preset}:n={pres.level}", status,
                       witness=f"relation {bad} exceeds tolerance" if status == FAIL else None,
                       residual=overall, runtime_ms=t["ms"], details=details, data=data)


def reduce_zero_check(cfg, expr: str) -> CheckReport:
    p = parse_expression(expr, cfg.n if cfg.preset != "circle" else None)
    S = _system(cfg)
    legs = max(p.legs(), default=1)
    with timed() as t:
        SS = S.tensor_power(legs) if legs > 1 else S
        nf = SS.normal_form(p)
        status, witness, residual = PASS, None, None
        if not nf.is_zero():
            found = NUM.find_witness(_pres(cfg), p, legs=legs, samples=cfg.samples, seed=cfg.seed)
            if found:
                status, witness, residual = FAIL, found[0], found[1]
            else:
                status = INCONCLUSIVE
    return CheckReport("reduce-zero", status, witness=witness, residual=residual,
                       degree_bound=M._status_degree(S.confluence_status) or _degree(cfg),
                       confluence_status=S.confluence_status, runtime_ms=t["ms"],
                       data={"input": str(p), "normal_form": str(nf)})


def nf_report(cfg, expr: str) -> CheckReport:
    p = parse_expression(expr, cfg.n if cfg.preset != "circle" else None)
    S = _system(cfg)
    legs = max(p.legs(), default=1)
    with timed() as t:
        nf = (S.tensor_power(legs) if legs > 1 else S).normal_form(p)
    return CheckReport("nf", PASS, confluence_status=S.confluence_status, runtime_ms=t["ms"],
                       data={"input": str(p), "normal_form": str(nf)})


def welldef_check(cfg) -> CheckReport:
    n = cfg.n
    if cfg.morphism == "delta":
        m = M.comultiplication(n)
    elif cfg.morphism == "theta":
        m = M.projection_theta(n, _family(cfg))
    elif cfg.morphism == "section":
        m = M.section_naive(n, _family(cfg))
    else:
        m = M.pi(n)
    deg = cfg.d if cfg.d is not None else None
    return M.well_defined(m, degree=deg)


def density_checks(cfg) -> list[CheckReport]:
    sides = ("left", "right") if cfg.side == "both" else (cfg.side,)
    d = cfg.d if cfg.d is not None else 3
    S = M.level_system("u", cfg.n, None if cfg.d is None else max(cfg.d, 2), cfg.det_tuples)
    return [M.density_report(cfg.n, side, d, S) for side in sides]


def kappa_check(cfg) -> CheckReport:
    tol = cfg.tol if cfg.tol is not None else 1e-12
    level = max(cfg.N, 1)
    W = PL.InverseSystem.contraction(level)
    dims = [int(x) for x in cfg.dims.split(",") if x.strip()]
    with timed() as t:
        worst, count = 0.0, 0
        for k, dim in enumerate(dims):
            rho = NUM.contraction_rep_build(level, dim, cfg.seed + k)
            for e, letters in PL.random_coherent_words(W, cfg.words, level, cfg.seed + 100 * k):
                diff = PL.kappa_factor(rho, e) - PL.direct_eval(rho, letters)
                worst = max(worst, float(np.max(np.abs(diff))) if diff.size else 0.0)
                count += 1
    status = PASS if worst <= tol else FAIL
    return CheckReport(f"kappa:N={level}", status,
                       witness=f"triangle off by {worst:.3e}" if status == FAIL else None,
                       residual=worst, runtime_ms=t["ms"],
                       data={"words": count, "dims": cfg.dims, "tol": tol})


def _inverse_system(cfg):
    if cfg.preset == "contraction":
        return PL.InverseSystem.contraction(cfg.N)
    if cfg.preset != "suq":
        raise ValueError("inverse systems exist for the suq and contraction presets")
    sections = None if cfg.sections == "none" else cfg.sections
    return PL.InverseSystem.suq(cfg.N, sections=sections, degree=cfg.d)


def verify_suite(cfg) -> list[CheckReport]:
    out = [relations_check(cfg), completion_check(cfg)]
    if cfg.preset == "suq":
        n = cfg.n
        out.append(M.coassociativity_check(n))
        if n >= 2:
            out.append(M.diagram_check(n))
        S = M.level_system("u", n, _degree(cfg), cfg.det_tuples)
        out.append(M.well_defined(M.comultiplication(n), S.tensor_power(2)))
        if n >= 2:
            out.append(M.well_defined(M.projection_theta(n)))
        out.extend(M.density_report(n, side, _degree(cfg), S) for side in ("left", "right"))
    out.append(numeric_check(cfg))
    return out


def run_suite(config) -> tuple[list[CheckReport], int]:
    """Run one command; ``config`` is a parsed namespace or a dict of flags."""
    cfg = config
    if isinstance(config, dict):
        cfg = SimpleNamespace(**{**DEFAULTS, **config})
    c = cfg.command
    if c not in COMMANDS:
        raise ValueError(f"unknown command {c!r}")
    if c == "verify":
        reports = verify_suite(cfg)
    elif c == "nf":
        reports = [nf_report(cfg, cfg.expr)]
    elif c == "reduce-zero":
        reports = [reduce_zero_check(cfg, cfg.expr)]
    elif c == "complete":
        reports = [completion_check(cfg)]
    elif c == "diagram":
        reports = [M.diagram_check(cfg.n)]
    elif c == "coassoc":
        reports = [M.coassociativity_check(cfg.n)]
    elif c == "welldef":
        reports = [welldef_check(cfg)]
    elif c == "density":
        reports = density_checks(cfg)
    elif c == "system":
        reports = [PL.validate_system(_inverse_system(cfg), cfg.N)]
    elif c == "hypotheses":
        rep = PL.hypothesis_check(_inverse_system(cfg), cfg.N, cfg.d, cfg.samples, cfg.seed)
        reports = [rep] + list(getattr(rep, "parts", []))
    elif c == "kappa":
        reports = [kappa_check(cfg)]
    else:
        reports = [numeric_check(cfg)]
    return reports, exit_code(reports)


def main(argv=None) -> int:
    parser = build_parser()
    cfg = parser.parse_args(argv)
    cfg.expr = getattr(cfg, "expr_flag", None) or getattr(cfg, "expr_pos", None)
    if cfg.command in ("nf", "reduce-zero") and not cfg.expr:
        parser.error(f"{cfg.command} needs an expression")
    if not hasattr(cfg, "action"):
        cfg.action = None
    try:
        reports, code = run_suite(cfg)
    except (QLimitError, NameError, SyntaxError, ValueError, IndexError, KeyError) as exc:
        print(f"qlimit: error: {exc}", file=sys.stderr)
        return 2
    render(cfg, reports)
    return code


if __name__ == "__main__":
    sys.exit(main())
