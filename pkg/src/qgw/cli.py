"""Command-line driver: ``qgw check <name>`` and ``qgw report``.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or configuration error.
The JSON report goes to ``--out`` (or standard output when ``--out -``); a
short human summary with timings goes to standard output (standard error when
the JSON itself is on standard output). Timings are kept out of the JSON so
that reports for the same configuration are byte-identical.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass
from typing import Callable, Optional

from . import __version__
from .rmat import ConventionError, SeriesId, build_R, check_cybe, check_hecke, check_qybe

CHECKS = ("qybe", "cybe", "flatness", "twist", "jacobi", "semiclassical", "center", "freeness")

# Conventions frozen in code. The hash lets golden reports detect drift.
CONVENTIONS = {
    "basis": "V(x)V index i*N+k; R[(i,k),(j,l)] is the coefficient of e_ij (x) e_kl",
    "r_matrix": "(q - 1/q) terms in the lower triangle (legs exchanged from the upper form)",
    "series_B_parameter": "q = q_std^(1/2)",
    "classical_parts": "r = (1/2) dR/dq at q=1; r_minus = (r - r21)/2; Omega = (r + r21)/2",
    "frt": "R T1 T2 - T2 T1 R",
    "re": "R21 K1 R12 K2 - K2 R21 K1 R12",
    "twist": "T1 T2 = R^-1 K1 R K2; Omega_n^-1 = (Omega_m^-1 x Omega_k^-1) G_{m,k}",
    "form_B": "B[i,i'] = eps_i q^(-rho_i); relations B X^t B^-1 X = f^2, X B X^t B^-1 = f^2",
    "det_q": "FRT: degree-N centralizer, coefficient 1 on X11..XNN; RE: twist transport of the FRT det_q",
    "word_order": "deglex, letters row-major, f smallest; pivot = largest word",
    "sts": "X1X2 r_- + r_- X1X2 - X1 r_- X2 - X2 r_- X1 + X2 Omega X1 - X1 Omega X2",
    "vector_fields": "xi^l x = X xi, xi^r x = xi X",
}


def convention_hash() -> str:
    blob = json.dumps(CONVENTIONS, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    series: str
    rank: int
    algebra: str
    model: str
    max_degree: Optional[int]
    seed: int
    out: str

    @property
    def sid(self) -> SeriesId:
        return SeriesId(self.series, self.rank)

    def echo(self) -> dict:
        return {
            "command": self.command,
            "series": self.series,
            "rank": self.rank,
            "algebra": self.algebra,
            "model": self.model,
            "max_degree": self.max_degree,
            "seed": self.seed,
        }


# ---------------------------------------------------------------------------
# individual checks; each returns a JSON-ready dict with a "pass" field
# ---------------------------------------------------------------------------


def _cap(cfg: RunConfig, N: int) -> int:
    from .qfun import default_cap

    cap = default_cap(N)
    if cfg.max_degree is None:
        return cap
    if cfg.max_degree < 0:
        raise UsageError("--max-degree must be >= 0")
    if cfg.max_degree > cap:
        raise UsageError(f"--max-degree {cfg.max_degree} exceeds the cap {cap} for N = {N}")
    return cfg.max_degree


def run_qybe(cfg: RunConfig, rd) -> dict:
    ok = check_qybe(rd.R)
    out = {"qybe": "pass" if ok else "fail", "pass": ok}
    if cfg.series == "A":
        h = check_hecke(rd.R)
        out["hecke"] = "pass" if h else "fail"
        out["pass"] = ok and h
    return out


def run_cybe(cfg: RunConfig, rd) -> dict:
    ok = check_cybe(rd.r_classical)
    return {"cybe": "pass" if ok else "fail", "pass": ok}


def run_flatness(cfg: RunConfig, rd) -> dict:
    from .qfun import flatness_check, make_presentation

    d = _cap(cfg, rd.N)
    if cfg.command != "report":
        rep = flatness_check(make_presentation(rd.id, cfg.algebra.upper(), cfg.model, rdata=rd), d)
        rep.pop("degrees", None)
        return rep
    # the consolidated report uses the model that is flat for the series:
    # free matrices for A, the sharp group model for B/C/D
    model = "free" if rd.id.series == "A" else "sharp"
    out = {}
    for kind in ("FRT", "RE"):
        rep = flatness_check(make_presentation(rd.id, kind, model, rdata=rd), d)
        rep.pop("degrees", None)
        out[kind.lower()] = rep
    out["pass"] = all(r["pass"] for r in out.values())
    return out


def run_twist(cfg: RunConfig, rd) -> dict:
    from .twistmod import verify_twist_correspondence

    return verify_twist_correspondence(rd.id, rdata=rd)


def run_jacobi(cfg: RunConfig, rd) -> dict:
    from .poisson import (
        ds_bracket_table,
        ds_closed_form,
        jacobi_check_on_variety,
        sts_bracket_table,
        sts_closed_form,
    )

    ds = ds_bracket_table(rd)
    sts = sts_bracket_table(rd)
    out = {
        "ds_two_routes_agree": ds.table == ds_closed_form(rd),
        "sts_two_routes_agree": sts.table == sts_closed_form(rd),
        "ds": jacobi_check_on_variety(ds, seed=cfg.seed),
        "sts": jacobi_check_on_variety(sts, seed=cfg.seed),
    }
    out["pass"] = out["ds_two_routes_agree"] and out["sts_two_routes_agree"] and out["ds"]["pass"] and out["sts"]["pass"]
    return out


def run_semiclassical(cfg: RunConfig, rd) -> dict:
    from .poisson import ds_bracket_table, semiclassical_compare, sts_bracket_table
    from .qfun import make_presentation

    frt = semiclassical_compare(make_presentation(rd.id, "FRT", rdata=rd), ds_bracket_table(rd))
    re = semiclassical_compare(make_presentation(rd.id, "RE", rdata=rd), sts_bracket_table(rd))
    if not frt["applicable"] or not re["applicable"]:
        return {"frt_ds": frt, "re_sts": re, "applicable": False, "pass": None}
    same = frt["c"] == re["c"]
    return {"frt_ds": frt, "re_sts": re, "c": frt["c"], "same_c": same, "pass": frt["pass"] and re["pass"] and same}


def _center_degree(cfg: RunConfig, rd) -> int:
    if cfg.max_degree is not None:
        return _cap(cfg, rd.N)
    # free B/C/D algebras with N >= 3 are not flat past degree 1; compare only through degree 2
    if rd.id.series != "A" and rd.N >= 3:
        return 2
    from .qfun import default_cap

    return default_cap(rd.N)


def run_center(cfg: RunConfig, rd) -> dict:
    from .centermod import center_report, quantum_trace, trace_weights, transported_center_inclusion
    from .qfun import make_presentation
    from .twistmod import generator_cocycle

    d = _center_degree(cfg, rd)
    re = make_presentation(rd.id, "RE", rdata=rd)
    frt = make_presentation(rd.id, "FRT", rdata=rd)
    re_gq = re.quotient(d + 1)
    frt_gq = frt.quotient(d + 1)
    re_rep = center_report(re_gq, rd, d, seed=cfg.seed)
    frt_rep = center_report(frt_gq, rd, min(d, 1), seed=cfg.seed)
    out = {
        "max_degree": d,
        "re": {k: v for k, v in re_rep.items() if not k.startswith("_")},
        "frt_degree1_center_dim": frt_rep["center_dims"][1] if d >= 1 else None,
    }
    if d >= 1:
        qt = quantum_trace(re_gq, rd)
        out["quantum_trace"] = [[re.alphabet.word_name(w), str(c)] for w, c in sorted(qt.terms.items())]
        out["quantum_trace_weights"] = trace_weights(qt, re.alphabet)
    inc = transported_center_inclusion(frt_gq, re_gq, generator_cocycle(rd), d)
    out["transported_frt_center"] = inc
    out["pass"] = (
        re_rep["match"]
        and re_rep["pairwise_commute"]
        and re_rep["classical_routes_agree"]
        and (d < 1 or out["frt_degree1_center_dim"] == 0)
        and inc["pass"]
    )
    return out


def center_generators(re_gq, N: int):
    """Quantum trace plus one new central element in each degree 2..N-1, with degrees."""
    from .centermod import _center_monomials, _rank_of, quantum_trace
    from .freenc import centralizer_basis

    gens = [(quantum_trace(re_gq, None), 1)]
    for k in range(2, N):
        have = _center_monomials(gens, k, re_gq)
        r0 = _rank_of(re_gq, have, k)
        for z in centralizer_basis(re_gq, k):
            if _rank_of(re_gq, have + [z], k) > r0:
                gens.append((z, k))
                break
    return gens


def run_freeness(cfg: RunConfig, rd) -> dict:
    from .centermod import freeness_report
    from .freenc import F_LETTER, NCPoly
    from .qfun import flatness_check, make_presentation

    d = _cap(cfg, rd.N)
    if rd.id.series != "A":
        rep = flatness_check(make_presentation(rd.id, "RE", "sharp", rdata=rd), d)
        rep.pop("degrees", None)
        rep["mode"] = "dimension-consistency"
        return rep
    N = rd.N
    re_free = make_presentation(rd.id, "RE", rdata=rd)
    gens = center_generators(re_free.quotient(N), N)
    sharp = make_presentation(rd.id, "RE", "sharp", rdata=rd)
    gq = sharp.quotient(d)
    gens = gens + [(NCPoly.word((F_LETTER,)), 1)]
    rep = freeness_report(gq, gens, d)
    E = rep.pop("_E")
    # negative control: same E, with the quantum trace replaced by a non-central generator
    bad_gens = [(NCPoly.word((1,)), 1)] + gens[1:]
    ctrl = freeness_report(gq, bad_gens, d, fixed_E=E)
    ctrl.pop("_E")
    out = {
        "mode": "bijectivity",
        "A_dims": rep["A_dims"],
        "I_dims": rep["I_dims"],
        "E_dims": rep["E_dims"],
        "degrees": rep["degrees"],
        "control_first_failure": ctrl["first_failure"],
        "control_fails": not ctrl["pass"],
    }
    out["pass"] = rep["pass"] and out["control_fails"]
    return out


RUNNERS: dict[str, Callable] = {
    "qybe": run_qybe,
    "cybe": run_cybe,
    "flatness": run_flatness,
    "twist": run_twist,
    "jacobi": run_jacobi,
    "semiclassical": run_semiclassical,
    "center": run_center,
    "freeness": run_freeness,
}


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--series", default="A", help="A, B, C or D")
    common.add_argument("--rank", type=int, default=1)
    common.add_argument("--algebra", choices=("frt", "re"), default="re")
    common.add_argument("--model", choices=("free", "sharp", "unitf"), default="free")
    common.add_argument("--max-degree", type=int, default=None, dest="max_degree")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default="-", help="report path, '-' for standard output")

    p = argparse.ArgumentParser(prog="qgw", description="Exact checks for quantized matrix function algebras.")
    p.add_argument("--version", action="version", version=f"qgw {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", parents=[common], help="run one check")
    c.add_argument("name", choices=CHECKS)
    sub.add_parser("report", parents=[common], help="run every check and write one report")
    return p


def _config(ns) -> RunConfig:
    if ns.series not in ("A", "B", "C", "D"):
        raise UsageError(f"--series: unknown series {ns.series!r} (expected A, B, C or D)")
    try:
        SeriesId(ns.series, ns.rank)
    except ValueError as exc:
        raise UsageError(f"--rank: {exc}") from None
    cmd = ns.name if ns.command == "check" else "report"
    return RunConfig(cmd, ns.series, ns.rank, ns.algebra, ns.model, ns.max_degree, ns.seed, ns.out)


def _status(res: dict) -> str:
    return {True: "pass", False: "fail", None: "skipped"}[res.get("pass")]


def _execute(cfg: RunConfig, names: list[str]) -> tuple[dict, list]:
    rd = build_R(cfg.sid)
    results = {}
    timings = []
    for name in names:
        t0 = time.perf_counter()
        try:
            res = RUNNERS[name](cfg, rd)
        except ConventionError as exc:
            res = {"pass": False, "error": str(exc)}
        timings.append((name, time.perf_counter() - t0))
        res["status"] = _status(res)
        results[name] = res
    return results, timings


def _clean(obj):
    """Make a report JSON-safe (tuples to lists, drop private keys)."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items() if not str(k).startswith("_")}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def main(argv: Optional[list[str]] = None) -> int:
    parser = _parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(ns)
        names = list(CHECKS) if cfg.command == "report" else [cfg.command]
        if cfg.max_degree is not None:
            from .qfun import default_cap

            cap = default_cap(cfg.sid.N)
            if not 0 <= cfg.max_degree <= cap:
                raise UsageError(f"--max-degree must lie in 0..{cap} for N = {cfg.sid.N}")
        results, timings = _execute(cfg, names)
        if cfg.command == "semiclassical" and results["semiclassical"]["pass"] is None:
            raise UsageError(f"semiclassical: the free presentations of {cfg.sid} are not flat at degree 2")
    except UsageError as exc:
        print(f"qgw: error: {exc}", file=sys.stderr)
        return 2

    statuses = [r["status"] for r in results.values()]
    overall = all(s in ("pass", "skipped") for s in statuses) and "pass" in statuses
    report = {
        "tool": "qgw",
        "version": __version__,
        "convention_ledger_hash": convention_hash(),
        "config": cfg.echo(),
        "checks": _clean(results),
        "pass": overall,
    }
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    summary = sys.stdout
    if cfg.out == "-":
        sys.stdout.write(text)
        summary = sys.stderr
    else:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    for name, dt in timings:
        print(f"{name:14s} {results[name]['status']:8s} {dt:8.2f}s", file=summary)
    print(f"{'overall':14s} {'pass' if overall else 'fail'}", file=summary)
    return 0 if overall else 1


if __name__ == "__main__":
    sys.exit(main())
