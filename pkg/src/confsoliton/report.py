"""JSON reports and plot data.

Reports are plain dicts with a fixed key order; :func:`dumps` renders them
deterministically so repeated runs give byte-identical output.
"""

import csv
import io
import json
import math

import numpy as np

from . import __version__
from .chart import make_grid
from .classifier import Family, classify_report
from .corpus import BUILTINS, DEFAULT_CORPUS, builtin_chart
from .errors import POINT_ERRORS, UnsupportedIndex
from .hypersurface import frame_at, shape_operator_type
from .soliton import SolitonVerdict, soliton_check

SCHEMA = "confsoliton-report/1"
PLOTDATA_SCHEMA = "confsoliton-plotdata/1"


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def dumps(report):
    return json.dumps(_clean(report), indent=2, allow_nan=False) + "\n"


def _header(command, config):
    return {
        "schema": SCHEMA,
        "tool_version": __version__,
        "command": command,
        "config": config.echo() if config is not None else None,
    }


def _tolkw(tol):
    return dict(soliton_tol=tol.soliton, borderline_tol=tol.borderline,
                identity_tol=tol.identity, minimal_tol=tol.minimal)


def frames_report(config):
    chart = config.chart
    records, excluded = [], []
    for p in make_grid(chart, config.resolution):
        try:
            f = frame_at(chart, p)
        except POINT_ERRORS as exc:
            excluded.append({"point": p, "reason": f"{type(exc).__name__}: {exc}"})
            continue
        try:
            shape = shape_operator_type(f, config.tolerances.jordan)
            shape_type = shape.type_tag.value
            kappa = shape.as_pairs()
        except UnsupportedIndex:
            shape_type = None
            kappa = [[z.real, z.imag] for z in f.principal_curvatures]
        records.append({
            "point": p,
            "x": f.x,
            "g": f.g.entries,
            "N": f.N,
            "eps_N": f.eps_N,
            "kappa": kappa,
            "shape_type": shape_type,
            "alpha": f.alpha,
            "lambda": f.lam,
        })
    rep = _header("frames", config)
    rep["records"] = records
    rep["excluded"] = excluded
    return rep


def _point_records(report):
    return [
        {
            "point": d.point,
            "lambda": d.lam,
            "alpha": d.alpha,
            "phi": d.phi,
            "residual": d.residual,
            "eps_N": d.eps_N,
            "lie_mismatch": d.lie_mismatch,
            "gauss": d.gauss,
            "codazzi": d.codazzi,
        }
        for d in report.points
    ]


def _soliton_summary(report):
    return {
        "verdict": report.verdict.value,
        "max_residual": report.max_residual,
        "phi_min": float(report.phi.min()),
        "phi_max": float(report.phi.max()),
        "minimal": report.minimal,
    }


def check_report(config):
    chart = config.chart
    sol = soliton_check(chart, make_grid(chart, config.resolution), **_tolkw(config.tolerances))
    rep = _header("check", config)
    rep["records"] = _point_records(sol)
    rep["excluded"] = [{"point": p, "reason": r} for p, r in sol.excluded]
    rep["oracles"] = [o.as_dict() for o in sol.oracles]
    rep["soliton"] = _soliton_summary(sol)
    return rep, sol


def classify_report_dict(config):
    chart = config.chart
    sol = soliton_check(chart, make_grid(chart, config.resolution), **_tolkw(config.tolerances))
    verdict = classify_report(sol, config.tolerances)
    rep = _header("classify", config)
    rep["records"] = _point_records(sol)
    rep["excluded"] = [{"point": p, "reason": r} for p, r in sol.excluded]
    rep["oracles"] = [o.as_dict() for o in sol.oracles]
    rep["soliton"] = _soliton_summary(sol)
    rep["verdict"] = verdict.as_dict()
    return rep, verdict


# (name, identity) in report order; names match the per-chart oracles
IDENTITIES = (
    ("lie_derivative_shape_identity", "(1/2) L_{V^T} g = g + eps_N lambda b"),
    ("soliton_shape_relation", "(phi - 1) g(X, Y) = g(A_{V^perp} X, Y) on solitons"),
    ("umbilic_forcing", "phi - 1 = eps_N lambda kappa_i for every principal curvature"),
    ("trace_identity", "phi - 1 = lambda alpha"),
    ("concurrent_tangent_phi_one", "V = V^T implies (1/2) L g = g and phi = 1"),
    ("gradient_structure", "V^T = grad f with f = (1/2) <x, x>"),
    ("minimal_phi_one", "tr A = 0 implies phi = 1"),
    ("gauss_equation", "Rm_ijkl = eps_N (b_il b_jk - b_ik b_jl)"),
    ("codazzi_equation", "(nabla_i b)_jk = (nabla_j b)_ik"),
    ("cone_certificates", "lambda = 0 everywhere: V = V^T, A V^T = 0, e(|x|) = 1, nabla_e e = 0"),
    ("family_verdicts", "every built-in chart receives its expected family"),
)


def verify_report(names=None, tolerances=None):
    """Run every identity over the built-in corpus; one line per identity."""
    from .tolerances import Tolerances

    tol = tolerances or Tolerances()
    names = list(names) if names else list(DEFAULT_CORPUS)
    per_chart = []
    lines = {name: {"exercised": [], "skipped": [], "failed": [], "worst": None, "threshold": None}
             for name, _ in IDENTITIES}

    def record(ident, chart_name, status, worst, threshold):
        line = lines[ident]
        line["threshold"] = threshold
        if status == "SKIPPED":
            line["skipped"].append(chart_name)
            return
        line["exercised"].append(chart_name)
        if status == "FAIL":
            line["failed"].append(chart_name)
        if worst is not None and math.isfinite(worst):
            line["worst"] = worst if line["worst"] is None else max(line["worst"], worst)

    for name in names:
        entry = BUILTINS[name]
        chart = builtin_chart(name)
        sol = soliton_check(chart, make_grid(chart, entry.resolution), **_tolkw(tol))
        verdict = classify_report(sol, tol)
        for o in sol.oracles:
            record(o.name, name, o.status, o.worst, o.threshold)
        cone_cert = [c for c in verdict.certificates if verdict.tag is Family.CONE]
        if cone_cert:
            worst = max(c.value / c.threshold for c in cone_cert)
            record("cone_certificates", name, "PASS" if worst <= 1 else "FAIL", worst, 1.0)
        elif entry.expected == "Cone":
            record("cone_certificates", name, "FAIL", None, 1.0)
        else:
            record("cone_certificates", name, "SKIPPED", None, 1.0)
        got = verdict.tag.value
        record("family_verdicts", name, "PASS" if got == entry.expected else "FAIL", None, None)
        per_chart.append({
            "name": name,
            "soliton": sol.verdict.value,
            "verdict": got,
            "expected": entry.expected,
            "samples": len(sol.points),
            "excluded": len(sol.excluded),
        })

    identities = []
    for ident, formula in IDENTITIES:
        line = lines[ident]
        if line["failed"]:
            status = "FAIL"
        elif line["exercised"]:
            status = "PASS"
        else:
            status = "SKIPPED"
        identities.append({
            "name": ident,
            "identity": formula,
            "status": status,
            "charts_exercised": len(line["exercised"]),
            "worst": line["worst"],
            "threshold": line["threshold"],
            "skipped_for": line["skipped"],
            "failed_for": line["failed"],
        })
    rep = _header("verify", None)
    rep["config"] = {"corpus": names, "tolerances": tol.as_dict()}
    rep["charts"] = per_chart
    rep["identities"] = identities
    rep["passed"] = not any(i["status"] == "FAIL" for i in identities)
    return rep


def plotdata_csv(config):
    chart = config.chart
    sol = soliton_check(chart, make_grid(chart, config.resolution), **_tolkw(config.tolerances))
    buf = io.StringIO()
    buf.write(f"# {PLOTDATA_SCHEMA}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(chart.variables) + [f"x{a + 1}" for a in range(chart.ambient.dim)]
               + ["lambda", "phi", "residual"])
    for d in sol.points:
        w.writerow([repr(float(v)) for v in d.point] + [repr(float(v)) for v in d.x]
                   + [repr(d.lam), repr(d.phi), repr(d.residual)])
    return buf.getvalue()


SOLITON_EXIT = {
    SolitonVerdict.IS_SOLITON: 0,
    SolitonVerdict.NOT_SOLITON: 2,
    SolitonVerdict.BORDERLINE: 3,
}
