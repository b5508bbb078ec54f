"""
Serialising an :class:`~fockfit.analysis.AnalysisReport`.

``json``
    versioned document, see :data:`REPORT_SCHEMA`; keys sorted, so equal
    reports give byte-identical output.
``csv``
    one row per analysis unit: each pair fit, and each quadrant of a
    negation record (``unit`` = ``AND``, ``OR``, ``NEG:AB``, ...).
``plotdata``
    tab-separated ``item, unit, n_sq, angle_deg, margin``; one row per
    record. Negation records get a single ``NEG`` row (mean n^2 and mean phi
    over the quadrants, margin = largest classicality violation); other
    records one row per connective.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Any, Dict, List

from .analysis import AnalysisReport, NegationResult, PairResult, RecordResult
from .negation import QUADRANTS

REPORT_SCHEMA = "fockfit.report/1"
FORMATS = ("json", "csv", "plotdata")

CSV_FIELDS = (
    "item", "concept_a", "concept_b", "unit",
    "mu_a", "mu_b", "mu_combined",
    "deviation", "margin", "feasible_lo", "feasible_hi",
    "m_sq", "n_sq", "angle_deg", "alpha", "beta", "residual",
    "classical", "max_violation", "error",
)
PLOT_FIELDS = ("item", "unit", "n_sq", "angle_deg", "margin")


def _pair_dict(pair: PairResult) -> Dict[str, Any]:
    w = pair.weights
    out: Dict[str, Any] = {
        "connective": w.connective.value,
        "mu_a": w.mu_a,
        "mu_b": w.mu_b,
        "mu_combined": w.mu_combined,
        "deviation": {"kind": pair.deviation.kind.value, "margin": pair.deviation.margin},
        "feasible_interval": list(pair.feasible),
        "fit": None,
        "error": pair.error,
    }
    if pair.params is not None:
        p = pair.params
        out["fit"] = {
            "m_sq": p.m_sq, "n_sq": p.n_sq, "theta_deg": p.theta,
            "lambda_deg": p.lambda_phase, "nu_deg": p.nu_phase,
            "residual": pair.residual,
        }
    if pair.verify is not None:
        out["verify"] = pair.verify
    return out


def _negation_dict(neg: NegationResult) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    if neg.classicality is not None:
        c = neg.classicality
        out["classicality"] = {
            "residuals": list(c.residuals),
            "named_residuals": c.as_dict(),
            "classical": c.classical,
            "tolerance": c.tolerance,
            "kolmogorov_representable": neg.kolmogorov,
        }
    if neg.fit is not None:
        out["fit"] = {
            q: {
                "m": neg.fit[q].m, "n": neg.fit[q].n, "n_sq": neg.fit[q].n ** 2,
                "phi_deg": neg.fit[q].phi, "alpha": neg.fit[q].alpha, "beta": neg.fit[q].beta,
                "residual": neg.fit.residuals.get(q),
            }
            for q in QUADRANTS
        }
    if neg.realization is not None:
        amps = neg.realization.state_c.components
        out["entangled"] = {
            "amplitudes": [float(a.real) for a in amps],
            "projector_diag": [float(d.real) for d in neg.realization.proj.matrix.diagonal()],
            "readback": neg.realization.readback(),
            "is_entangled": neg.realization.is_entangled(),
        }
    elif neg.construct_error is not None:
        out["entangled"] = {"rejected": neg.construct_error}
    if neg.verify is not None:
        out["verify"] = neg.verify
    return out


def _record_dict(res: RecordResult) -> Dict[str, Any]:
    r = res.record
    return {
        "index": res.index,
        "item": r.item,
        "concept_a": r.concept_a,
        "concept_b": r.concept_b,
        "pairs": [_pair_dict(p) for p in res.pairs],
        "negation": _negation_dict(res.negation) if res.negation is not None else None,
        "errors": list(res.errors),
    }


def report_to_dict(report: AnalysisReport) -> Dict[str, Any]:
    return {
        "schema": REPORT_SCHEMA,
        "config": report.config.as_dict(),
        "provenance": report.provenance,
        "records": [_record_dict(r) for r in report.records],
        "summary": report.summary,
    }


def _csv_rows(report: AnalysisReport) -> List[Dict[str, Any]]:
    rows = []
    for res in report.records:
        r = res.record
        base = {"item": r.item, "concept_a": r.concept_a, "concept_b": r.concept_b}
        for pair in res.pairs:
            row = dict(base, unit=pair.weights.connective.value,
                       mu_a=pair.weights.mu_a, mu_b=pair.weights.mu_b,
                       mu_combined=pair.weights.mu_combined,
                       deviation=pair.deviation.kind.value, margin=pair.deviation.margin,
                       feasible_lo=pair.feasible[0], feasible_hi=pair.feasible[1],
                       error=pair.error)
            if pair.params is not None:
                row.update(m_sq=pair.params.m_sq, n_sq=pair.params.n_sq,
                           angle_deg=pair.params.theta, residual=pair.residual)
            rows.append(row)
        neg = res.negation
        if neg is not None:
            neg_record = r.negation_record()
            shared = dict(base)
            if neg.classicality is not None:
                shared.update(classical=neg.classicality.classical,
                              max_violation=neg.classicality.max_violation)
            if neg.construct_error is not None:
                shared["error"] = neg.construct_error
            for q in QUADRANTS:
                mu_x, mu_y = neg_record.quadrant_marginals(q)
                row = dict(shared, unit=f"NEG:{q}", mu_a=mu_x, mu_b=mu_y,
                           mu_combined=neg_record.quadrant_weight(q))
                if neg.fit is not None:
                    p = neg.fit[q]
                    row.update(m_sq=p.m ** 2, n_sq=p.n ** 2, angle_deg=p.phi,
                               alpha=p.alpha, beta=p.beta, residual=neg.fit.residuals.get(q))
                rows.append(row)
        for err in res.errors:
            rows.append(dict(base, unit="ERROR", error=err))
    return rows


def _plot_rows(report: AnalysisReport) -> List[Dict[str, Any]]:
    rows = []
    for res in report.records:
        item = res.record.item
        neg = res.negation
        # a negation record's AND weight is its AB quadrant, already in the NEG row
        for pair in res.pairs if neg is None else ():
            p = pair.params
            rows.append({
                "item": item,
                "unit": pair.weights.connective.value,
                "n_sq": p.n_sq if p else None,
                "angle_deg": p.theta if p else None,
                "margin": pair.deviation.margin,
            })
        if neg is not None:
            fit = neg.fit
            rows.append({
                "item": item,
                "unit": "NEG",
                "n_sq": sum(fit[q].n ** 2 for q in QUADRANTS) / 4 if fit else None,
                "angle_deg": sum(fit[q].phi for q in QUADRANTS) / 4 if fit else None,
                "margin": neg.classicality.max_violation if neg.classicality else None,
            })
    return rows


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _table(rows: List[Dict[str, Any]], columns, delimiter: str) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def emit_report(report: AnalysisReport, fmt: str = "json") -> bytes:
    fmt = fmt.lower()
    if fmt == "json":
        text = json.dumps(report_to_dict(report), indent=2, sort_keys=True, allow_nan=False) + "\n"
    elif fmt == "csv":
        text = _table(_csv_rows(report), CSV_FIELDS, ",")
    elif fmt == "plotdata":
        text = _table(_plot_rows(report), PLOT_FIELDS, "\t")
    else:
        raise ValueError(f"unknown report format {fmt!r}; choose from {FORMATS}")
    return text.encode("utf-8")
