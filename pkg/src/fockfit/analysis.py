"""
Batch analysis of a :class:`~fockfit.dataset.Dataset`.

Every record is processed independently and failures stay local to the
record: an infeasible fit or a rejected construction is written into that
record's entry and never aborts the run.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .combination import (
    DeviationClass,
    FitStrategy,
    FockParams,
    InfeasibleError,
    PairWeights,
    classify_deviation,
    combination_weight,
    feasibility_interval,
    fit_pair,
)
from .dataset import Dataset, MembershipRecord
from .negation import (
    QUADRANTS,
    ClassicalityReport,
    EntangledRealization,
    NegationFockParams,
    NonClassicalError,
    classicality_conditions,
    construct_entangled,
    fit_negation_model,
    kolmogorov_oracle,
    sector2_marginal_check,
)
from .tolerances import CLASSICAL_TOL

MODES = ("analyze", "fit", "check", "construct")


@dataclass(frozen=True)
class AnalysisConfig:
    mode: str = "analyze"
    strategy: FitStrategy = field(default_factory=FitStrategy.min_interference)
    tolerance: float = CLASSICAL_TOL
    seed: int = 0
    n_starts: int = 8
    verify: bool = False
    grid_resolution: int = 200

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if not (self.tolerance > 0 and math.isfinite(self.tolerance)):
            raise ValueError(f"tolerance must be a positive number, got {self.tolerance!r}")
        if self.n_starts < 1:
            raise ValueError("need at least one start per quadrant")
        if self.grid_resolution < 100:
            raise ValueError("grid resolution must be at least 100")

    @property
    def does_fits(self) -> bool:
        return self.mode in ("analyze", "fit")

    @property
    def does_classicality(self) -> bool:
        return self.mode in ("analyze", "check", "construct")

    def as_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "strategy": str(self.strategy),
            "tolerance": self.tolerance,
            "seed": self.seed,
            "n_starts": self.n_starts,
            "verify": self.verify,
            "grid_resolution": self.grid_resolution,
        }


@dataclass
class PairResult:
    weights: PairWeights
    deviation: DeviationClass
    feasible: Tuple[float, float]
    params: Optional[FockParams] = None
    residual: Optional[float] = None
    error: Optional[str] = None
    verify: Optional[Dict[str, Any]] = None


@dataclass
class NegationResult:
    classicality: Optional[ClassicalityReport] = None
    kolmogorov: Optional[bool] = None
    fit: Optional[NegationFockParams] = None
    realization: Optional[EntangledRealization] = None
    construct_error: Optional[str] = None
    verify: Optional[Dict[str, Any]] = None


@dataclass
class RecordResult:
    index: int
    record: MembershipRecord
    pairs: List[PairResult] = field(default_factory=list)
    negation: Optional[NegationResult] = None
    errors: List[str] = field(default_factory=list)


@dataclass
class AnalysisReport:
    config: AnalysisConfig
    provenance: str
    records: List[RecordResult]
    summary: Dict[str, Any]


def _verify_pair(pair: PairWeights, params: FockParams) -> Dict[str, Any]:
    from .oracles import bisect_theta

    def forward(theta):
        return combination_weight(pair.mu_a, pair.mu_b,
                                  FockParams(params.m_sq, params.n_sq, theta), pair.connective)

    theta = bisect_theta(forward, pair.mu_combined)
    diff = abs(theta - params.theta)
    # near theta = 0 or 180 the angle is ill-conditioned; equal weights then count as agreement
    flat = abs(forward(theta) - forward(params.theta)) <= 1e-12
    return {"theta_oracle": theta, "theta_diff": diff, "agrees": diff <= 1e-6 or flat}


def _analyse_pair(pair: PairWeights, config: AnalysisConfig) -> PairResult:
    interval = feasibility_interval(pair.mu_a, pair.mu_b, pair.connective)
    result = PairResult(pair, classify_deviation(pair), (interval.lo, interval.hi))
    if not config.does_fits:
        return result
    try:
        params = fit_pair(pair, config.strategy)
    except InfeasibleError as exc:
        result.error = str(exc)
        return result
    result.params = params
    result.residual = combination_weight(pair.mu_a, pair.mu_b, params, pair.connective) - pair.mu_combined
    if config.verify:
        result.verify = _verify_pair(pair, params)
    return result


def _analyse_negation(record: MembershipRecord, config: AnalysisConfig) -> NegationResult:
    neg = record.negation_record()
    out = NegationResult()
    if config.does_classicality:
        out.classicality = classicality_conditions(neg, config.tolerance)
        out.kolmogorov = kolmogorov_oracle(neg, config.tolerance)
    if config.does_fits:
        out.fit = fit_negation_model(neg, seeds=(config.seed,), n_starts=config.n_starts)
    if config.mode in ("analyze", "construct"):
        try:
            out.realization = construct_entangled(neg, config.tolerance)
        except NonClassicalError as exc:
            out.construct_error = str(exc)
    if config.verify:
        from .oracles import OracleConfig, grid_validate_fit

        checks: Dict[str, Any] = {}
        if out.classicality is not None:
            checks["oracle_agrees"] = out.kolmogorov == out.classicality.classical
        if out.fit is not None:
            oracle = OracleConfig(resolution=config.grid_resolution, seed=config.seed)
            checks["grid_ok"] = grid_validate_fit(neg, out.fit, oracle)
        if out.realization is not None:
            checks["sector2_residuals"] = list(sector2_marginal_check(out.realization))
        out.verify = checks
    return out


def _summarise(results: List[RecordResult], config: AnalysisConfig) -> Dict[str, Any]:
    deviations: Dict[str, int] = {}
    n_sq: List[float] = []
    fitted = infeasible = 0
    classical = nonclassical = 0
    for res in results:
        for pair in res.pairs:
            deviations[pair.deviation.kind.value] = deviations.get(pair.deviation.kind.value, 0) + 1
            if pair.params is not None:
                fitted += 1
                n_sq.append(pair.params.n_sq)
            elif pair.error is not None:
                infeasible += 1
        neg = res.negation
        if neg is not None:
            if neg.classicality is not None:
                if neg.classicality.classical:
                    classical += 1
                else:
                    nonclassical += 1
            if neg.fit is not None:
                n_sq.extend(neg.fit[q].n ** 2 for q in QUADRANTS)
    summary: Dict[str, Any] = {
        "records": len(results),
        "records_with_errors": sum(1 for r in results if r.errors),
        "pair_analyses": sum(len(r.pairs) for r in results),
        "negation_records": sum(1 for r in results if r.negation is not None),
        "deviations": dict(sorted(deviations.items())),
    }
    if config.does_classicality:
        summary["classical"] = classical
        summary["nonclassical"] = nonclassical
    if config.does_fits:
        summary["pair_fits"] = fitted
        summary["pair_infeasible"] = infeasible
        summary["sector1_weight"] = {
            "count": len(n_sq),
            "mean": statistics.fmean(n_sq) if n_sq else None,
            "median": statistics.median(n_sq) if n_sq else None,
            "min": min(n_sq) if n_sq else None,
            "max": max(n_sq) if n_sq else None,
            "fraction_dominant": (sum(1 for v in n_sq if v > 0.5) / len(n_sq)) if n_sq else None,
        }
    return summary


def run_analysis(ds: Dataset, config: AnalysisConfig = AnalysisConfig()) -> AnalysisReport:
    """Analyse every record of ``ds`` according to ``config.mode``.

    ``analyze``
        deviation class, feasibility interval and pair fit per connective;
        classicality, negation fit and entangled construction for records
        carrying all eight negation weights.
    ``fit``
        pair and negation fits only.
    ``check``
        deviation classes and classicality conditions only.
    ``construct``
        classicality plus entangled realizations.
    """
    results = []
    for index, record in enumerate(ds.records):
        res = RecordResult(index, record)
        try:
            if config.mode != "construct":
                res.pairs = [_analyse_pair(p, config) for p in record.pair_weights()]
            if record.has_negation_data:
                res.negation = _analyse_negation(record, config)
        except Exception as exc:  # isolate per-record failures
            res.errors.append(f"{type(exc).__name__}: {exc}")
        results.append(res)
    return AnalysisReport(config, ds.provenance, results, _summarise(results, config))
