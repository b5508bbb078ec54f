"""
Conjunctions with negation: classicality conditions, the entangled
sector-2 construction and the general four-quadrant Fock fit.

Quadrants are labelled ``AB``, ``AB'``, ``A'B``, ``A'B'`` where a prime marks
the negated concept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import least_squares

from .combination import _check_weight, interference_magnitude
from .hilbert import (
    ComplexVector,
    LinearOperator,
    born_weight,
    inner_product,
    tensor_product,
)
from .tolerances import BORN_TOL, CLASSICAL_TOL, EXTERNAL_NORM_TOL, FIT_TOL

QUADRANTS = ("AB", "AB'", "A'B", "A'B'")

WEIGHT_FIELDS = (
    "mu_a", "mu_b", "mu_a_neg", "mu_b_neg",
    "mu_ab", "mu_ab_neg", "mu_aneg_b", "mu_aneg_bneg",
)

CONDITION_NAMES = ("marginal_A", "marginal_B", "marginal_A_neg", "marginal_B_neg", "normalization")


@dataclass(frozen=True)
class NegationRecord:
    """The eight membership weights of one item in a negation experiment."""

    mu_a: float
    mu_b: float
    mu_a_neg: float
    mu_b_neg: float
    mu_ab: float
    mu_ab_neg: float
    mu_aneg_b: float
    mu_aneg_bneg: float
    item: str = ""
    concept_a: str = ""
    concept_b: str = ""

    def __post_init__(self):
        for name in WEIGHT_FIELDS:
            object.__setattr__(self, name, _check_weight(name, getattr(self, name)))

    @property
    def weights(self) -> Tuple[float, ...]:
        return tuple(getattr(self, f) for f in WEIGHT_FIELDS)

    def quadrant_weight(self, quadrant: str) -> float:
        return {
            "AB": self.mu_ab, "AB'": self.mu_ab_neg,
            "A'B": self.mu_aneg_b, "A'B'": self.mu_aneg_bneg,
        }[quadrant]

    def quadrant_marginals(self, quadrant: str) -> Tuple[float, float]:
        """``(mu(X), mu(Y))`` entering the weight formula of quadrant ``XY``."""
        x = self.mu_a_neg if quadrant.startswith("A'") else self.mu_a
        y = self.mu_b_neg if quadrant.endswith("B'") else self.mu_b
        return x, y

    def relabeled(self) -> "NegationRecord":
        """Swap the roles of A and B (AB' and A'B trade places)."""
        return NegationRecord(
            self.mu_b, self.mu_a, self.mu_b_neg, self.mu_a_neg,
            self.mu_ab, self.mu_aneg_b, self.mu_ab_neg, self.mu_aneg_bneg,
            self.item, self.concept_b, self.concept_a,
        )


@dataclass(frozen=True)
class ClassicalityReport:
    residuals: Tuple[float, float, float, float, float]
    classical: bool
    tolerance: float

    @property
    def max_violation(self) -> float:
        return max(abs(r) for r in self.residuals)

    def as_dict(self) -> Dict[str, float]:
        return dict(zip(CONDITION_NAMES, self.residuals))


def classicality_conditions(record: NegationRecord,
                            tolerance: float = CLASSICAL_TOL) -> ClassicalityReport:
    """Residuals of the five conditions for a Kolmogorovian representation.

    The first four compare each marginal with the sum of the two quadrants
    that should partition it; the fifth is the quadrant total minus one.
    """
    r = record
    residuals = (
        r.mu_a - r.mu_ab - r.mu_ab_neg,
        r.mu_b - r.mu_ab - r.mu_aneg_b,
        r.mu_a_neg - r.mu_aneg_bneg - r.mu_aneg_b,
        r.mu_b_neg - r.mu_aneg_bneg - r.mu_ab_neg,
        r.mu_ab + r.mu_ab_neg + r.mu_aneg_b + r.mu_aneg_bneg - 1.0,
    )
    classical = all(abs(x) <= tolerance for x in residuals)
    return ClassicalityReport(residuals, classical, tolerance)


# Rows: marginal events A, B, A', B'; columns: atoms A∩B, A∩B', A'∩B, A'∩B'.
_ATOM_INCIDENCE = np.array([
    [1, 1, 0, 0],
    [1, 0, 1, 0],
    [0, 0, 1, 1],
    [0, 1, 0, 1],
], dtype=float)


def kolmogorov_oracle(record: NegationRecord, tolerance: float = FIT_TOL) -> bool:
    """Whether a joint distribution over the four atoms reproduces the record.

    The conjunction weights are the only candidate atom probabilities, so the
    check is: atoms non-negative and normalised, and the incidence matrix
    maps them onto the four measured marginals.
    """
    atoms = np.array([record.mu_ab, record.mu_ab_neg, record.mu_aneg_b, record.mu_aneg_bneg])
    marginals = np.array([record.mu_a, record.mu_b, record.mu_a_neg, record.mu_b_neg])
    if np.any(atoms < -tolerance):
        return False
    if abs(math.fsum(atoms) - 1.0) > tolerance:
        return False
    return bool(np.all(np.abs(_ATOM_INCIDENCE @ atoms - marginals) <= tolerance))


# --------------------------------------------------------------------------
# sector 1
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Sector1NegationWeights:
    mu_a: float
    mu_b: float
    mu_a_neg: float
    mu_b_neg: float
    superposition: Mapping[str, float]


def sector1_negation_weights(vectors: Sequence[ComplexVector],
                             proj: LinearOperator) -> Sector1NegationWeights:
    """Born weights of ``|A>, |B>, |A'>, |B'>`` and of the four superpositions.

    ``vectors`` is ``(A, B, A', B')`` and must be mutually orthogonal; the
    quadrant ``XY`` state is ``(|X> + |Y>)/sqrt(2)``.
    """
    if len(vectors) != 4:
        raise ValueError("expected the four vectors A, B, A', B'")
    for i in range(4):
        for j in range(i + 1, 4):
            overlap = abs(inner_product(vectors[i], vectors[j]))
            if overlap > BORN_TOL:
                raise ValueError(f"vectors {i} and {j} are not orthogonal (|<.|.>| = {overlap:.3g})")
    a, b, a_neg, b_neg = vectors
    pairs = {"AB": (a, b), "AB'": (a, b_neg), "A'B": (a_neg, b), "A'B'": (a_neg, b_neg)}
    sup = {q: born_weight((x + y).normalized(), proj) for q, (x, y) in pairs.items()}
    return Sector1NegationWeights(
        born_weight(a, proj), born_weight(b, proj),
        born_weight(a_neg, proj), born_weight(b_neg, proj),
        sup,
    )


# --------------------------------------------------------------------------
# sector 2
# --------------------------------------------------------------------------


class NonClassicalError(ValueError):
    """The record violates the classicality conditions."""

    def __init__(self, report: ClassicalityReport):
        super().__init__(
            f"record is not classical (max violation {report.max_violation:.3g} "
            f"> tolerance {report.tolerance:g})"
        )
        self.report = report


@dataclass(frozen=True)
class EntangledRealization:
    """State ``|C>`` in C^2⊗C^2 and the single-copy projector ``M`` on C^2."""

    state_c: ComplexVector
    proj: LinearOperator

    def operators(self) -> Dict[str, LinearOperator]:
        m = self.proj
        m_neg = m.complement()
        ident = LinearOperator.identity(m.dim)
        return {
            "mu_a": tensor_product(m, ident),
            "mu_b": tensor_product(ident, m),
            "mu_a_neg": tensor_product(m_neg, ident),
            "mu_b_neg": tensor_product(ident, m_neg),
            "mu_ab": tensor_product(m, m),
            "mu_ab_neg": tensor_product(m, m_neg),
            "mu_aneg_b": tensor_product(m_neg, m),
            "mu_aneg_bneg": tensor_product(m_neg, m_neg),
        }

    def readback(self) -> Dict[str, float]:
        """Born weights for all eight concepts, keyed like the record fields."""
        return {name: born_weight(self.state_c, op) for name, op in self.operators().items()}

    def is_entangled(self, tol: float = 1e-12) -> bool:
        amp = self.state_c.components.reshape(2, 2)
        return abs(np.linalg.det(amp)) > tol


def construct_entangled(record: NegationRecord,
                        tolerance: float = FIT_TOL) -> EntangledRealization:
    """Sector-2 realization of a classical record.

    ``M`` projects onto ``e1``; ``|C>`` has the square roots of the four
    conjunction weights as amplitudes on ``e1⊗e1, e1⊗e2, e2⊗e1, e2⊗e2``.
    Amplitudes are renormalised, so readbacks match the record to within
    the classicality tolerance.

    Raises
    ------
    NonClassicalError
        Carrying the :class:`ClassicalityReport` of the rejected record.
    """
    report = classicality_conditions(record, tolerance)
    if not report.classical:
        raise NonClassicalError(report)
    amps = np.sqrt([record.mu_ab, record.mu_ab_neg, record.mu_aneg_b, record.mu_aneg_bneg])
    amps = amps / np.linalg.norm(amps)
    proj = LinearOperator(np.diag([1.0, 0.0]), projector=True)
    return EntangledRealization(ComplexVector(amps, unit=True), proj)


def sector2_marginal_check(real: EntangledRealization) -> Tuple[float, float, float, float]:
    """Residuals of the sector-2 logical identities.

    ``(mu(A') - (1 - mu(A)), mu(B') - (1 - mu(B)),
    mu(AB) + mu(AB') - mu(A), mu(AB) + mu(A'B) - mu(B))``
    """
    w = real.readback()
    return (
        w["mu_a_neg"] - (1.0 - w["mu_a"]),
        w["mu_b_neg"] - (1.0 - w["mu_b"]),
        w["mu_ab"] + w["mu_ab_neg"] - w["mu_a"],
        w["mu_ab"] + w["mu_aneg_b"] - w["mu_b"],
    )


# --------------------------------------------------------------------------
# general two-sector model
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadrantParams:
    """Parameters of one quadrant: ``mu = m^2 alpha + n^2 (avg + beta cos(phi))``.

    ``phi`` is in degrees. The phases lambda and nu of the quadrant state are
    kept as metadata only.
    """

    m: float
    n: float
    phi: float
    alpha: float
    beta: float
    lambda_phase: float = 0.0
    nu_phase: float = 0.0
    norm_tol: float = field(default=EXTERNAL_NORM_TOL, repr=False, compare=False)

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("m and n must be non-negative")
        if abs(self.m ** 2 + self.n ** 2 - 1.0) > self.norm_tol:
            raise ValueError(f"m^2 + n^2 = {self.m ** 2 + self.n ** 2:.6g}, expected 1")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha!r}")
        if abs(self.beta) > 1.0:
            raise ValueError(f"|beta| must be at most 1, got {self.beta!r}")

    @classmethod
    def from_m_sq(cls, m_sq: float, phi: float, alpha: float, beta: float) -> "QuadrantParams":
        m_sq = min(1.0, max(0.0, m_sq))
        return cls(math.sqrt(m_sq), math.sqrt(1.0 - m_sq), phi, alpha, beta, norm_tol=FIT_TOL)


def negation_conjunction_weight(mu_x: float, mu_y: float, params: QuadrantParams) -> float:
    m_sq = params.m ** 2
    n_sq = params.n ** 2
    interference = params.beta * math.cos(math.radians(params.phi))
    return m_sq * params.alpha + n_sq * (0.5 * (mu_x + mu_y) + interference)


@dataclass(frozen=True)
class NegationFockParams:
    quadrants: Mapping[str, QuadrantParams]
    residuals: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        missing = set(QUADRANTS) - set(self.quadrants)
        if missing:
            raise ValueError(f"missing quadrants: {sorted(missing)}")

    def __getitem__(self, quadrant: str) -> QuadrantParams:
        return self.quadrants[quadrant]

    def forward(self, record: NegationRecord) -> Dict[str, float]:
        return {
            q: negation_conjunction_weight(*record.quadrant_marginals(q), self.quadrants[q])
            for q in QUADRANTS
        }

    def residuals_against(self, record: NegationRecord) -> Dict[str, float]:
        model = self.forward(record)
        return {q: model[q] - record.quadrant_weight(q) for q in QUADRANTS}


DEFAULT_SEEDS: Tuple[int, ...] = (0,)
DEFAULT_STARTS = 8


def _fit_quadrant(mu_x: float, mu_y: float, target: float,
                  rng: np.random.Generator, n_starts: int) -> Tuple[QuadrantParams, float]:
    bound = interference_magnitude(mu_x, mu_y)
    avg = 0.5 * (mu_x + mu_y)
    # x = (m^2, alpha, beta, phi)
    lower = np.array([0.0, 0.0, -bound, 0.0])
    upper = np.array([1.0, 1.0, bound, 180.0])
    degenerate = upper <= lower
    upper = np.where(degenerate, lower + 1e-300, upper)

    def resid(x):
        m_sq, alpha, beta, phi = x
        return [m_sq * alpha + (1.0 - m_sq) * (avg + beta * math.cos(math.radians(phi))) - target]

    starts = [lower + rng.random(4) * (upper - lower) for _ in range(n_starts)]
    best_x, best_cost = None, math.inf
    for x0 in starts:
        x0 = np.clip(x0, lower, upper)
        sol = least_squares(resid, x0, bounds=(lower, upper), method="trf",
                            xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
        cost = abs(sol.fun[0])
        if cost < best_cost:
            best_x, best_cost = sol.x, cost
        if cost <= 1e-14:
            break
    m_sq, alpha, beta, phi = best_x
    beta = 0.0 if bound == 0.0 else float(np.clip(beta, -bound, bound))
    params = QuadrantParams.from_m_sq(float(m_sq), float(phi), float(np.clip(alpha, 0, 1)), beta)
    return params, negation_conjunction_weight(mu_x, mu_y, params) - target


def fit_negation_model(record: NegationRecord, seeds: Iterable[int] = DEFAULT_SEEDS,
                       n_starts: int = DEFAULT_STARTS) -> NegationFockParams:
    """Fit all four quadrants independently by multi-start bounded least squares.

    Per quadrant the unknowns are ``m^2, alpha in [0, 1]``, ``beta`` bounded
    by the interference magnitude of the quadrant's marginal pair, and
    ``phi in [0, 180]``. Starts are drawn uniformly from that box with
    ``numpy.random.default_rng(seed)`` for each seed, so the result is a
    pure function of ``(record, seeds, n_starts)``.

    The best-found parameters are always returned; an unreachable weight
    shows up as a nonzero entry in ``residuals``.
    """
    seeds = tuple(seeds)
    quadrants: Dict[str, QuadrantParams] = {}
    residuals: Dict[str, float] = {}
    for q in QUADRANTS:
        mu_x, mu_y = record.quadrant_marginals(q)
        target = record.quadrant_weight(q)
        best: Optional[Tuple[QuadrantParams, float]] = None
        for seed in seeds:
            rng = np.random.default_rng(seed)
            candidate = _fit_quadrant(mu_x, mu_y, target, rng, n_starts)
            if best is None or abs(candidate[1]) < abs(best[1]):
                best = candidate
        quadrants[q], residuals[q] = best
    return NegationFockParams(quadrants, residuals)
