"""
Two-sector Fock model for the conjunction and disjunction of two concepts.

A combined concept is the Fock-space state

    m e^{i lambda} |A>⊗|B>  ⊕  n e^{i nu} (|A> + |B>)/sqrt(2),   m^2 + n^2 = 1

measured by ``M ⊕ (M⊗M)`` for AND and ``M ⊕ (1 - (1-M)⊗(1-M))`` for OR.
Its membership weight reduces to

    mu = m^2 * s2 + n^2 * ((mu_a + mu_b)/2 + beta * cos(theta))

with ``s2 = mu_a*mu_b`` (AND) or ``mu_a + mu_b - mu_a*mu_b`` (OR), and
``beta = min(sqrt(mu_a*mu_b), sqrt((1-mu_a)(1-mu_b)))`` the largest
interference term allowed for orthogonal ``|A>, |B>``.

Angles are in degrees throughout. ``theta`` lives on the canonical branch
[0, 180]; only ``cos(theta)`` is observable. The phases lambda and nu are
carried on :class:`FockParams` but never change any weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from .hilbert import (
    ComplexVector,
    LinearOperator,
    born_weight,
    direct_sum,
    matrix_element,
    tensor_product,
)
from .tolerances import BORN_TOL, FIT_TOL

#: Clamp window for cos(theta) values produced by rounding at the endpoints.
_COS_SLACK = 1e-12


class Connective(str, Enum):
    AND = "AND"
    OR = "OR"


class InfeasibleError(ValueError):
    """No model parameters reproduce the requested weight.

    ``interval`` carries the reachable range when one is known.
    """

    def __init__(self, message: str, interval: Optional["FeasibilityInterval"] = None):
        super().__init__(message)
        self.interval = interval


def _check_weight(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0) or math.isnan(value):
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return value


@dataclass(frozen=True)
class PairWeights:
    """Measured weights of one item for ``A``, ``B`` and ``A <connective> B``."""

    mu_a: float
    mu_b: float
    mu_combined: float
    connective: Connective = Connective.AND
    item: str = ""
    concept_a: str = ""
    concept_b: str = ""

    def __post_init__(self):
        for name in ("mu_a", "mu_b", "mu_combined"):
            object.__setattr__(self, name, _check_weight(name, getattr(self, name)))
        object.__setattr__(self, "connective", Connective(self.connective))

    def swapped(self) -> "PairWeights":
        return PairWeights(self.mu_b, self.mu_a, self.mu_combined, self.connective,
                           self.item, self.concept_b, self.concept_a)


@dataclass(frozen=True)
class FockParams:
    m_sq: float
    n_sq: float
    theta: float
    lambda_phase: float = 0.0
    nu_phase: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.m_sq <= 1.0 and 0.0 <= self.n_sq <= 1.0):
            raise ValueError(f"sector weights must lie in [0, 1]: m^2={self.m_sq}, n^2={self.n_sq}")
        if abs(self.m_sq + self.n_sq - 1.0) > FIT_TOL:
            raise ValueError(f"m^2 + n^2 = {self.m_sq + self.n_sq!r}, expected 1")
        if not (0.0 <= self.theta <= 180.0):
            raise ValueError(f"theta must lie in [0, 180] degrees, got {self.theta!r}")

    @classmethod
    def from_m_sq(cls, m_sq: float, theta: float) -> "FockParams":
        return cls(m_sq=m_sq, n_sq=1.0 - m_sq, theta=theta)


class DeviationKind(str, Enum):
    CLASSICAL_RANGE = "CLASSICAL_RANGE"
    OVEREXTENDED = "OVEREXTENDED"
    DOUBLE_OVEREXTENDED = "DOUBLE_OVEREXTENDED"
    UNDEREXTENDED = "UNDEREXTENDED"
    DOUBLE_UNDEREXTENDED = "DOUBLE_UNDEREXTENDED"


@dataclass(frozen=True)
class DeviationClass:
    kind: DeviationKind
    margin: float = 0.0

    def __post_init__(self):
        if self.margin < 0:
            raise ValueError("margin must be non-negative")


@dataclass(frozen=True)
class FeasibilityInterval:
    """Reachable weights over all ``m^2 in [0, 1]`` and ``theta``.

    ``lo_params`` / ``hi_params`` are parameters attaining the endpoints.
    """

    lo: float
    hi: float
    lo_params: FockParams
    hi_params: FockParams

    def contains(self, value: float, tol: float = FIT_TOL) -> bool:
        return self.lo - tol <= value <= self.hi + tol


# --------------------------------------------------------------------------
# forward model
# --------------------------------------------------------------------------


def interference_magnitude(mu_a: float, mu_b: float) -> float:
    """Largest ``|Re<A|M|B>|`` for orthogonal unit ``|A>, |B>``."""
    mu_a = _check_weight("mu_a", mu_a)
    mu_b = _check_weight("mu_b", mu_b)
    # the min form avoids a rounding-sensitive branch on mu_a + mu_b > 1
    return min(math.sqrt(mu_a * mu_b), math.sqrt((1.0 - mu_a) * (1.0 - mu_b)))


def sector2_term(mu_a: float, mu_b: float, connective: Connective) -> float:
    if Connective(connective) is Connective.AND:
        return mu_a * mu_b
    return mu_a + mu_b - mu_a * mu_b


def _sector1_term(mu_a: float, mu_b: float, theta: float) -> float:
    beta = interference_magnitude(mu_a, mu_b)
    return 0.5 * (mu_a + mu_b) + beta * math.cos(math.radians(theta))


def conjunction_weight(mu_a: float, mu_b: float, params: FockParams) -> float:
    return params.m_sq * mu_a * mu_b + params.n_sq * _sector1_term(mu_a, mu_b, params.theta)


def disjunction_weight(mu_a: float, mu_b: float, params: FockParams) -> float:
    s2 = mu_a + mu_b - mu_a * mu_b
    return params.m_sq * s2 + params.n_sq * _sector1_term(mu_a, mu_b, params.theta)


def combination_weight(mu_a: float, mu_b: float, params: FockParams,
                       connective: Connective) -> float:
    if Connective(connective) is Connective.AND:
        return conjunction_weight(mu_a, mu_b, params)
    return disjunction_weight(mu_a, mu_b, params)


# --------------------------------------------------------------------------
# inversion and fitting
# --------------------------------------------------------------------------


def solve_theta(mu_a: float, mu_b: float, mu_target: float, m_sq: float,
                connective: Connective) -> float:
    """Interference angle (degrees) reproducing ``mu_target`` at fixed ``m_sq``.

    When the interference coefficient ``n^2 * beta`` vanishes, every angle
    gives the same weight; 90 degrees is returned if that weight matches.

    Raises
    ------
    InfeasibleError
        If the required ``cos(theta)`` falls outside [-1, 1].
    """
    mu_a = _check_weight("mu_a", mu_a)
    mu_b = _check_weight("mu_b", mu_b)
    mu_target = _check_weight("mu_target", mu_target)
    m_sq = _check_weight("m_sq", m_sq)
    n_sq = 1.0 - m_sq
    beta = interference_magnitude(mu_a, mu_b)
    residual = mu_target - m_sq * sector2_term(mu_a, mu_b, connective) - n_sq * 0.5 * (mu_a + mu_b)
    coeff = n_sq * beta
    if coeff == 0.0:
        if abs(residual) <= FIT_TOL:
            return 90.0
        raise InfeasibleError(
            f"no interference available (n^2*beta = 0) and residual {residual:.3g} != 0"
        )
    cos_theta = residual / coeff
    if abs(cos_theta) > 1.0:
        if (abs(cos_theta) - 1.0) * coeff > _COS_SLACK:
            raise InfeasibleError(
                f"required cos(theta) = {cos_theta:.6g} lies outside [-1, 1] at m^2 = {m_sq}"
            )
        cos_theta = math.copysign(1.0, cos_theta)
    return math.degrees(math.acos(cos_theta))


def feasibility_interval(mu_a: float, mu_b: float,
                         connective: Connective) -> FeasibilityInterval:
    """Closed range of weights reachable for some ``m^2`` and ``theta``.

    For fixed ``m^2`` the reachable set is
    ``[m^2 s2 + n^2 (avg - beta), m^2 s2 + n^2 (avg + beta)]``; both ends are
    linear in ``m^2``, so the hull over ``m^2`` is spanned by ``m^2 in {0, 1}``.
    """
    mu_a = _check_weight("mu_a", mu_a)
    mu_b = _check_weight("mu_b", mu_b)
    s2 = sector2_term(mu_a, mu_b, connective)
    avg = 0.5 * (mu_a + mu_b)
    beta = interference_magnitude(mu_a, mu_b)
    pure2 = FockParams(m_sq=1.0, n_sq=0.0, theta=90.0)
    if s2 <= avg - beta:
        lo, lo_params = s2, pure2
    else:
        lo, lo_params = avg - beta, FockParams(m_sq=0.0, n_sq=1.0, theta=180.0)
    if s2 >= avg + beta:
        hi, hi_params = s2, pure2
    else:
        hi, hi_params = avg + beta, FockParams(m_sq=0.0, n_sq=1.0, theta=0.0)
    return FeasibilityInterval(lo, hi, lo_params, hi_params)


@dataclass(frozen=True)
class FitStrategy:
    """How to pick one solution out of the one-parameter family of fits.

    ``fix-m2``
        use the given ``m_sq`` and solve for theta.
    ``max-sector1``
        largest ``n^2`` for which some theta works.
    ``min-interference``
        the feasible ``n^2`` that minimises ``|cos(theta)|``.
    """

    kind: str
    m_sq: Optional[float] = None

    KINDS = ("fix-m2", "max-sector1", "min-interference")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown fit strategy {self.kind!r}; choose from {self.KINDS}")
        if self.kind == "fix-m2":
            if self.m_sq is None:
                raise ValueError("fix-m2 needs a value")
            object.__setattr__(self, "m_sq", _check_weight("m_sq", self.m_sq))
        elif self.m_sq is not None:
            raise ValueError(f"{self.kind} takes no value")

    @classmethod
    def fix_m2(cls, m_sq: float) -> "FitStrategy":
        return cls("fix-m2", m_sq)

    @classmethod
    def max_sector1(cls) -> "FitStrategy":
        return cls("max-sector1")

    @classmethod
    def min_interference(cls) -> "FitStrategy":
        return cls("min-interference")

    @classmethod
    def parse(cls, text: str) -> "FitStrategy":
        """Parse ``fix-m2=<v>``, ``max-sector1`` or ``min-interference``."""
        text = text.strip().lower().replace("_", "-")
        if text.startswith("fix-m2"):
            _, sep, value = text.partition("=")
            if not sep:
                raise ValueError("fix-m2 needs a value, e.g. fix-m2=0.3")
            try:
                return cls.fix_m2(float(value))
            except ValueError as exc:
                raise ValueError(f"bad fix-m2 value {value!r}: {exc}") from None
        return cls(text)

    def __str__(self):
        return f"fix-m2={self.m_sq:g}" if self.kind == "fix-m2" else self.kind


def _feasible_n_sq(d: float, a: float, b: float) -> Optional[Tuple[float, float]]:
    """Interval of ``x in [0, 1]`` with ``a*x <= d <= b*x``, or None.

    The bounds are exact; a rounding-sized gap (below ``_COS_SLACK`` in
    weight) between them collapses to a single point instead of failing.
    """
    eps = _COS_SLACK
    lo, hi = 0.0, 1.0
    # a*x <= d
    if a > 0:
        hi = min(hi, d / a)
    elif a < 0:
        lo = max(lo, d / a)
    elif d < -eps:
        return None
    # b*x >= d
    if b > 0:
        lo = max(lo, d / b)
    elif b < 0:
        hi = min(hi, d / b)
    elif d > eps:
        return None
    if lo <= hi:
        return lo, hi
    x = min(1.0, max(0.0, 0.5 * (lo + hi)))
    if max(a * x - d, d - b * x) <= eps:
        return x, x
    return None


def fit_pair(record: PairWeights, strategy: FitStrategy) -> FockParams:
    """Fit ``(m^2, n^2, theta)`` so the forward model reproduces the record.

    Raises
    ------
    InfeasibleError
        With the record's :class:`FeasibilityInterval` attached.
    """
    mu_a, mu_b, target = record.mu_a, record.mu_b, record.mu_combined
    conn = record.connective
    interval = feasibility_interval(mu_a, mu_b, conn)

    if strategy.kind == "fix-m2":
        try:
            theta = solve_theta(mu_a, mu_b, target, strategy.m_sq, conn)
        except InfeasibleError as exc:
            raise InfeasibleError(str(exc), interval) from None
        params = FockParams.from_m_sq(strategy.m_sq, theta)
    else:
        s2 = sector2_term(mu_a, mu_b, conn)
        avg = 0.5 * (mu_a + mu_b)
        beta = interference_magnitude(mu_a, mu_b)
        d = target - s2
        window = _feasible_n_sq(d, avg - beta - s2, avg + beta - s2)
        if window is None:
            raise InfeasibleError(
                f"{conn.value} weight {target:g} outside reachable range "
                f"[{interval.lo:.6g}, {interval.hi:.6g}]",
                interval,
            )
        n_lo, n_hi = window
        if strategy.kind == "max-sector1" or beta == 0.0:
            n_sq = n_hi
        else:
            n_sq = _least_interference_n_sq(d, avg - s2, beta, n_lo, n_hi)
        theta = solve_theta(mu_a, mu_b, target, 1.0 - n_sq, conn)
        params = FockParams(m_sq=1.0 - n_sq, n_sq=n_sq, theta=theta)

    residual = combination_weight(mu_a, mu_b, params, conn) - target
    if abs(residual) > FIT_TOL:
        raise InfeasibleError(f"fit residual {residual:.3g} exceeds {FIT_TOL:g}", interval)
    return params


def _least_interference_n_sq(d: float, c: float, beta: float, lo: float, hi: float) -> float:
    # cos(theta) = (d - x*c) / (x*beta), x = n^2; monotone in x apart from its zero at x = d/c
    def abs_cos(x: float) -> float:
        denom = x * beta
        return abs(d - x * c) / denom if denom > 0 else math.inf

    candidates = [hi, lo]
    if c != 0.0 and lo <= d / c <= hi:
        candidates.insert(0, d / c)
    best = min(candidates, key=lambda x: (abs_cos(x), -x))
    if best == 0.0 and hi == 0.0:
        return 0.0
    return best


def classify_deviation(record: PairWeights) -> DeviationClass:
    """Label over/underextension relative to the classical bounds.

    AND: over past ``min(mu_a, mu_b)``, double-over past the max.
    OR: under below ``max``, double-under below ``min``, double-over past
    ``mu_a + mu_b``. The strongest applicable label is returned with the
    distance past its bound.
    """
    lo_w, hi_w = sorted((record.mu_a, record.mu_b))
    mu = record.mu_combined
    K = DeviationKind
    if record.connective is Connective.AND:
        if mu > hi_w:
            return DeviationClass(K.DOUBLE_OVEREXTENDED, mu - hi_w)
        if mu > lo_w:
            return DeviationClass(K.OVEREXTENDED, mu - lo_w)
        return DeviationClass(K.CLASSICAL_RANGE, 0.0)
    if mu < lo_w:
        return DeviationClass(K.DOUBLE_UNDEREXTENDED, lo_w - mu)
    if mu < hi_w:
        return DeviationClass(K.UNDEREXTENDED, hi_w - mu)
    if mu > lo_w + hi_w:
        return DeviationClass(K.DOUBLE_OVEREXTENDED, mu - (lo_w + hi_w))
    return DeviationClass(K.CLASSICAL_RANGE, 0.0)


# --------------------------------------------------------------------------
# explicit vector realizations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Sector1Realization:
    """Orthogonal unit vectors ``|A>, |B>`` and a projector ``M`` in C^3."""

    vec_a: ComplexVector
    vec_b: ComplexVector
    proj: LinearOperator

    @property
    def dimension(self) -> int:
        return self.proj.dim

    @property
    def mu_a(self) -> float:
        return born_weight(self.vec_a, self.proj)

    @property
    def mu_b(self) -> float:
        return born_weight(self.vec_b, self.proj)

    @property
    def interference(self) -> float:
        return matrix_element(self.vec_a, self.proj, self.vec_b).real


def _three_dim_frame(p_a: float, p_b: float, r_a: float, r_b: float, z: complex):
    # unit A, B in C^3 with A ⟂ B, N = diag(1, 1, 0), <A|N|A> = p_a, <B|N|B> = p_b
    # and <A|N|B> = z * sqrt(r_a r_b) for a unit phase z, where r = 1 - p is
    # passed separately to keep its relative precision. Needs r_a r_b <= p_a p_b.
    a = np.array([math.sqrt(p_a), 0.0, math.sqrt(r_a)], dtype=complex)
    cross = r_a * r_b / p_a if p_a > 0 else 0.0
    b1 = z * math.sqrt(cross)
    b2 = math.sqrt(max(0.0, p_b - cross))
    b3 = -z * math.sqrt(r_b) if r_a > 0 else math.sqrt(r_b)
    return a, np.array([b1, b2, b3], dtype=complex)


def realize_sector1(mu_a: float, mu_b: float, target_interference: float) -> Sector1Realization:
    """Build ``|A>, |B>, M`` with the given Born weights and ``Re<A|M|B>``.

    The vectors are orthogonal, so ``(|A> + |B>)/sqrt(2)`` is a unit state.
    With a single direction outside (or inside) the range of ``M``,
    orthogonality pins ``|<A|M|B>|`` to the interference bound, and the
    target is reached through the phase of ``<A|M|B>``.

    Raises
    ------
    ValueError
        If ``|target_interference|`` exceeds the interference bound.
    """
    bound = interference_magnitude(mu_a, mu_b)
    if abs(target_interference) > bound + 1e-12:
        raise ValueError(
            f"|interference| {abs(target_interference):.6g} exceeds the bound {bound:.6g}"
        )
    cos_t = max(-1.0, min(1.0, target_interference / bound)) if bound > 0 else 0.0
    z = complex(cos_t, math.sqrt(max(0.0, 1.0 - cos_t * cos_t)))
    if (1.0 - mu_a) * (1.0 - mu_b) <= mu_a * mu_b:
        a, b = _three_dim_frame(mu_a, mu_b, 1.0 - mu_a, 1.0 - mu_b, z)
        proj = np.diag([1.0, 1.0, 0.0])
    else:
        # work with the complement: <A|(1-M)|B> = -<A|M|B> for orthogonal A, B
        a, b = _three_dim_frame(1.0 - mu_a, 1.0 - mu_b, mu_a, mu_b, -z)
        proj = np.diag([0.0, 0.0, 1.0])
    real = Sector1Realization(
        ComplexVector(a / np.linalg.norm(a), unit=True),
        ComplexVector(b / np.linalg.norm(b), unit=True),
        LinearOperator(proj, projector=True),
    )
    errors = (real.mu_a - mu_a, real.mu_b - mu_b, real.interference - target_interference)
    if max(abs(e) for e in errors) > BORN_TOL:
        raise ArithmeticError(f"realization readback off by {errors}")
    return real


def fock_combination_state(real: Sector1Realization, params: FockParams,
                           connective: Connective):
    """Full Fock-space state and membership projector for ``A <connective> B``.

    Returns ``(state, projector)`` on ``H ⊕ (H⊗H)``; the Born weight of the
    pair equals :func:`combination_weight` with the realization's weights and
    ``Re<A|M|B>`` in place of ``beta*cos(theta)``.
    """
    m = math.sqrt(params.m_sq)
    n = math.sqrt(params.n_sq)
    lam = complex(np.exp(1j * math.radians(params.lambda_phase)))
    nu = complex(np.exp(1j * math.radians(params.nu_phase)))
    sector1 = (real.vec_a + real.vec_b) * (n * nu / math.sqrt(2.0))
    sector2 = tensor_product(real.vec_a, real.vec_b) * (m * lam)
    state = direct_sum(sector1, sector2)
    if Connective(connective) is Connective.AND:
        two = tensor_product(real.proj, real.proj)
    else:
        comp = real.proj.complement()
        two = LinearOperator.identity(real.dimension ** 2) - tensor_product(comp, comp)
        two = LinearOperator(two.matrix, projector=True)
    return ComplexVector(state.components, unit=True), direct_sum(real.proj, two)
