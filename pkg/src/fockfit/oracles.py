"""
Brute-force cross-checks for the closed-form routines.

Nothing here calls the code it verifies: angles come from bisection on the
forward formula, Born weights from raw matrix arithmetic, classical records
from explicit joint distributions, and fit optima from an exhaustive grid.
Used by the test-suite and by ``fockfit analyze --verify``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Sequence

import numpy as np

from .combination import InfeasibleError
from .negation import QUADRANTS, NegationFockParams, NegationRecord


@dataclass(frozen=True)
class OracleConfig:
    resolution: int = 200
    seed: int = 0
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.resolution < 100:
            raise ValueError("angle grids need a resolution of at least 100")


def bisect_theta(forward: Callable[[float], float], target: float,
                 tol: float = 1e-8, max_iter: int = 200) -> float:
    """Angle in [0, 180] degrees where ``forward`` hits ``target``.

    ``forward`` must be monotone in theta, which holds for any function
    affine in ``cos(theta)``. Bisection runs until the bracket collapses, so
    the angle is resolved far below ``tol`` wherever the slope allows.
    """
    lo, hi = 0.0, 180.0
    f_lo, f_hi = forward(lo), forward(hi)
    if abs(f_hi - f_lo) <= tol:
        if abs(f_lo - target) <= tol:
            return 90.0
        raise InfeasibleError(f"forward is flat at {f_lo:.6g}, target {target:.6g}")
    # cos is flat at both ends, so bisection alone would stop short of them
    if target == f_lo:
        return lo
    if target == f_hi:
        return hi
    increasing = f_hi > f_lo
    if not (min(f_lo, f_hi) - tol <= target <= max(f_lo, f_hi) + tol):
        raise InfeasibleError(
            f"target {target:.6g} outside [{min(f_lo, f_hi):.6g}, {max(f_lo, f_hi):.6g}]"
        )
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        below = forward(mid) < target
        if below == increasing:
            lo = mid
        else:
            hi = mid
    theta = 0.5 * (lo + hi)
    if abs(forward(theta) - target) > tol:
        # target sits on an endpoint within tol
        theta = lo if abs(forward(lo) - target) <= abs(forward(hi) - target) else hi
    return theta


def born_dense(state: np.ndarray, proj: np.ndarray) -> float:
    """``<psi|P|psi>`` from raw arrays."""
    psi = np.asarray(state, dtype=complex)
    mat = np.asarray(proj, dtype=complex)
    return float(np.real(np.conj(psi) @ mat @ psi))


def record_from_joint(p: Sequence[float], item: str = "") -> NegationRecord:
    """Record induced by atom probabilities over ``(AB, AB', A'B, A'B')``."""
    p_ab, p_abn, p_anb, p_anbn = (float(x) for x in p)
    return NegationRecord(
        mu_a=p_ab + p_abn,
        mu_b=p_ab + p_anb,
        mu_a_neg=p_anb + p_anbn,
        mu_b_neg=p_abn + p_anbn,
        mu_ab=p_ab,
        mu_ab_neg=p_abn,
        mu_aneg_b=p_anb,
        mu_aneg_bneg=p_anbn,
        item=item,
    )


def sample_classical_records(count: int, seed: int) -> List[NegationRecord]:
    """``count`` records, each induced by a Dirichlet(1,1,1,1) joint distribution."""
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        p = rng.dirichlet(np.ones(4))
        p = p / math.fsum(p)
        out.append(record_from_joint(p, item=f"classical-{seed}-{i}"))
    return out


def _grid_min_sq_residual(mu_x: float, mu_y: float, target: float, bound: float,
                          resolution: int) -> float:
    # exact minimum over the full 4-d grid: the model depends on (beta, phi)
    # only via beta*cos(phi), so scan (m^2, alpha) and bisect the sorted products
    grid = np.linspace(0.0, 1.0, resolution)
    betas = np.linspace(-bound, bound, resolution)
    phis = np.radians(np.linspace(0.0, 180.0, resolution))
    products = np.unique(np.outer(betas, np.cos(phis)).ravel())
    m_sq, alpha = np.meshgrid(grid, grid, indexing="ij")
    m_sq, alpha = m_sq.ravel(), alpha.ravel()
    n_sq = 1.0 - m_sq
    need = target - m_sq * alpha - n_sq * 0.5 * (mu_x + mu_y)
    best = np.abs(need)
    live = n_sq > 0
    want = need[live] / n_sq[live]
    idx = np.searchsorted(products, want)
    for k in (np.clip(idx - 1, 0, products.size - 1), np.clip(idx, 0, products.size - 1)):
        resid = np.abs(need[live] - n_sq[live] * products[k])
        best[live] = np.minimum(best[live], resid)
    return float(np.min(best) ** 2)


def grid_validate_fit(record: NegationRecord, fitted: NegationFockParams,
                      config: OracleConfig = OracleConfig()) -> bool:
    """False if some grid point beats the fit's total squared residual.

    The grid spans ``m^2, alpha in [0, 1]``, ``beta`` within the quadrant's
    interference bound and ``phi in [0, 180]``, ``resolution`` points each.
    """
    fitted_total = 0.0
    grid_total = 0.0
    for q in QUADRANTS:
        mu_x, mu_y = record.quadrant_marginals(q)
        target = record.quadrant_weight(q)
        p = fitted[q]
        model = (p.m ** 2) * p.alpha + (p.n ** 2) * (
            0.5 * (mu_x + mu_y) + p.beta * math.cos(math.radians(p.phi))
        )
        fitted_total += (model - target) ** 2
        if (1 - mu_x) * (1 - mu_y) < mu_x * mu_y:
            bound = math.sqrt((1 - mu_x) * (1 - mu_y))
        else:
            bound = math.sqrt(mu_x * mu_y)
        grid_total += _grid_min_sq_residual(mu_x, mu_y, target, bound, config.resolution)
    return fitted_total - grid_total <= config.tolerance
