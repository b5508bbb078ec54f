import dataclasses

import numpy as np
import pytest

from fockfit.combination import Connective, FockParams, InfeasibleError, combination_weight
from fockfit.negation import (
    QUADRANTS,
    NegationFockParams,
    NegationRecord,
    QuadrantParams,
    classicality_conditions,
    construct_entangled,
    fit_negation_model,
    kolmogorov_oracle,
)
from fockfit.oracles import (
    OracleConfig,
    bisect_theta,
    grid_validate_fit,
    record_from_joint,
    sample_classical_records,
)


def mint_forward(theta):
    return combination_weight(0.87, 0.81, FockParams.from_m_sq(0.3, theta), Connective.AND)


class TestBisection:
    def test_mint(self):
        theta = bisect_theta(mint_forward, 0.9)
        assert theta == pytest.approx(23.9, abs=0.05)
        assert abs(mint_forward(theta) - 0.9) <= 1e-8

    def test_endpoint(self):
        assert bisect_theta(mint_forward, mint_forward(0.0)) == pytest.approx(0.0, abs=1e-6)

    def test_out_of_range(self):
        with pytest.raises(InfeasibleError):
            bisect_theta(mint_forward, 0.999)

    def test_flat_forward(self):
        assert bisect_theta(lambda t: 0.3, 0.3) == 90.0
        with pytest.raises(InfeasibleError):
            bisect_theta(lambda t: 0.3, 0.4)


class TestSampling:
    def test_seed_42(self):
        (rec,) = sample_classical_records(1, 42)
        assert classicality_conditions(rec, tolerance=1e-12).classical

    def test_degenerate_joint(self):
        rec = record_from_joint([1, 0, 0, 0])
        assert (rec.mu_a, rec.mu_b, rec.mu_ab) == (1, 1, 1)
        assert rec.mu_a_neg == rec.mu_b_neg == rec.mu_ab_neg == rec.mu_aneg_b == rec.mu_aneg_bneg == 0

    def test_uniform_joint(self):
        rec = record_from_joint([0.25] * 4)
        assert rec.mu_a == rec.mu_b == rec.mu_a_neg == rec.mu_b_neg == 0.5
        assert all(rec.quadrant_weight(q) == 0.25 for q in QUADRANTS)

    def test_count_validated(self):
        with pytest.raises(ValueError):
            sample_classical_records(0, 1)

    def test_reproducible(self):
        assert sample_classical_records(5, 9) == sample_classical_records(5, 9)

    def test_all_accepted(self):
        for rec in sample_classical_records(200, 17):
            assert classicality_conditions(rec, tolerance=1e-12).classical
            assert kolmogorov_oracle(rec)
            construct_entangled(rec)


class TestGridValidation:
    def test_config_resolution(self):
        with pytest.raises(ValueError):
            OracleConfig(resolution=50)

    def test_classical_fit_passes(self):
        rec = sample_classical_records(1, 3)[0]
        assert grid_validate_fit(rec, fit_negation_model(rec))

    def test_perturbed_fit_fails(self):
        rec = sample_classical_records(1, 3)[0]
        fit = fit_negation_model(rec)
        # shift alpha in AB until the squared residual grows by ~0.1
        p = fit["AB"]
        worse = dataclasses.replace(p, m=1.0, n=0.0, alpha=min(1.0, rec.mu_ab + 0.4)
                                    if rec.mu_ab < 0.5 else rec.mu_ab - 0.4)
        bad = NegationFockParams(dict(fit.quadrants, AB=worse))
        assert not grid_validate_fit(rec, bad)

    def test_sector1_average_record(self):
        rec = NegationRecord(0.6, 0.2, 0.4, 0.8, 0.4, 0.7, 0.3, 0.6)
        zero = NegationFockParams({q: QuadrantParams(0.0, 1.0, 90.0, 0.0, 0.0) for q in QUADRANTS})
        assert grid_validate_fit(rec, zero)

    def test_single_product_grid(self):
        # full membership gives a zero interference bound
        rec = record_from_joint([1, 0, 0, 0])
        assert grid_validate_fit(rec, fit_negation_model(rec))

    def test_paper_dataset_fits(self, paper_dataset):
        for r in paper_dataset:
            neg = r.negation_record()
            if neg is not None:
                assert grid_validate_fit(neg, fit_negation_model(neg), OracleConfig(200))


def test_grid_minimum_matches_brute_force():
    # the sorted-product search must equal a literal 4-d scan on a small grid
    from fockfit.oracles import _grid_min_sq_residual

    rng = np.random.default_rng(0)
    res = 100
    grid = np.linspace(0, 1, res)
    phis = np.radians(np.linspace(0, 180, res))
    for _ in range(3):
        x, y, target = rng.random(3)
        bound = min(np.sqrt(x * y), np.sqrt((1 - x) * (1 - y)))
        betas = np.linspace(-bound, bound, res)
        inter = np.outer(betas, np.cos(phis)).ravel()
        m = grid[:, None, None]
        a = grid[None, :, None]
        vals = m * a + (1 - m) * (0.5 * (x + y) + inter[None, None, :])
        brute = float(np.min((vals - target) ** 2))
        assert _grid_min_sq_residual(x, y, target, bound, res) == pytest.approx(brute, abs=1e-15)
