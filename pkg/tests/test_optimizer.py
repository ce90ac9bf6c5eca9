import math

import numpy as np
import pytest

from trotterkit.errors import GateErrorModel, TrotterErrorParams
from trotterkit.exceptions import DomainError
from trotterkit.models import ModelSpec
from trotterkit.optimizer import (
    CostPair,
    analytic_objective,
    k_opt,
    kappa,
    kappa_curve,
    log_grid,
    optimal_steps,
    phi,
    sweep_alpha,
    sweep_p0,
    tfim_b_value,
)

PARAMS = TrotterErrorParams()
TFIM = ModelSpec("tfim", 10)
XY = ModelSpec("xy", 10)


def random_pairs(count, seed):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        k = int(rng.integers(1, 6))
        yield CostPair(float(10 ** rng.uniform(-6, -1)), float(10 ** rng.uniform(-2, 3)), k)


class TestOptimalSteps:
    def test_first_order_reference(self):
        n_sites, p0 = 5, 5e-5
        rep = optimal_steps(CostPair(2 * n_sites * p0, n_sites * 1.0, 1))
        assert rep.n_star_real == pytest.approx(100, rel=1e-12)
        assert rep.n_star_int == 100
        assert rep.r_min_real == pytest.approx(10 * math.sqrt(2 * p0), rel=1e-12)
        assert rep.r_min == pytest.approx(0.1, rel=1e-12)

    def test_symmetric(self):
        rep = optimal_steps(CostPair(0.3, 0.3, 1))
        assert rep.n_star_real == pytest.approx(1)
        assert rep.r_min == pytest.approx(0.6)
        assert CostPair(0.3, 0.3, 1).total(2) > rep.r_min

    def test_degenerate(self):
        rep = optimal_steps(CostPair(0.2, 0.0, 3))
        assert (rep.n_star_int, rep.r_min) == (1, 0.2)

    @pytest.mark.parametrize("lam", [0.01, 3.0, 250.0])
    def test_homogeneity(self, lam):
        c = CostPair(2e-3, 4.0, 2)
        a, b = optimal_steps(c), optimal_steps(CostPair(lam * 2e-3, lam * 4.0, 2))
        assert b.n_star_real == pytest.approx(a.n_star_real, rel=1e-12)
        assert b.r_min_real == pytest.approx(lam * a.r_min_real, rel=1e-12)

    def test_convexity(self):
        for c in random_pairs(200, 7):
            rep = optimal_steps(c)
            n = rep.n_star_int
            assert n >= 1
            assert c.total(n) <= c.total(n + 1)
            if n > 1:
                assert c.total(n) <= c.total(n - 1)

    def test_grid_agreement(self):
        ns = np.arange(1, 10**6 + 1, dtype=float)
        for c in random_pairs(20, 11):
            rep = optimal_steps(c)
            r = c.c_gate_per_step * ns + c.c_trotter / ns**c.order_k
            i = int(np.argmin(r))
            assert abs(ns[i] - rep.n_star_real) <= 1
            assert rep.r_min <= r[i] * (1 + 1 / rep.n_star_real)

    def test_invalid(self):
        with pytest.raises(DomainError):
            CostPair(0.0, 1.0, 1)


class TestObjective:
    def test_b_value(self):
        assert tfim_b_value(1e-3, 1.0, 2.0) == pytest.approx(125)
        assert tfim_b_value(1e-4, 1.0, 2.0) == pytest.approx(1250)

    def test_phi_values(self):
        assert kappa(125, 1) == pytest.approx(math.sqrt(125))
        assert phi(125, 1) == pytest.approx(22.3607, abs=1e-4)
        assert kappa(125, 2) == pytest.approx(5)
        assert phi(125, 2) == pytest.approx(20)
        assert analytic_objective("tfim", PARAMS, 1e-3, 1.0, 2) == pytest.approx(20)

    @pytest.mark.parametrize("b", [100.0, 1e3, 1e5, 1e8, 1e12])
    def test_continuous_minimizer(self, b):
        ks = np.arange(1, 60)
        grid = [phi(b, int(k)) for k in ks]
        k_star = math.sqrt(math.log2(b)) - 1
        assert abs(ks[int(np.argmin(grid))] - k_star) <= 1

    def test_xy_objective_uses_cost_pair(self):
        assert analytic_objective("xy", PARAMS, 1e-4, 1.0, 2) > 0
        with pytest.raises(DomainError):
            analytic_objective("heisenberg", PARAMS, 1e-4, 1.0, 2)


class TestKopt:
    def test_high_gate_error(self):
        assert k_opt(TFIM, PARAMS, GateErrorModel(1e-2, "eq6")).k == 1

    def test_low_gate_error(self):
        assert k_opt(TFIM, PARAMS, GateErrorModel(1e-6, "eq6")).k >= 2

    def test_report_from_cost_pair(self):
        rep = k_opt(TFIM, PARAMS, GateErrorModel(1e-3, "eq6"))
        assert rep.k == 2
        assert rep.n_star_int >= 1 and rep.r_min > 0

    def test_numeric_mode(self):
        reps = [k_opt(TFIM, PARAMS, GateErrorModel(p, "literal"), mode="numeric", k_max=5)
                for p in log_grid(1e-1, 1e-8, 15)]
        ks = [r.k for r in reps]
        assert all(b >= a for a, b in zip(ks, ks[1:]))

    def test_k_max_limit(self):
        with pytest.raises(DomainError):
            k_opt(TFIM, PARAMS, GateErrorModel(1e-3), k_max=9)


class TestSweeps:
    def test_p0_staircase(self):
        rows = sweep_p0(TFIM, PARAMS, log_grid(1e-8, 1e-2, 30))
        ks = [r.k_opt for r in rows]
        assert all(a >= b for a, b in zip(ks, ks[1:]))
        assert ks[-1] == 1 and ks[0] > 1

    def test_single_point(self):
        (row,) = sweep_p0(TFIM, PARAMS, [3e-4])
        rep = k_opt(TFIM, PARAMS, GateErrorModel(3e-4, "eq6"))
        assert (row.k_opt, row.n_opt, row.r_min) == (rep.k, rep.n_star_int, rep.r_min)

    def test_alpha_trend(self):
        for p0 in (1e-6, 1e-4, 1e-3):
            ks = [r.k_opt for r in sweep_alpha(XY, PARAMS, p0, [0.25, 0.5, 1, 2, 4, 16, 64])]
            assert all(b <= a for a, b in zip(ks, ks[1:]))
        ks = [r.k_opt for r in sweep_alpha(XY, PARAMS, 1e-4, log_grid(0.01, 1000, 30))]
        assert ks[0] > ks[-1]

    def test_parallel_identical(self):
        grid = log_grid(1e-8, 1e-2, 40)
        assert sweep_p0(XY, PARAMS, grid, workers=4) == sweep_p0(XY, PARAMS, grid)

    def test_grid_limits(self):
        with pytest.raises(DomainError):
            log_grid(1e-3, 1e-1, 10_001)
        assert log_grid(1e-3, 1e-1, 3) == pytest.approx([1e-3, 1e-2, 1e-1])


class TestKappaCurve:
    def test_normalized(self):
        curve = kappa_curve(125)
        assert curve.points[0].phi_normalized == 1
        assert curve.points[1].phi / curve.points[0].phi == pytest.approx(0.894, abs=1e-3)
        assert all(p.phi == pytest.approx(2**p.k * p.kappa) for p in curve.points)

    def test_interior_minimum(self):
        phis = [p.phi for p in kappa_curve(1250, "inv_k", range(1, 9)).points]
        i = int(np.argmin(phis))
        assert 0 < i < len(phis) - 1

    def test_bad_b(self):
        with pytest.raises(DomainError):
            kappa_curve(0.0)
