"""Finite-difference engine: stencils, wall closure, full runs."""

import math

import numpy as np
import pytest

from hypersorb.errors import ConfigError, InvalidInput, StabilityError
from hypersorb.fdm import (
    Grid,
    apply_surface,
    apply_symmetry,
    default_lambda,
    first_step_coefficients,
    interior_coefficients,
    iterate,
    run_fdm,
    step_first,
    step_interior,
)
from hypersorb.params import Params, equilibrium, parabolic_ic, step_ic
from conftest import first_local_max, interior_maxima


class TestGrid:
    def test_from_lambda_respects_ratio(self):
        g = Grid.from_lambda(100, 2.0, 0.025)
        assert g.h == 0.005
        assert g.lam <= 0.025 + 1e-15
        assert g.n_t * g.k == pytest.approx(2.0, rel=1e-15)

    def test_grids_cover_domain(self):
        g = Grid.from_lambda(16, 1.0, 0.02)
        z = g.zgrid()
        t = g.tgrid()
        assert z[0] == 0.0 and z[-1] == 0.5 and z.size == 17
        assert t[0] == 0.0 and t[-1] == 1.0 and t.size == g.n_t + 1

    def test_validation(self):
        with pytest.raises(InvalidInput):
            Grid.from_lambda(4, 1.0, 0.02)  # too coarse
        with pytest.raises(InvalidInput):
            Grid.from_lambda(16, 0.0, 0.02)
        with pytest.raises(InvalidInput):
            Grid.from_lambda(16, 1.0, 0.0)

    def test_default_lambda(self):
        assert default_lambda(1e-3) == pytest.approx(0.5 * math.sqrt(1e-3))
        assert default_lambda(1e-3) <= 2.5e-2
        assert default_lambda(0.25) == 2.5e-2  # capped
        with pytest.raises(ConfigError):
            default_lambda(0.0)


class TestStencils:
    # dyadic parameters make every stencil weight exactly representable
    B, lam = 0.25, 0.25
    grid = Grid.from_lambda(128, 1.0, 0.25)

    def test_first_step_preserves_constants_exactly(self):
        row = np.full(self.grid.n_z + 1, 3.0)
        out = step_first(row, None, self.grid, self.B)
        assert np.array_equal(out, row)

    def test_first_step_against_direct_formula(self):
        # node next to an emptied wall: N0 (lam^2/2B + (B - lam^2)/B)
        row = np.full(self.grid.n_z + 1, 3.0)
        row[-1] = 0.0
        out = step_first(row, None, self.grid, self.B)
        expected = 3.0 * (self.lam**2 / (2 * self.B) + (self.B - self.lam**2) / self.B)
        assert expected == 2.625
        assert out[-2] == expected
        assert np.array_equal(out[1:-2], row[1:-2])  # untouched away from the jump

    def test_first_step_rate_term(self):
        row = np.full(self.grid.n_z + 1, 3.0)
        g = np.full(self.grid.n_z + 1, 0.5)
        out = step_first(row, g, self.grid, self.B)
        _, c_g = first_step_coefficients(self.grid, self.B)
        assert out[5] == pytest.approx(3.0 + 0.5 * c_g, rel=1e-15)

    def test_interior_preserves_constants_exactly(self):
        row = np.full(self.grid.n_z + 1, 3.0)
        out = step_interior(row, row, self.grid, self.B)
        assert np.array_equal(out, row)

    def test_interior_coefficients_sum_to_one(self):
        for B, lam, n_z in [(0.1, 0.025, 100), (1e-3, 0.0158, 64), (0.25, 0.25, 16)]:
            g = Grid.from_lambda(n_z, 1.0, lam)
            a, b, c = interior_coefficients(g, B)
            assert 2 * a + b + c == pytest.approx(1.0, rel=1e-14)

    def test_increment_form_equals_direct_form(self):
        rng = np.random.default_rng(7)
        g = Grid.from_lambda(32, 0.5, 0.02)
        B = 1e-3
        prev = 3.0 + rng.standard_normal(33)
        prev2 = 3.0 + rng.standard_normal(33)
        out = step_interior(prev, prev2, g, B)
        a, b, c = interior_coefficients(g, B)
        direct = a * (prev[2:] + prev[:-2]) + b * prev[1:-1] + c * prev2[1:-1]
        np.testing.assert_allclose(out[1:-1], direct, rtol=1e-12)

    @pytest.mark.parametrize("q", [3, 9, 31])
    def test_plane_wave_amplification(self, q):
        # periodic harness: a discrete plane wave advances by the root of the
        # stencil's characteristic polynomial
        B, lam = 1e-3, 2.5e-2
        grid = Grid.from_lambda(20, 0.1, lam)
        a, b, c = interior_coefficients(grid, B)
        M = 64
        theta = 2 * math.pi * q / M
        g_root = np.roots([1.0, -(2 * a * math.cos(theta) + b), -c])[0]
        assert np.all(np.abs(np.roots([1.0, -(2 * a * math.cos(theta) + b), -c])) <= 1 + 1e-12)
        wave = np.exp(1j * theta * np.arange(M))
        prev2, prev = wave, g_root * wave

        def ring_step(p1, p2):
            pad1 = np.concatenate([p1[-1:], p1, p1[:1]])
            pad2 = np.concatenate([p2[-1:], p2, p2[:1]])
            out = step_interior(pad1.real, pad2.real, grid, B) + 1j * step_interior(
                pad1.imag, pad2.imag, grid, B
            )
            return out[1:-1]

        new = ring_step(prev, prev2)
        assert np.max(np.abs(new - g_root**2 * wave)) < 1e-12


class TestBoundaries:
    def test_symmetry_mirrors_neighbour(self):
        row = np.arange(10.0)
        apply_symmetry(row)
        assert row[0] == row[1]
        assert row[1] - row[0] == 0.0  # zero discrete gradient at the plane

    def test_symmetry_keeps_constants(self):
        row = np.full(10, 2.0)
        assert np.array_equal(apply_symmetry(row.copy()), row)

    def test_equilibrium_fixed_point(self):
        p = Params(A=0.01, B=0.1, L=1.0, N0=3.0)
        n_eq, sigma_eq = equilibrium(p)
        g = Grid.from_lambda(64, 1.0, 0.025)
        row = np.full(g.n_z + 1, n_eq)
        wall, sigma = apply_surface(row, sigma_eq, g, p)
        assert wall == pytest.approx(n_eq, abs=1e-12)
        assert sigma == pytest.approx(sigma_eq, abs=1e-12)

    def test_conservation_identity_by_construction(self):
        rng = np.random.default_rng(3)
        p = Params(A=0.01, B=0.1, L=1.0, N0=3.0)
        g = Grid.from_lambda(64, 1.0, 0.025)
        row = 1.0 + rng.random(g.n_z + 1)
        _, sigma = apply_surface(row, 0.4, g, p)
        mass = np.trapezoid(row, g.zgrid())
        assert abs(2 * mass + 2 * sigma - 3.0) < 1e-14 * 3.0

    def test_degenerate_closure_rejected(self):
        p = Params(A=1e-10, B=0.1, L=0.0, N0=3.0)
        g = Grid(n_z=8, n_t=1, h=1e-15, k=1.0, lam=1e15, T=1.0)
        with pytest.raises(ConfigError):
            apply_surface(np.full(9, 1.0), 0.0, g, p)


class TestRunFdm:
    def test_first_maximum_landmark(self, fdm_wavefront):
        t_max = first_local_max(fdm_wavefront.t, fdm_wavefront.sigma, 0.2)
        assert t_max == pytest.approx(0.32, abs=0.05)

    def test_monotonic_in_small_relaxation_regime(self, fdm_small_relaxation):
        ser = fdm_small_relaxation
        assert interior_maxima(ser.t, ser.sigma, 1e-3) == []

    def test_exact_conservation_every_level(self, fdm_wavefront):
        assert np.max(fdm_wavefront.conservation) < 1e-12 * 3.0

    def test_finite_speed_holding_time(self, fdm_wavefront, wavefront_params):
        # the centre keeps its initial density until the front has covered
        # 80% of the half width
        hold = 0.8 * 0.5 * math.sqrt(wavefront_params.B)
        probe = fdm_wavefront.probes[0.0]
        window = fdm_wavefront.t < hold
        assert np.max(np.abs(probe[window] - 3.0)) < 1e-2 * 3.0

    def test_initial_sigma_is_quadrature_of_step(self, fdm_wavefront):
        # conservation pins sigma(0) to the trapezoidal defect of the jump, h N0/2
        g = fdm_wavefront.meta["grid"]
        assert fdm_wavefront.sigma[0] == pytest.approx(g["h"] * 3.0 / 2.0, abs=1e-15)

    def test_first_step_sigma_increment_small(self, fdm_wavefront, wavefront_params):
        s0, s1 = fdm_wavefront.sigma[:2]
        k = fdm_wavefront.t[1]
        c_star = 1.0 / math.sqrt(wavefront_params.B)
        assert s1 > 0
        assert abs(s1 - s0) < k * 3.0 * c_star  # well below the landmark slope scale

    def test_smooth_data_suppresses_bulk_oscillations(self, wavefront_params, fdm_wavefront):
        grid = Grid.from_lambda(200, 2.0, default_lambda(wavefront_params.B))
        smooth = run_fdm(wavefront_params, parabolic_ic(), grid, probes=[0.0])

        def total_rise(x):
            d = np.diff(x)
            return float(np.sum(d[d > 0]))

        rough = total_rise(fdm_wavefront.probes[0.0])
        gentle = total_rise(smooth.probes[0.0])
        assert gentle < 0.2 * rough

    def test_smooth_initial_sigma_second_order(self, wavefront_params):
        grid = Grid.from_lambda(100, 0.1, 0.025)
        ser = run_fdm(wavefront_params, parabolic_ic(), grid)
        assert abs(ser.sigma[0]) < grid.h**2 * 3.0

    def test_grid_refinement_converges(self, wavefront_params):
        _, sigma_eq = equilibrium(wavefront_params)
        lam = default_lambda(wavefront_params.B)
        coarse = run_fdm(wavefront_params, parabolic_ic(), Grid.from_lambda(100, 2.0, lam))
        fine = run_fdm(wavefront_params, parabolic_ic(), Grid.from_lambda(200, 2.0, lam))
        for tq in (0.5, 1.0, 2.0):
            a = np.interp(tq, coarse.t, coarse.sigma)
            b = np.interp(tq, fine.t, fine.sigma)
            assert abs(a - b) < 0.01 * sigma_eq

    def test_stability_at_documented_ratio(self):
        # lambda = 2.5e-2 runs stably at B = 1e-3 over the full window
        p = Params(A=0.01, B=1e-3, L=1.0, N0=3.0)
        grid = Grid.from_lambda(64, 2.0, 2.5e-2)
        ser = run_fdm(p, step_ic(), grid)
        assert np.all(np.isfinite(ser.sigma))
        assert np.max(ser.conservation) < 1e-12 * 3.0

    def test_unstable_ratio_detected(self):
        p = Params(A=0.01, B=1e-3, L=1.0, N0=3.0)
        grid = Grid.from_lambda(64, 2.0, 0.05)  # above sqrt(B) ~ 0.0316
        with pytest.raises(ConfigError):
            run_fdm(p, step_ic(), grid)
        with pytest.raises(StabilityError) as err:
            run_fdm(p, step_ic(), grid, enforce_stability=False)
        assert "lambda" in str(err.value)

    def test_wave_regime_required(self):
        p = Params(A=0.01, B=0.0, L=1.0, N0=3.0)
        with pytest.raises(ConfigError):
            run_fdm(p, step_ic(), Grid.from_lambda(16, 1.0, 0.02))

    def test_probe_validation(self, wavefront_params):
        grid = Grid.from_lambda(16, 0.1, 0.02)
        with pytest.raises(InvalidInput):
            run_fdm(wavefront_params, step_ic(), grid, probes=[0.7])

    def test_probes_symmetric(self, wavefront_params):
        grid = Grid.from_lambda(32, 0.2, 0.025)
        ser = run_fdm(wavefront_params, step_ic(), grid, probes=[0.25, -0.25])
        np.testing.assert_array_equal(ser.probes[0.25], ser.probes[-0.25])

    def test_initial_rate_compatibility_reported(self, wavefront_params):
        grid = Grid.from_lambda(32, 0.1, 0.025)
        g = np.zeros(33)
        g[5] = 1.0  # nonzero mass: incompatible with empty walls
        ser = run_fdm(wavefront_params, step_ic(), grid, g=g)
        assert ser.meta["g_compatibility_residual"] != 0.0
        assert np.all(np.isfinite(ser.sigma))


class TestConstantState:
    def test_exact_with_inert_walls_dyadic(self):
        # dyadic steps keep every operation exact: bitwise constant forever
        p = Params(A=0.25, B=0.25, L=0.0, N0=3.0)
        grid = Grid.from_lambda(128, 1.0, 0.25)
        row0 = np.full(grid.n_z + 1, 3.0)
        for j, row, sigma, wall, res in iterate(row0, grid, p):
            assert sigma == 0.0
            assert np.all(row == 3.0)

    def test_near_exact_generic_parameters(self):
        p = Params(A=0.013, B=0.07, L=0.0, N0=3.0)
        grid = Grid.from_lambda(100, 1.0, 0.02)
        row0 = np.full(grid.n_z + 1, 3.0)
        worst = 0.0
        for j, row, sigma, wall, res in iterate(row0, grid, p):
            worst = max(worst, float(np.max(np.abs(row - 3.0))), abs(sigma))
        assert worst < 1e-13 * 3.0
