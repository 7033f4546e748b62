"""Transform conventions, multiplier operators, and their oracles."""

import numpy as np
import pytest

from shnls.spectral import (Grid, NonFiniteFieldError, free_propagator,
                            from_spectral, gradient, gradient_sq_integral,
                            helmholtz_inverse, helmholtz_multiplier,
                            helmholtz_regularity_ratio, integrate, l2_norm,
                            poisson_inverse_zero_mean, to_spectral)

from conftest import random_field


class TestGrid:
    def test_basic_geometry(self, grid2d):
        assert grid2d.dim == 2
        assert grid2d.spacing == (10.0 / 32, 7.5 / 16)
        assert grid2d.cell_volume == pytest.approx((10.0 / 32) * (7.5 / 16))
        assert grid2d.volume == pytest.approx(75.0)
        assert grid2d.center == (5.0, 3.75)
        assert grid2d.inscribed_radius == 3.75

    @pytest.mark.parametrize("n", [(7,), (12,), (4,), (0,)])
    def test_rejects_bad_sample_counts(self, n):
        with pytest.raises(ValueError):
            Grid(n=n, box_length=(1.0,) * len(n))

    def test_rejects_bad_dims_and_lengths(self):
        with pytest.raises(ValueError):
            Grid(n=(8, 8, 8, 8), box_length=(1.0,) * 4)
        with pytest.raises(ValueError):
            Grid(n=(8,), box_length=(0.0,))
        with pytest.raises(ValueError):
            Grid(n=(8, 8), box_length=(1.0,))

    def test_wavenumbers_antisymmetric_except_nyquist(self, grid1d):
        k = grid1d.wavenumbers(0)
        n = grid1d.n[0]
        assert k[0] == 0.0
        # k[m] and k[n-m] pair up for 0 < m < n/2; the Nyquist mode is alone
        for m in range(1, n // 2):
            assert k[m] == -k[n - m]
        assert k[n // 2] == -np.pi * n / grid1d.box_length[0]

    def test_check_field_rejects_nan_and_shape(self, grid1d):
        good = np.zeros(grid1d.shape, dtype=complex)
        grid1d.check_field(good)
        bad = good.copy()
        bad[3] = np.nan
        with pytest.raises(NonFiniteFieldError):
            grid1d.check_field(bad)
        with pytest.raises(ValueError):
            grid1d.check_field(np.zeros(12))


class TestTransforms:
    def test_constant_is_k0_mode(self, grid2d):
        coeffs = to_spectral(grid2d, np.full(grid2d.shape, 2.0 + 0j))
        assert coeffs[0, 0] == pytest.approx(2.0)
        coeffs[0, 0] = 0.0
        assert np.abs(coeffs).max() < 1e-14

    def test_pure_mode_single_coefficient(self, grid1d):
        k1 = grid1d.wavenumbers(0)[1]
        coeffs = to_spectral(grid1d, np.exp(1j * k1 * grid1d.axis_coordinates(0)))
        assert coeffs[1] == pytest.approx(1.0, abs=1e-14)
        coeffs[1] = 0.0
        assert np.abs(coeffs).max() < 1e-14

    def test_from_spectral_zero_and_delta(self, grid1d):
        zero = from_spectral(grid1d, np.zeros(grid1d.shape, dtype=complex))
        assert np.abs(zero).max() == 0.0
        delta = np.zeros(grid1d.shape, dtype=complex)
        delta[0] = 1.0
        assert np.abs(from_spectral(grid1d, delta) - 1.0).max() < 1e-14

    def test_round_trip_all_grids(self, all_grids, rng):
        for grid in all_grids:
            f = random_field(grid, rng)
            back = from_spectral(grid, to_spectral(grid, f))
            assert np.abs(back - f).max() / np.abs(f).max() < 1e-12

    def test_non_finite_input_rejected(self, grid1d):
        f = np.ones(grid1d.shape, dtype=complex)
        f[0] = np.inf
        with pytest.raises(NonFiniteFieldError):
            to_spectral(grid1d, f)
        with pytest.raises(NonFiniteFieldError):
            from_spectral(grid1d, f)


class TestHelmholtzInverse:
    def test_eigenfunction_unit_wavenumber(self):
        grid = Grid(n=(64,), box_length=(2 * np.pi,))
        mode = np.exp(1j * grid.axis_coordinates(0))
        out = helmholtz_inverse(grid, mode, 1.0)
        assert np.abs(out - 0.5 * mode).max() < 1e-13

    def test_alpha_zero_is_identity(self, grid2d, rng):
        f = random_field(grid2d, rng)
        assert helmholtz_inverse(grid2d, f, 0.0) is f

    def test_negative_alpha_rejected(self, grid1d):
        with pytest.raises(ValueError):
            helmholtz_inverse(grid1d, np.ones(grid1d.shape), -0.5)

    def test_real_input_gives_real_output(self, grid2d, rng):
        f = rng.standard_normal(grid2d.shape) ** 2
        out = helmholtz_inverse(grid2d, f, 0.7)
        assert not np.iscomplexobj(out)

    def test_dense_solve_oracle_8_points(self, rng):
        # independent oracle: dense (I - alpha^2 Lap_spectral) solve
        grid = Grid(n=(8,), box_length=(3.0,))
        n = grid.n[0]
        alpha = 0.6
        dft = np.exp(-2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n)
        lap = np.conj(dft).T @ np.diag(-grid.wavenumbers(0) ** 2) @ dft / n
        op = np.eye(n) - alpha**2 * lap
        f = random_field(grid, rng)
        expected = np.linalg.solve(op, f)
        got = helmholtz_inverse(grid, f, alpha)
        assert np.abs(got - expected).max() / np.abs(expected).max() < 1e-12


class TestPoissonInverse:
    def test_eigenfunction_unit_wavenumber(self):
        grid = Grid(n=(64,), box_length=(2 * np.pi,))
        mode = np.exp(1j * grid.axis_coordinates(0))
        out = poisson_inverse_zero_mean(grid, mode, 1.0)
        assert np.abs(out - mode).max() < 1e-13

    def test_constant_maps_to_zero(self, grid2d):
        out = poisson_inverse_zero_mean(grid2d, np.full(grid2d.shape, 3.0), 0.5)
        assert np.abs(out).max() < 1e-14

    def test_alpha_must_be_positive(self, grid1d):
        f = np.ones(grid1d.shape)
        for alpha in (0.0, -1.0):
            with pytest.raises(ValueError):
                poisson_inverse_zero_mean(grid1d, f, alpha)

    def test_gauge_invariance_under_constant_shift(self, grid2d, rng):
        f = rng.standard_normal(grid2d.shape)
        a = poisson_inverse_zero_mean(grid2d, f, 0.3)
        b = poisson_inverse_zero_mean(grid2d, f + 4.2, 0.3)
        assert np.abs(a - b).max() < 1e-12 * max(np.abs(a).max(), 1.0)

    def test_dense_pinv_oracle_8_points(self, rng):
        # independent oracle: pseudo-inverse of the dense singular operator
        grid = Grid(n=(8,), box_length=(3.0,))
        n = grid.n[0]
        alpha = 0.8
        dft = np.exp(-2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n)
        lap = np.conj(dft).T @ np.diag(-grid.wavenumbers(0) ** 2) @ dft / n
        op = -alpha**2 * lap
        f = random_field(grid, rng)
        expected = np.linalg.pinv(op) @ f
        got = poisson_inverse_zero_mean(grid, f, alpha)
        assert np.abs(got - expected).max() / np.abs(expected).max() < 1e-12


class TestFreePropagator:
    def test_t_zero_is_identity(self, grid2d, rng):
        f = random_field(grid2d, rng)
        assert np.array_equal(free_propagator(grid2d, f, 0.0), f)

    def test_unitary_in_discrete_l2(self, all_grids, rng):
        for grid in all_grids:
            f = random_field(grid, rng)
            out = free_propagator(grid, f, 0.731)
            assert abs(l2_norm(grid, out) - l2_norm(grid, f)) \
                < 1e-13 * l2_norm(grid, f)

    def test_reversibility(self, grid1d, rng):
        f = random_field(grid1d, rng)
        back = free_propagator(grid1d, free_propagator(grid1d, f, 0.37), -0.37)
        assert np.abs(back - f).max() < 1e-12 * np.abs(f).max()

    def test_gaussian_closed_form_sup_norm(self):
        # exact evolution of e^{-x^2/2}: sup |v(t)| = (1 + 4 t^2)^{-1/4}
        grid = Grid(n=(1024,), box_length=(100.0,))
        x = grid.axis_coordinates(0) - grid.center[0]
        v0 = np.exp(-(x**2) / 2) + 0j
        for t in (0.5, 1.0, 2.0):
            out = free_propagator(grid, v0, t)
            assert abs(np.abs(out).max() - (1 + 4 * t**2) ** -0.25) < 1e-6

    def test_commutes_with_helmholtz_inverse(self, grid2d, rng):
        f = random_field(grid2d, rng)
        a = helmholtz_inverse(grid2d, free_propagator(grid2d, f, 0.21), 0.45)
        b = free_propagator(grid2d, helmholtz_inverse(grid2d, f, 0.45), 0.21)
        assert np.abs(a - b).max() < 1e-12 * np.abs(a).max()


class TestMultiplierBound:
    @pytest.mark.parametrize("alpha", [0.05, 0.1, 0.5, 1.0])
    def test_regularity_ratio_bounded(self, all_grids, alpha):
        for grid in all_grids:
            ratio = helmholtz_regularity_ratio(grid, alpha)
            assert np.all(ratio <= max(1.0, alpha**-2))

    @pytest.mark.parametrize("alpha,floor", [(1.0, 1.0), (0.5, 0.99), (0.1, 0.98)])
    def test_bound_approached_at_high_wavenumbers(self, alpha, floor):
        grid = Grid(n=(512,), box_length=(20.0,))
        ratio = helmholtz_regularity_ratio(grid, alpha)
        assert ratio.max() >= floor * max(1.0, alpha**-2)

    def test_multiplier_table_values(self, grid1d):
        mult = helmholtz_multiplier(grid1d, 0.5)
        k2 = grid1d.k_squared
        assert np.allclose(mult, 1.0 / (1.0 + 0.25 * k2), rtol=0, atol=0)
        assert helmholtz_multiplier(grid1d, 0.0).max() == 1.0


class TestGradient:
    def test_constant_field_zero(self, grid2d):
        assert gradient_sq_integral(grid2d, np.full(grid2d.shape, 5.0 + 0j)) == 0.0

    def test_single_mode_parseval(self, grid1d):
        # |k| = 2 requires m = k L / (2 pi); pick the mode with k = 2
        grid = Grid(n=(64,), box_length=(2 * np.pi,))
        x = grid.axis_coordinates(0)
        f = np.exp(2j * x)
        assert gradient_sq_integral(grid, f) == pytest.approx(4 * grid.volume,
                                                              rel=1e-13)

    def test_gaussian_closed_form(self):
        # integral of |d/dx e^{-x^2/2}|^2 = sqrt(pi)/2
        grid = Grid(n=(1024,), box_length=(40.0,))
        x = grid.axis_coordinates(0) - grid.center[0]
        val = gradient_sq_integral(grid, np.exp(-(x**2) / 2) + 0j)
        assert abs(val - np.sqrt(np.pi) / 2) < 1e-8

    def test_gradient_components_match_integral(self, grid2d, rng):
        f = random_field(grid2d, rng)
        grads = gradient(grid2d, f)
        quad = sum(float(integrate(grid2d, np.abs(g) ** 2).real) for g in grads)
        spec = gradient_sq_integral(grid2d, f)
        assert abs(quad - spec) < 1e-10 * max(spec, 1.0)
