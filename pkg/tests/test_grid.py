"""Tests for grids, fields and finite-difference operators."""

import numpy as np
import pytest
import scipy.sparse as sp

from src.grid import (
    PlanarGrid,
    RadialGrid,
    ScalarField,
    band_widths,
    dz_derivative,
    laplacian,
    laplacian_matrix,
    radial_derivative,
    radial_dz,
    to_banded,
)
from src.solver import bessel_i0


class TestGrids:
    """Test grid construction and validation."""

    def test_radial_samples(self):
        """Test radial samples run from 0 to R."""
        grid = RadialGrid(2.0, 32)
        assert grid.r[0] == 0.0
        assert grid.r[-1] == 2.0
        assert np.all(np.diff(grid.r) > 0)
        assert grid.h == pytest.approx(1 / 16)

    def test_radial_boundary_is_last_node(self):
        """Test only the outer node is a boundary node."""
        grid = RadialGrid(1.0, 16)
        assert list(grid.boundary_nodes) == [16]
        assert grid.unknown_nodes.size == 16

    def test_too_few_cells(self):
        """Test grids below 16 cells are rejected."""
        with pytest.raises(ValueError, match="at least 16 cells"):
            RadialGrid(1.0, 8)
        with pytest.raises(ValueError, match="at least 16 cells"):
            PlanarGrid(1.0, 8)

    def test_nonpositive_radius(self):
        """Test R <= 0 is rejected."""
        with pytest.raises(ValueError, match="Radius must be positive"):
            RadialGrid(0.0, 16)

    def test_planar_needs_even_cells(self):
        """Test odd planar cell counts are rejected."""
        with pytest.raises(ValueError, match="even cell count"):
            PlanarGrid(1.0, 17)

    def test_planar_spacing(self):
        """Test planar spacing is 2R/N on both axes."""
        grid = PlanarGrid(1.0, 16)
        assert grid.h == pytest.approx(0.125)
        assert grid.shape == (17, 17)
        assert grid.interior_mask.sum() == 15 * 15

    def test_window_nodes(self):
        """Test window selection is inclusive at both ends."""
        grid = RadialGrid(1.0, 100)
        nodes = grid.window_nodes(0.6, 0.9)
        assert grid.r[nodes[0]] == pytest.approx(0.6)
        assert grid.r[nodes[-1]] == pytest.approx(0.9)
        assert nodes.size == 31


class TestScalarField:
    """Test ScalarField validation and arithmetic."""

    def setup_method(self):
        """Set up test fixtures."""
        self.grid = RadialGrid(1.0, 16)

    def test_shape_mismatch(self):
        """Test mismatched value counts are rejected."""
        with pytest.raises(ValueError, match="does not match grid shape"):
            ScalarField(self.grid, np.zeros(5))

    def test_nonfinite_values(self):
        """Test NaN values are rejected."""
        values = np.zeros(17)
        values[3] = np.nan
        with pytest.raises(ValueError, match="finite"):
            ScalarField(self.grid, values)

    def test_arithmetic(self):
        """Test sums, differences and scaling."""
        f = ScalarField.from_function(self.grid, lambda r: r)
        g = ScalarField.from_function(self.grid, lambda r: r**2)
        combined = 2.0 * f - g + (-f)
        assert np.allclose(combined.values, self.grid.r - self.grid.r**2)

    def test_different_grids(self):
        """Test fields on different grids cannot be combined."""
        other = ScalarField.zeros(RadialGrid(2.0, 16))
        with pytest.raises(ValueError, match="different grids"):
            ScalarField.zeros(self.grid) + other


class TestLaplacian:
    """Test the discrete Laplacian."""

    def test_constant_is_harmonic(self):
        """Test constants have zero Laplacian on both grids."""
        for grid in (RadialGrid(1.0, 32), PlanarGrid(1.0, 16)):
            field = ScalarField(grid, np.full(grid.shape, 3.5))
            lap = laplacian(field)
            assert np.max(np.abs(lap.values[grid.interior_mask])) < 1e-9

    def test_planar_quadratic_exact(self):
        """Test Δ(x² + y²) = 4 at every interior node."""
        grid = PlanarGrid(1.0, 16)
        field = ScalarField.from_function(grid, lambda x, y: x**2 + y**2)
        lap = laplacian(field)
        assert np.allclose(lap.values[grid.interior_mask], 4.0, atol=1e-10)
        assert np.array_equal(lap.evaluated, grid.interior_mask)

    def test_radial_bessel_profile(self):
        """Test Δ I_0(3r) ≈ 9 I_0(3r) on [0.1, 0.9]."""
        grid = RadialGrid(1.0, 512)
        field = ScalarField.from_function(grid, lambda r: bessel_i0(3.0 * r))
        lap = laplacian(field)
        nodes = grid.window_nodes(0.1, 0.9)
        relative = np.abs(lap.values[nodes] - 9.0 * field.values[nodes]) / field.values[nodes]
        assert np.max(relative) <= 1e-4

    def test_linearity(self):
        """Test laplacian(αf + βg) = α·laplacian(f) + β·laplacian(g)."""
        grid = RadialGrid(1.0, 64)
        f = ScalarField.from_function(grid, np.cos)
        g = ScalarField.from_function(grid, lambda r: r**3)
        left = laplacian(2.0 * f + (-3.0) * g).values
        right = 2.0 * laplacian(f).values - 3.0 * laplacian(g).values
        assert np.max(np.abs(left - right)) <= 1e-10 * np.max(np.abs(right))

    def test_radial_second_order(self):
        """Test the radial error drops by about four under grid doubling."""

        def error(N):
            grid = RadialGrid(1.0, N)
            field = ScalarField.from_function(grid, lambda r: np.exp(-(r**2)))
            exact = (4.0 * grid.r**2 - 4.0) * np.exp(-(grid.r**2))
            nodes = grid.window_nodes(0.0, 0.9)
            return np.max(np.abs(laplacian(field).values[nodes] - exact[nodes]))

        ratio = error(64) / error(128)
        assert 3.5 <= ratio <= 4.5

    def test_matrix_matches_stencil(self):
        """Test the sparse matrix reproduces the stencil on interior nodes."""
        for grid in (RadialGrid(1.0, 32), PlanarGrid(1.0, 16)):
            rng = np.random.default_rng(3)
            values = rng.standard_normal(grid.shape)
            direct = laplacian(ScalarField(grid, values)).values.ravel()
            product = laplacian_matrix(grid) @ values.ravel()
            mask = grid.interior_mask.ravel()
            assert np.allclose(product[mask], direct[mask])
            assert np.all(product[~mask] == 0.0)


class TestDerivatives:
    """Test ∂_z and radial derivatives."""

    def setup_method(self):
        """Set up test fixtures."""
        self.grid = PlanarGrid(1.0, 16)

    def test_dz_of_x(self):
        """Test ∂_z x = 1/2."""
        field = ScalarField.from_function(self.grid, lambda x, y: x)
        assert np.allclose(dz_derivative(field), 0.5)

    def test_dz_of_y(self):
        """Test ∂_z y = -i/2."""
        field = ScalarField.from_function(self.grid, lambda x, y: y)
        assert np.allclose(dz_derivative(field), -0.5j)

    def test_dz_of_saddle(self):
        """Test ∂_z (x² - y²) = x + iy."""
        field = ScalarField.from_function(self.grid, lambda x, y: x**2 - y**2)
        X, Y = self.grid.coordinates
        assert np.max(np.abs(dz_derivative(field) - (X + 1j * Y))) <= self.grid.h**2

    def test_dz_rejects_radial(self):
        """Test dz_derivative refuses radial fields."""
        with pytest.raises(ValueError, match="PlanarGrid"):
            dz_derivative(ScalarField.zeros(RadialGrid(1.0, 16)))

    def test_radial_dz_of_r_squared(self):
        """Test ∂_z r² = r along θ = 0."""
        grid = RadialGrid(1.0, 64)
        field = ScalarField.from_function(grid, lambda r: r**2)
        assert np.allclose(radial_dz(field, 0.0), grid.r, atol=1e-12)

    def test_radial_dz_of_constant(self):
        """Test ∂_z of a constant vanishes."""
        grid = RadialGrid(1.0, 64)
        field = ScalarField(grid, np.full(grid.shape, 2.0))
        assert np.max(np.abs(radial_dz(field, 1.3))) == 0.0

    def test_radial_dz_of_exponential(self):
        """Test ∂_z e^{-2r} along θ = π/2 equals i·e^{-2r}."""
        grid = RadialGrid(1.0, 1024)
        field = ScalarField.from_function(grid, lambda r: np.exp(-2.0 * r))
        expected = -2.0 * np.exp(-2.0 * grid.r) * np.exp(-0.5j * np.pi) / 2.0
        assert np.max(np.abs(radial_dz(field, np.pi / 2) - expected)) <= 1e-5

    def test_radial_derivative_endpoints(self):
        """Test one-sided differences are exact for quadratics."""
        grid = RadialGrid(1.0, 16)
        slope = radial_derivative(grid.r**2, grid)
        assert np.allclose(slope, 2.0 * grid.r)


class TestBanded:
    """Test band packing helpers."""

    def test_pack_tridiagonal(self):
        """Test packing agrees with the dense matrix."""
        matrix = sp.diags([[1.0, 2.0], [3.0, 4.0, 5.0], [6.0, 7.0]], [-1, 0, 1])
        packed = to_banded(matrix, 1, 1)
        assert packed.shape == (3, 3)
        assert list(packed[1]) == [3.0, 4.0, 5.0]
        assert list(packed[0, 1:]) == [6.0, 7.0]
        assert list(packed[2, :2]) == [1.0, 2.0]
        assert band_widths(matrix) == (1, 1)

    def test_out_of_band(self):
        """Test entries outside the declared band are rejected."""
        matrix = sp.diags([np.ones(2)], [-2], shape=(4, 4))
        with pytest.raises(ValueError, match="not within band"):
            to_banded(matrix, 1, 1)


if __name__ == "__main__":
    pytest.main([__file__])
