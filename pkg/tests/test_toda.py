"""Tests for the cyclic families, the state and the frame equations."""

import numpy as np
import pytest

from src.grid import PlanarGrid, RadialGrid, band_widths
from src.toda import (
    CyclicKind,
    SystemKind,
    TodaState,
    curvature_profile,
    decoupling_defect,
    frame_residual,
    index_coupling,
    leading_metric_value,
    linearize,
    omega_factor,
    q_orthogonality_defect,
    residual,
    residual_vector,
    system_kind,
    toda_vector_defect,
)


def constant_state(kind, t, grid, values):
    return TodaState(kind, t, grid, tuple(np.full(grid.shape, v) for v in values))


def perturbed(state, vector):
    """State with ``vector`` (node-major over unknown nodes) added."""
    p = state.kind.independent_count
    unknown = state.grid.unknown_nodes
    stacked = state.stacked().copy()
    stacked[:, unknown] += vector.reshape(unknown.size, p).T
    return TodaState.from_unknowns(state.kind, state.t, state.grid, stacked)


class TestSystemKind:
    """Test kind parsing and model data."""

    def test_parse_aliases(self):
        """Test enum values and aliases parse."""
        assert CyclicKind.parse("n-cyclic") is CyclicKind.NCYCLIC
        assert CyclicKind.parse("NMinus1") is CyclicKind.NMINUS1
        assert CyclicKind.parse("n_1_cyclic") is CyclicKind.NMINUS1

    def test_parse_unknown(self):
        """Test unknown kinds are rejected."""
        with pytest.raises(ValueError, match="Unknown cyclic kind"):
            CyclicKind.parse("hexagonal")

    def test_rank_validation(self):
        """Test rank limits for both families."""
        with pytest.raises(ValueError, match="at least 2"):
            SystemKind(CyclicKind.NCYCLIC, 1)
        with pytest.raises(ValueError, match="n >= 3"):
            SystemKind(CyclicKind.NMINUS1, 2)

    def test_orders(self):
        """Test Toda order and independent field counts."""
        cyclic = system_kind("n-cyclic", 5)
        minus1 = system_kind("n-1-cyclic", 5)
        assert (cyclic.b, cyclic.toda_order, cyclic.independent_count) == (5, 5, 2)
        assert (minus1.b, minus1.toda_order, minus1.independent_count) == (4, 4, 2)

    def test_rate_scale(self):
        """Test σ_t for both families."""
        assert system_kind("n-cyclic", 3).rate_scale(125.0) == pytest.approx(5.0)
        assert system_kind("n-1-cyclic", 4).rate_scale(500.0) == pytest.approx(10.0)
        with pytest.raises(ValueError, match="t must be positive"):
            system_kind("n-cyclic", 3).rate_scale(0.0)

    def test_omega_factor(self):
        """Test |1 - ζ_m^k| values."""
        assert omega_factor(4, 2) == pytest.approx(2.0)
        assert omega_factor(3, 1) == pytest.approx(np.sqrt(3.0))
        assert omega_factor(6, 1) == pytest.approx(1.0)
        with pytest.raises(ValueError, match="Mode index"):
            omega_factor(3, 3)

    def test_half_weights(self):
        """Test the (n-1)-cyclic corner bonds carry exactly half weight."""
        kind = system_kind("n-1-cyclic", 4)
        weights = kind.coupling_weights(500.0)
        full = kind.rate_scale(500.0) ** 2
        assert weights[1, 0] == full / 2.0
        assert weights[0, 2] == full / 2.0
        assert weights[2, 1] == full


class TestLeadingMetric:
    """Test leading-order metric values."""

    def test_middle_line_bundle(self):
        """Test the middle value is 1 for odd n."""
        assert leading_metric_value("n-cyclic", 5, 37.0, 3) == pytest.approx(1.0)

    def test_values(self):
        """Test closed-form values."""
        assert leading_metric_value("n-cyclic", 4, 16.0, 1) == pytest.approx(8.0)
        assert leading_metric_value("n-1-cyclic", 4, 4.0, 2) == pytest.approx(2.0)
        assert leading_metric_value("n-1-cyclic", 4, 4.0, 1) == pytest.approx(4.0)

    def test_products_are_one(self):
        """Test products over j equal 1 for every family and n <= 10."""
        for n in range(2, 11):
            for tag in ("n-cyclic", "n-1-cyclic"):
                if tag == "n-1-cyclic" and n < 3:
                    continue
                product = np.prod([leading_metric_value(tag, n, 123.0, j) for j in range(1, n + 1)])
                assert product == pytest.approx(1.0, abs=1e-12)

    def test_index_range(self):
        """Test j outside 1..n is rejected."""
        with pytest.raises(ValueError, match="Index j"):
            leading_metric_value("n-cyclic", 3, 10.0, 4)


class TestTodaState:
    """Test state construction and derived fields."""

    def setup_method(self):
        """Set up test fixtures."""
        self.grid = RadialGrid(1.0, 16)

    def test_mirror_fields(self):
        """Test mirrored frame fields are negated and the middle vanishes."""
        kind = system_kind("n-cyclic", 5)
        state = constant_state(kind, 10.0, self.grid, (0.3, -0.1))
        frame = state.frame[:, 0]
        assert list(frame) == pytest.approx([0.3, -0.1, 0.0, 0.1, -0.3])

    def test_minus1_toda_vector(self):
        """Test the (n-1)-cyclic Toda vector ends in zero and ṽ¹ is δ¹."""
        kind = system_kind("n-1-cyclic", 4)
        state = constant_state(kind, 10.0, self.grid, (0.2, 0.05))
        d = [f.values[0] for f in state.dvec]
        assert d == pytest.approx([0.05, -0.05, 0.0])
        assert state.vtilde1.values[0] == pytest.approx(0.2)

    def test_wrong_field_count(self):
        """Test the field count must match ⌊n/2⌋."""
        kind = system_kind("n-cyclic", 4)
        with pytest.raises(ValueError, match="Expected 2 independent fields"):
            TodaState(kind, 1.0, self.grid, (np.zeros(17),))

    def test_fields_read_only(self):
        """Test stored arrays cannot be mutated."""
        state = TodaState.zeros(system_kind("n-cyclic", 3), 1.0, self.grid)
        with pytest.raises(ValueError):
            state.fields[0][0] = 1.0


class TestResidual:
    """Test residual evaluation."""

    def setup_method(self):
        """Set up test fixtures."""
        self.grid = RadialGrid(1.0, 32)

    def test_zero_state(self):
        """Test the zero state solves every family exactly."""
        for tag, n in (("n-cyclic", 2), ("n-cyclic", 5), ("n-1-cyclic", 3), ("n-1-cyclic", 6)):
            state = TodaState.zeros(system_kind(tag, n), 77.0, self.grid)
            for field in residual(state):
                assert np.all(field.values == 0.0)

    def test_three_cyclic_constant(self):
        """Test F_1 = -4t^{2/3}(e^c - e^{-2c}) for d = (c, 0, -c)."""
        t, c = 125.0, 0.01
        state = constant_state(system_kind("n-cyclic", 3), t, self.grid, (c,))
        expected = -4.0 * t ** (2.0 / 3.0) * (np.exp(c) - np.exp(-2.0 * c))
        values = residual(state)[0].values[self.grid.interior_mask]
        assert np.allclose(values, expected, rtol=1e-12)

    def test_two_cyclic_constant(self):
        """Test F_1 = -4t(e^{2c} - e^{-2c}) for n = 2."""
        t, c = 9.0, 0.02
        state = constant_state(system_kind("n-cyclic", 2), t, self.grid, (c,))
        expected = -4.0 * t * (np.exp(2.0 * c) - np.exp(-2.0 * c))
        values = residual(state)[0].values[self.grid.interior_mask]
        assert np.allclose(values, expected, rtol=1e-12)

    def test_boundary_not_evaluated(self):
        """Test boundary nodes hold zero and are flagged."""
        state = constant_state(system_kind("n-cyclic", 3), 5.0, self.grid, (0.1,))
        field = residual(state)[0]
        assert field.values[-1] == 0.0
        assert not field.evaluated[-1]

    def test_sum_telescopes(self):
        """Test the frame residuals sum to zero nodewise."""
        rng = np.random.default_rng(7)
        for tag, n in (("n-cyclic", 5), ("n-1-cyclic", 5)):
            kind = system_kind(tag, n)
            fields = tuple(0.05 * rng.standard_normal(self.grid.shape) for _ in range(kind.independent_count))
            state = TodaState(kind, 50.0, self.grid, fields)
            full = frame_residual(kind, 50.0, state.frame, self.grid)
            scale = np.max(np.abs(full))
            assert np.max(np.abs(full.sum(axis=0))) <= 1e-12 * scale


class TestLinearization:
    """Test the Jacobian."""

    def test_directional_derivative(self):
        """Test the finite-difference error shrinks by ~100 when ε shrinks by 10."""
        grid = RadialGrid(1.0, 32)
        kind = system_kind("n-cyclic", 4)
        rng = np.random.default_rng(11)
        fields = tuple(0.1 * np.cos((j + 1) * grid.r) for j in range(kind.independent_count))
        state = TodaState(kind, 10.0, grid, fields)
        direction = rng.uniform(-1.0, 1.0, grid.unknown_nodes.size * kind.independent_count)
        jac = linearize(state)
        base = residual_vector(state)

        def error(eps):
            moved = residual_vector(perturbed(state, eps * direction))
            return np.max(np.abs(moved - base - eps * (jac @ direction)))

        ratio = error(1e-3) / error(1e-4)
        assert 80.0 <= ratio <= 120.0

    def test_directional_derivative_minus1(self):
        """Test the Jacobian of the (n-1)-cyclic family is second-order accurate."""
        grid = RadialGrid(1.0, 32)
        kind = system_kind("n-1-cyclic", 5)
        rng = np.random.default_rng(5)
        fields = (0.05 * grid.r**2, -0.08 * np.sin(grid.r))
        state = TodaState(kind, 20.0, grid, fields)
        direction = rng.uniform(-1.0, 1.0, grid.unknown_nodes.size * 2)
        jac = linearize(state)
        base = residual_vector(state)
        errors = [
            np.max(np.abs(residual_vector(perturbed(state, eps * direction)) - base - eps * (jac @ direction)))
            for eps in (1e-3, 1e-4)
        ]
        assert 80.0 <= errors[0] / errors[1] <= 120.0

    def test_index_coupling_at_zero(self):
        """Test the n-cyclic coupling at zero is the (-1, 2, -1) circulant."""
        n = 5
        kind = system_kind("n-cyclic", n)
        coupling = index_coupling(kind, 30.0)
        for j in range(n):
            assert coupling[j, j] == pytest.approx(2.0)
            assert coupling[j, (j + 1) % n] == pytest.approx(-1.0)
            assert coupling[j, (j - 1) % n] == pytest.approx(-1.0)
        eigenvalues = np.sort(np.linalg.eigvalsh(coupling))
        expected = np.sort([omega_factor(n, k) ** 2 for k in range(n)])
        assert np.allclose(eigenvalues, expected)

    def test_symmetric_on_planar_grid(self):
        """Test J is symmetric for the n-cyclic family at a symmetric state."""
        grid = PlanarGrid(1.0, 16)
        kind = system_kind("n-cyclic", 4)
        X, Y = grid.coordinates
        state = TodaState(kind, 10.0, grid, (0.1 * X * Y, 0.05 * (X**2 - Y)))
        jac = linearize(state)
        gap = abs(jac - jac.T).max()
        assert gap <= 1e-10 * abs(jac).max()

    def test_radial_bandwidth(self):
        """Test the radial Jacobian has bandwidth p."""
        grid = RadialGrid(1.0, 32)
        kind = system_kind("n-cyclic", 6)
        jac = linearize(TodaState.zeros(kind, 3.0, grid))
        assert band_widths(jac) == (3, 3)


class TestConstraints:
    """Test Q-orthogonality and curvature diagnostics."""

    def test_constructed_states(self):
        """Test states from the constructor have zero defect."""
        grid = RadialGrid(1.0, 16)
        for tag, n in (("n-cyclic", 3), ("n-cyclic", 6), ("n-1-cyclic", 5)):
            kind = system_kind(tag, n)
            state = constant_state(kind, 4.0, grid, [0.1 * (j + 1) for j in range(kind.independent_count)])
            assert q_orthogonality_defect(state) == 0.0

    def test_hand_built_vectors(self):
        """Test defects of hand-built n = 3 vectors."""
        kind = system_kind("n-cyclic", 3)
        assert toda_vector_defect(kind, [np.array([0.1]), np.array([0.0]), np.array([-0.1])]) == 0.0
        defect = toda_vector_defect(kind, [np.array([0.1]), np.array([0.0]), np.array([-0.2])])
        assert defect == pytest.approx(0.1)

    def test_wrong_length(self):
        """Test Toda vectors of the wrong length are rejected."""
        with pytest.raises(ValueError, match="length 3"):
            toda_vector_defect(system_kind("n-cyclic", 3), [np.zeros(1)])

    def test_curvature_of_zero_state(self):
        """Test the zero state has no curvature."""
        grid = RadialGrid(1.0, 16)
        state = TodaState.zeros(system_kind("n-cyclic", 3), 8.0, grid)
        assert np.all(curvature_profile(state).values == 0.0)
        assert decoupling_defect(state, 0.0, 0.5) == 0.0

    def test_decoupling_needs_radial(self):
        """Test decoupling_defect rejects planar states."""
        grid = PlanarGrid(1.0, 16)
        state = TodaState.zeros(system_kind("n-cyclic", 3), 8.0, grid)
        with pytest.raises(ValueError, match="radial"):
            decoupling_defect(state)


if __name__ == "__main__":
    pytest.main([__file__])
