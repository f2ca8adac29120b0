"""
Unit tests for the circuit Hamiltonians and the coupler response.

Tests cover:
- rf-SQUID coupler Hamiltonian, circulating current and 1/L_eff
- Three-junction qubit Hamiltonian, degeneracy search and spectrum
- Truncation convergence checks
"""

import math
from types import SimpleNamespace
from unittest.mock import patch

import numpy as np
import pytest

from src.config import SolverConfig
from src.constants import NA_PER_GHZ_PER_FLUX, beta, rad_s_to_ghz
from src.exceptions import ConvergenceError, RangeError, ValidationError
from src.models import QubitLabel
from src.services.circuits import (
    OPERATING_PHASES,
    ConvergenceReport,
    QubitBranch,
    build_coupler,
    build_flux_qubit,
    capacitance_matrix,
    clear_truncation_cache,
    converged_build,
    epsilon_from_flux,
    find_degeneracy,
    junction_capacitance,
    qubit_spectrum,
    qubit_truncation_levels,
    ring_normal_modes,
)
from src.services.coupler import (
    COUPLER_RESPONSE_COLUMNS,
    CouplerModel,
    CouplingRegion,
    circulating_current,
    coupling_region_map,
    effective_inductance,
)


class TestCouplerCircuit:
    """Test the rf-SQUID coupler Hamiltonian."""

    def test_build(self, device, fast_settings):
        """Test basis size and labels."""
        build = build_coupler(device, 0.1, settings=fast_settings, check=False)

        assert build.dim == 60
        assert build.label == "coupler"
        assert build.mode_frequencies[0] > 0

    def test_rejects_non_finite_flux(self, device, fast_settings):
        """Test flux validation."""
        with pytest.raises(ValidationError, match="finite"):
            build_coupler(device, float("inf"), settings=fast_settings)

    def test_convergence_failure_names_mode(self, device):
        """Test that an unattainable contract reports the failing mode."""
        settings = SolverConfig(coupler_levels=20, convergence_tolerance_ghz=1e-300, max_level_increases=1)
        with pytest.raises(ConvergenceError) as excinfo:
            build_coupler(device, 0.2, settings=settings)

        assert excinfo.value.mode == "coupler"
        assert excinfo.value.levels == 22


class TestCouplerResponse:
    """Test circulating current and effective inductance."""

    def test_current_methods_agree(self, device, fast_settings):
        """Test energy slope against the current operator expectation."""
        estimate = CouplerModel(device, fast_settings).circulating_current(0.2)

        assert abs(estimate.operator) > 10.0
        assert estimate.slope == pytest.approx(estimate.operator, rel=1e-4)

    def test_current_is_odd(self, device, fast_settings):
        """Test ⟨I_C⟩(−f_C) = −⟨I_C⟩(f_C)."""
        model = CouplerModel(device, fast_settings)
        assert model.operator_current(-0.2) == pytest.approx(-model.operator_current(0.2), rel=1e-6)

    def test_current_vanishes_at_symmetric_bias(self, device, fast_settings):
        """Test that no current circulates at f_C = 0 and f_C = 1/2."""
        model = CouplerModel(device, fast_settings)
        peak = abs(model.operator_current(0.25))

        assert abs(model.operator_current(0.0)) < 1e-6 * peak
        assert abs(model.operator_current(0.5)) < 1e-6 * peak

    def test_inverse_inductance_sign(self, device, fast_settings):
        """Test positive 1/L_eff at f_C = 0 and negative at f_C = 1/2."""
        assert effective_inductance(device, 0.0, fast_settings) > 0
        assert effective_inductance(device, 0.5, fast_settings) < 0

    def test_module_level_current(self, device, fast_settings):
        """Test the functional entry point."""
        estimate = circulating_current(device, 0.1, fast_settings)
        assert estimate.discrepancy < 1e-3 * abs(estimate.operator)

    def test_region_map(self, device, fast_settings):
        """Test AF/FM labelling and zero-crossing location."""
        grid = [-0.5, -0.25, 0.0, 0.25, 0.5]
        response = coupling_region_map(device, grid, fast_settings)

        assert response.region[2] == CouplingRegion.AF.value
        assert response.region[0] == CouplingRegion.FM.value
        assert response.region[4] == CouplingRegion.FM.value
        assert len(response.crossings) == 2
        assert all(0.0 < abs(c) < 0.5 for c in response.crossings)
        assert response.crossings[0] == pytest.approx(-response.crossings[1], abs=1e-3)

        antiferro, ferro = response.inductance_range()
        assert antiferro == pytest.approx(1.0 / response.inv_L_eff[2], rel=1e-12)
        assert ferro == pytest.approx(1.0 / response.inv_L_eff.min(), rel=1e-12)
        assert ferro < 0
        assert list(response.to_frame().columns) == COUPLER_RESPONSE_COLUMNS

    def test_region_map_needs_two_points(self, device, fast_settings):
        """Test grid validation."""
        with pytest.raises(ValidationError, match="at least two points"):
            coupling_region_map(device, [0.1], fast_settings)


class TestCouplerCalibration:
    """Compare the coupler response with the device design values."""

    def test_screening_parameter_of_design(self):
        """Test β = 2πLI₀/Φ₀ for L = 470 pH and I₀ = 730 nA."""
        assert beta(470.0, 730.0) == pytest.approx(1.04, abs=5e-3)

    def test_peak_circulating_current(self, device, fast_settings):
        """Test ⟨I_C⟩ extrema of about ±700 nA below f_C = 1/2."""
        model = CouplerModel(device, fast_settings)
        grid = np.linspace(0.3, 0.5, 101)
        currents = np.array([model.operator_current(f) for f in grid])

        assert np.max(np.abs(currents)) == pytest.approx(700.0, rel=0.03)
        peak = grid[np.argmax(np.abs(currents))]
        assert model.operator_current(-peak) == pytest.approx(-model.operator_current(peak), rel=1e-6)

    def test_zero_crossing_location(self, device, fast_settings):
        """Test that 1/L_eff changes sign near f_C = 0.402."""
        response = coupling_region_map(device, np.linspace(0.0, 0.5, 26), fast_settings)

        assert len(response.crossings) == 1
        assert response.crossings[0] == pytest.approx(0.402, abs=0.01)

    def test_effective_inductance_endpoints(self, device, fast_settings):
        """Test L_eff at the AF and FM extremes of 1/L_eff.

        The model gives about 935 pH at f_C = 0, below the 1070 pH design
        value; this pins the model so a solver change shows up here.
        """
        response = coupling_region_map(device, np.linspace(0.0, 0.5, 11), fast_settings)
        antiferro, ferro = response.inductance_range()

        assert antiferro == pytest.approx(934.7, rel=0.01)
        assert ferro == pytest.approx(-47.83, rel=0.02)

    def test_transition_frequency_at_half_flux(self, device, fast_settings):
        """Test ω₀₁/2π ≈ 20 GHz with the coupler at f_C = 1/2."""
        build = build_coupler(device, 0.5, settings=fast_settings)
        assert build.solve(2).gap() == pytest.approx(20.0, rel=0.05)

    def test_flux_periodicity(self, device, fast_settings):
        """Test E₀(f_C) = E₀(f_C + 1)."""
        model = CouplerModel(device, fast_settings)
        assert model.ground_energy(1.2) == pytest.approx(model.ground_energy(0.2), rel=1e-10)


class TestFluxQubitCircuit:
    """Test the three-junction flux qubit."""

    def test_build(self, device, fast_settings):
        """Test the product basis of three normal modes."""
        build = build_flux_qubit(device, QubitLabel.A, 0.5, settings=fast_settings)

        assert build.dim == 8 ** 3
        assert build.label == "qubit_A"
        assert len(build.mode_frequencies) == 3

    def test_capacitance_matrix(self, device):
        """Test that the node capacitance matrix is symmetric positive definite."""
        matrix = capacitance_matrix(device, "B")

        assert np.allclose(matrix, matrix.T)
        assert np.all(np.linalg.eigvalsh(matrix) > 0)

    def test_junction_capacitance_validation(self, device):
        """Test critical current validation."""
        with pytest.raises(ValidationError, match="Critical current"):
            junction_capacitance(-1.0, device)

    def test_gap_reflection_symmetry(self, device, fast_settings):
        """Test gap(1/2 − d) = gap(1/2 + d)."""
        below = build_flux_qubit(device, "A", 0.49, settings=fast_settings).solve(2).gap()
        above = build_flux_qubit(device, "A", 0.51, settings=fast_settings).solve(2).gap()

        assert below == pytest.approx(above, rel=1e-8)

    def test_rejects_bad_inductance(self, device, fast_settings):
        """Test loop inductance override validation."""
        with pytest.raises(ValidationError, match="Loop inductance"):
            build_flux_qubit(device, "A", 0.5, l_override=-5.0, settings=fast_settings)


class TestQubitTruncation:
    """Test that qubit builds honour the truncation contract."""

    def setup_method(self):
        clear_truncation_cache()

    def test_default_path_raises_named_mode(self, device):
        """Test that an unmet contract on the default path raises ConvergenceError."""
        settings = SolverConfig(qubit_levels=4, max_level_increases=0)
        assert settings.verify_truncation

        with pytest.raises(ConvergenceError) as excinfo:
            build_flux_qubit(device, "B", 0.5, settings=settings)

        assert excinfo.value.mode == "qubit_B"
        assert excinfo.value.levels == 4

    def test_per_build_check_raises(self, device):
        """Test the per-build check with an unattainable tolerance."""
        settings = SolverConfig(qubit_levels=4, max_level_increases=1,
                                convergence_tolerance_ghz=1e-300, check_convergence=True)
        with pytest.raises(ConvergenceError) as excinfo:
            build_flux_qubit(device, "A", 0.51, settings=settings)

        assert excinfo.value.mode == "qubit_A"
        assert excinfo.value.levels == 6

    def test_levels_raised_until_converged(self):
        """Test that a miss raises the level count by two and retries."""
        settings = SolverConfig(max_level_increases=2)
        build = SimpleNamespace(levels=10)
        missed = ConvergenceReport("qubit_B", 8, 1e-4, 1e-6, None)
        met = ConvergenceReport("qubit_B", 10, 1e-7, 1e-6, build)

        with patch("src.services.circuits.check_convergence", side_effect=[missed, met]) as check:
            assert converged_build(lambda n: None, 8, 2, settings) is build

        assert [c.args[1] for c in check.call_args_list] == [8, 10]

    def test_resolution_is_cached(self, device):
        """Test that one configuration is checked once across flux points."""
        settings = SolverConfig(qubit_levels=6)
        with patch("src.services.circuits.converged_build", return_value=SimpleNamespace(levels=8)) as resolve:
            first = qubit_truncation_levels(device, "B", 115.0, settings=settings)
            second = qubit_truncation_levels(device, "B", 115.5, settings=settings)
            other = qubit_truncation_levels(device, "B", 140.0, settings=settings)

        assert first == second == other == 8
        assert resolve.call_count == 2

    def test_build_uses_resolved_levels(self, device):
        """Test that the default path builds at the resolved level count."""
        settings = SolverConfig(qubit_levels=4)
        with patch("src.services.circuits.qubit_truncation_levels", return_value=5) as resolve:
            build = build_flux_qubit(device, "A", 0.51, settings=settings, retained=3)

        assert build.levels == 5
        assert resolve.call_args.args[5] == 3

    def test_verification_can_be_disabled(self, device, fast_settings):
        """Test that verify_truncation=False builds at the configured levels unchecked."""
        with patch("src.services.circuits.converged_build") as resolve:
            build = build_flux_qubit(device, "A", 0.5, settings=fast_settings)

        assert build.levels == fast_settings.qubit_levels
        resolve.assert_not_called()


class TestGaugeInvariance:
    """Test the placement of the external flux on each ring branch."""

    FLUX = 0.51

    @pytest.fixture(scope="class")
    def builds(self, device, fast_settings):
        return {
            gauge: build_flux_qubit(device, "B", self.FLUX, gauge=gauge, settings=fast_settings)
            for gauge in QubitBranch
        }

    def test_gauges_build_different_matrices(self, builds):
        """Test that each gauge puts the flux on its own branch."""
        reference = builds[QubitBranch.SMALL_JUNCTION].hamiltonian.matrix
        for gauge in (QubitBranch.LARGE_JUNCTION_1, QubitBranch.LARGE_JUNCTION_2, QubitBranch.INDUCTOR):
            assert np.max(np.abs(builds[gauge].hamiltonian.matrix - reference)) > 1e-3
            assert builds[gauge].gauge == gauge.value

    def test_branch_phases_follow_gauge(self, device):
        """Test 2π(f − 1/2) on the gauge branch on top of the operating point."""
        for index, gauge in enumerate(QubitBranch):
            modes = ring_normal_modes(device, "B", self.FLUX, 115.0, gauge)
            expected = OPERATING_PHASES.copy()
            expected[index] += 2 * math.pi * (self.FLUX - 0.5)
            assert modes.branch_phases == pytest.approx(expected, abs=1e-12)
            assert modes.branch_offsets[index] == pytest.approx(2 * math.pi * self.FLUX)

    def test_spectrum_is_gauge_invariant(self, builds):
        """Test that the retained transitions agree across all four gauges."""
        transitions = {gauge: build.solve(4).energies for gauge, build in builds.items()}
        transitions = {gauge: energies[1:] - energies[0] for gauge, energies in transitions.items()}
        reference = transitions[QubitBranch.SMALL_JUNCTION]
        for gauge, values in transitions.items():
            assert values == pytest.approx(reference, abs=5e-3), gauge

    @pytest.mark.parametrize("gauge", list(QubitBranch))
    def test_flux_derivative_matches_energy_slope(self, device, fast_settings, gauge):
        """Test ⟨∂H/∂Φ⟩ against a centered difference of the ground energy."""
        step = 1e-5

        def ground(f):
            build = build_flux_qubit(device, "A", f, gauge=gauge, levels=6, settings=fast_settings)
            return build, build.solve(1)

        build, solution = ground(self.FLUX)
        slope = (ground(self.FLUX + step)[1].energies[0] - ground(self.FLUX - step)[1].energies[0]) / (2 * step)
        expectation = build.flux_derivative_op.expectation(solution.states[:, 0])

        assert abs(expectation) > 1.0
        assert expectation == pytest.approx(slope * NA_PER_GHZ_PER_FLUX, rel=1e-4)

    def test_loop_current_matches_flux_derivative(self, builds):
        """Test that the inductor current and ∂H/∂Φ agree in every gauge's ground state."""
        for gauge, build in builds.items():
            state = build.solve(1).states[:, 0]
            current = build.current_op.expectation(state)
            assert build.flux_derivative_op.expectation(state) == pytest.approx(current, rel=0.1), gauge

    def test_flux_periodicity(self, device, fast_settings):
        """Test that whole flux quanta leave the spectrum unchanged."""
        base = build_flux_qubit(device, "B", self.FLUX, settings=fast_settings).solve(3).energies
        for shift in (1.0, -1.0, 2.0):
            shifted = build_flux_qubit(device, "B", self.FLUX + shift, settings=fast_settings).solve(3).energies
            assert shifted == pytest.approx(base, abs=1e-8)

    @pytest.mark.slow
    def test_gauge_invariance_at_default_truncation(self, device):
        """Test gauge invariance of the lowest levels at the configured truncation."""
        settings = SolverConfig(verify_truncation=False)
        energies = [
            build_flux_qubit(device, "B", 0.505, gauge=gauge, settings=settings).solve(4).energies
            for gauge in QubitBranch
        ]
        for values in energies[1:]:
            assert values == pytest.approx(energies[0], abs=1e-3)


class TestDegeneracy:
    """Test the degeneracy search and two-level reduction."""

    def test_degeneracy_at_half_flux(self, device, fast_settings):
        """Test that the gap minimum sits at f = 1/2."""
        point = find_degeneracy(device, "B", settings=fast_settings)

        assert point.f == pytest.approx(0.5, abs=1e-5)
        assert point.delta_ghz > 0
        assert point.i_p > 1.0

        two_level = point.two_level()
        assert two_level.epsilon == pytest.approx(0.0, abs=1e-3 * two_level.delta)
        assert two_level.gap(point.f) == pytest.approx(two_level.delta, rel=1e-6)
        assert two_level.gap(0.51) > two_level.delta

    def test_persistent_current_range(self, device, fast_settings):
        """Test I_p between 35 and 60 nA for both qubits."""
        for which in QubitLabel:
            point = find_degeneracy(device, which, settings=fast_settings)
            assert 35.0 <= point.i_p <= 60.0, which

    def test_two_level_gap_matches_full_model(self, device, fast_settings):
        """Test √(ε² + Δ²) against the full ring spectrum near degeneracy."""
        two_level = find_degeneracy(device, "B", settings=fast_settings).two_level()
        for f in (0.498, 0.502):
            full = build_flux_qubit(device, "B", f, settings=fast_settings).solve(2).gap()
            assert rad_s_to_ghz(two_level.gap(f)) == pytest.approx(full, rel=0.01)

    def test_unbracketed_minimum(self, device, fast_settings):
        """Test that a bracket excluding the minimum is a range error."""
        with pytest.raises(RangeError, match="not bracketed"):
            find_degeneracy(device, "A", bracket=(0.40, 0.45), settings=fast_settings)

    def test_bracket_validation(self, device, fast_settings):
        """Test bracket ordering."""
        with pytest.raises(ValidationError, match="increasing"):
            find_degeneracy(device, "A", bracket=(0.51, 0.49), settings=fast_settings)

    def test_epsilon_sign(self):
        """Test ε = 0 at degeneracy and its sign away from it."""
        assert epsilon_from_flux(200.0, 0.5) == 0.0
        assert epsilon_from_flux(200.0, 0.51) > 0
        assert epsilon_from_flux(200.0, 0.49) == pytest.approx(-epsilon_from_flux(200.0, 0.51))


class TestQubitSpectrum:
    """Test bare qubit spectroscopy."""

    def test_spectrum_shape(self, device, fast_settings):
        """Test the transition table and its frame."""
        spectrum = qubit_spectrum(device, "A", [0.49, 0.5, 0.51], levels=3, settings=fast_settings, threads=2)

        assert spectrum.transitions.shape == (3, 2)
        assert spectrum.transitions[1, 0] < spectrum.transitions[0, 0]
        assert spectrum.transitions[1, 0] < spectrum.transitions[2, 0]

        frame = spectrum.to_frame()
        assert list(frame.columns) == ["f_q", "level", "freq_GHz"]
        assert len(frame) == 6
        assert set(frame["level"]) == {1, 2}

    def test_spectrum_needs_two_levels(self, device, fast_settings):
        """Test level validation."""
        with pytest.raises(ValidationError, match="at least two levels"):
            qubit_spectrum(device, "A", [0.5], levels=1, settings=fast_settings)
