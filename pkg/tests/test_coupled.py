"""
Unit tests for the composite two-qubit plus coupler model.

Tests cover:
- Composite Hamiltonian assembly in bare product bases
- Eigenstate identification and qubit transitions
- Spectroscopy sweeps and avoided-crossing extraction
"""

import math

import numpy as np
import pytest

from src.constants import PHI0_PER_PH_NA
from src.exceptions import IdentificationError, NotBracketedError, ValidationError
from src.models import FluxPoint, QubitLabel
from src.services.coupled import (
    SPECTRUM_COLUMNS,
    BareSubsystem,
    StateTag,
    TransitionSpectrum,
    assemble_composite,
    build_composite,
    conditional_frequency_shift,
    coupling_from_splitting,
    extract_splitting,
    find_product_state,
    identify_states,
    qubit_transition,
    spectroscopy_sweep,
    t1_matrix_element,
    verify_composite_truncation,
)
from src.services.coupler import CouplerModel
from src.services.semiclassical import coupling_vs_coupler, delta_vs_coupler, renormalized_mutual


def _subsystem(label, energies, current_scale=1.0):
    levels = len(energies)
    current = current_scale * (np.eye(levels, k=1) + np.eye(levels, k=-1))
    return BareSubsystem(label, np.asarray(energies, dtype=float), current, current @ current)


def _uncoupled():
    subsystems = (
        _subsystem("A", [0.0, 5.0, 11.0]),
        _subsystem("B", [0.0, 5.3, 10.9]),
        _subsystem("C", [0.0, 20.1, 41.0], current_scale=300.0),
    )
    return assemble_composite(subsystems, (0.0, 0.0), 467.0, FluxPoint())


def _crossing(x0, splitting, slope=50.0):
    grid = np.round(np.arange(0.49, 0.5105, 0.001), 6)
    distance = np.sqrt(splitting ** 2 + (slope * (grid - x0)) ** 2)
    frequencies = np.column_stack([5.0 - 0.5 * distance, 5.0 + 0.5 * distance])
    tags = [[StateTag.QUBIT_A.value, StateTag.QUBIT_B.value] for _ in grid]
    return TransitionSpectrum("f_A", grid, frequencies, tags, FluxPoint(f_A=0.5, f_B=0.5))


class TestCompositeAssembly:
    """Test the composite Hamiltonian from bare subsystems."""

    def test_uncoupled_spectrum_is_additive(self):
        """Test that zero mutuals leave a sum of bare energies."""
        system = _uncoupled()
        energies = system.solve().energies
        expected = sorted(a + b + c for a in [0.0, 5.0, 11.0] for b in [0.0, 5.3, 10.9] for c in [0.0, 20.1, 41.0])

        assert system.dims == (3, 3, 3)
        assert np.allclose(energies, expected)

    def test_product_index_round_trip(self):
        """Test the (a, b, c) <-> index mapping."""
        system = _uncoupled()
        for index in range(system.dim):
            assert system.product_index(*system.bare_labels(index)) == index
        assert system.product_index(0, 1, 0) == 3

    def test_diamagnetic_term(self):
        """Test that the M̃²Î²/2L_C term shifts the ground state upward."""
        subsystems = (
            _subsystem("A", [0.0, 5.0], current_scale=50.0),
            _subsystem("B", [0.0, 5.3], current_scale=50.0),
            _subsystem("C", [0.0, 20.0], current_scale=0.0),
        )
        system = assemble_composite(subsystems, (40.0, 40.0), 467.0, FluxPoint())
        assert system.solve(1).energies[0] > 0.0

    def test_truncation_guard(self):
        """Test that a subsystem cannot be enlarged by truncation."""
        with pytest.raises(ValidationError, match="requested"):
            _subsystem("A", [0.0, 1.0]).truncated(3)


class TestIdentification:
    """Test tagging of composite eigenstates."""

    def test_tags_of_uncoupled_states(self):
        """Test ground, single excitations and mixed states."""
        system = _uncoupled()
        solution = system.solve(4)
        tags = identify_states(system, solution.states)

        assert tags == [StateTag.GROUND, StateTag.QUBIT_A, StateTag.QUBIT_B, StateTag.OTHER]

    def test_hybridized_state(self):
        """Test that a spread superposition matches no bare state."""
        system = _uncoupled()
        states = np.zeros((system.dim, 1))
        states[system.product_index(1, 0, 0), 0] = math.sqrt(0.4)
        states[system.product_index(0, 1, 0), 0] = math.sqrt(0.4)
        states[system.product_index(0, 0, 1), 0] = math.sqrt(0.2)

        assert identify_states(system, states) == [StateTag.HYBRIDIZED]
        with pytest.raises(IdentificationError, match="resembles"):
            find_product_state(system, states, (0, 1, 0))

    def test_qubit_transition(self, fast_settings):
        """Test the first qubit-B excitation."""
        index, frequency, _ = qubit_transition(_uncoupled(), StateTag.QUBIT_B, settings=fast_settings)

        assert index == 2
        assert frequency == pytest.approx(5.3)

    def test_matrix_element_without_coupling(self, fast_settings):
        """Test that Î_C cannot connect |000⟩ to |010⟩."""
        assert t1_matrix_element(_uncoupled(), fast_settings) == pytest.approx(0.0, abs=1e-12)


class TestCompositeCircuit:
    """Test the composite model built from circuit Hamiltonians."""

    FLUX = FluxPoint(f_A=0.52, f_B=0.51, f_C=0.0)

    def test_build(self, device, fast_settings):
        """Test retained dimensions and Hermiticity."""
        system = build_composite(device, self.FLUX, settings=fast_settings)

        assert system.dims == (3, 3, 3)
        assert np.allclose(system.hamiltonian.matrix, system.hamiltonian.matrix.conj().T)

    def test_retained_validation(self, device, fast_settings):
        """Test retained level counts."""
        with pytest.raises(ValidationError, match="retained level counts"):
            build_composite(device, self.FLUX, retained=(1, 3, 3), settings=fast_settings)

    def test_truncation_check_reports(self, device, fast_settings):
        """Test the one-off composite truncation check."""
        assert isinstance(verify_composite_truncation(device, self.FLUX, settings=fast_settings), bool)

    def test_reflection_symmetry(self, device, fast_settings):
        """Test that (f_A, f_B, f_C) and (1 − f_A, 1 − f_B, −f_C) share one spectrum."""
        flux = FluxPoint(f_A=0.52, f_B=0.51, f_C=0.1)
        direct = build_composite(device, flux, settings=fast_settings).solve(5).energies
        mirrored = build_composite(device, flux.reflected(), settings=fast_settings).solve(5).energies

        assert mirrored == pytest.approx(direct, abs=1e-7)

    def test_coupler_matrix_element_grows_toward_half_flux(self, device, fast_settings):
        """Test that |⟨e|Î_C|g⟩| grows as the coupler softens toward f_C = 1/2."""
        model = CouplerModel(device, fast_settings)
        m_a = renormalized_mutual(device, QubitLabel.A)
        m_b = renormalized_mutual(device, QubitLabel.B)

        def element(f_C):
            offset = model.circulating_current(f_C).slope * PHI0_PER_PH_NA
            flux = FluxPoint(f_A=0.52 - m_a * offset, f_B=0.5 - m_b * offset, f_C=f_C)
            return t1_matrix_element(build_composite(device, flux, settings=fast_settings), fast_settings)

        elements = [element(f_C) for f_C in (0.0, 0.3, 0.45)]

        assert 0.0 < elements[0] < elements[1] < elements[2]

    def test_conditional_shift(self, device, fast_settings):
        """Test qubit B's frequency conditioned on qubit A."""
        result = conditional_frequency_shift(device, self.FLUX, settings=fast_settings)

        assert result.omega_b_given_a0 > 0
        assert result.omega_b_given_a1 > 0
        assert abs(result.shift) < 1.0

    def test_spectroscopy_sweep(self, device, fast_settings):
        """Test branch table shape and frame export."""
        spectrum = spectroscopy_sweep(
            device, "f_B", [0.505, 0.51, 0.515], self.FLUX, branches=2, settings=fast_settings, threads=2,
        )

        assert spectrum.frequencies.shape == (3, 2)
        assert np.all(spectrum.branch_distance() >= 0)
        frame = spectrum.to_frame()
        assert list(frame.columns) == SPECTRUM_COLUMNS
        assert len(frame) == 6

    def test_spectroscopy_axis_validation(self, device, fast_settings):
        """Test the swept axis name."""
        with pytest.raises(ValidationError, match="Unknown sweep axis"):
            spectroscopy_sweep(device, "f_D", [0.5], self.FLUX, settings=fast_settings)


class TestSplittingExtraction:
    """Test 2|J| from avoided crossings."""

    def test_exact_for_two_level_crossing(self):
        """Test location and splitting off the grid points."""
        result = extract_splitting(_crossing(0.5013, 0.1))

        assert result.splitting_ghz == pytest.approx(0.1, rel=1e-4)
        assert result.location == pytest.approx(0.5013, abs=1e-6)
        assert result.J == pytest.approx(0.5 * result.splitting)
        assert result.resolved

    def test_edge_minimum(self):
        """Test that a crossing outside the scan is not bracketed."""
        with pytest.raises(NotBracketedError, match="edge"):
            extract_splitting(_crossing(0.53, 0.1))

    def test_resolution_floor(self):
        """Test that sub-floor splittings are flagged unresolved."""
        result = extract_splitting(_crossing(0.5, 1e-6, slope=1.0), floor_ghz=1e-3)
        assert not result.resolved


@pytest.mark.slow
class TestCrossingCalibration:
    """Compare composite crossings against the measured device."""

    def test_maximum_coupling(self, device):
        """Test splitting/2 ≈ 94 MHz at f_C = 1/2 and agreement with the semi-classical J."""
        curve = delta_vs_coupler(device, [0.5], threads=4)
        crossing = coupling_from_splitting(device, curve, threads=4)[0]
        semiclassical = coupling_vs_coupler(device, [0.5], delta_curve=curve).J_over_2pi_mhz[0]

        assert abs(crossing.J_over_2pi_mhz) == pytest.approx(94.0, rel=0.15)
        assert abs(crossing.J_over_2pi_mhz) == pytest.approx(abs(semiclassical), rel=0.1)

    def test_zero_coupling(self, device):
        """Test a splitting of at most 0.44 MHz at f_C = 0.402."""
        curve = delta_vs_coupler(device, [0.402], threads=4)
        crossing = coupling_from_splitting(device, curve, threads=4)[0]

        assert crossing.splitting_mhz <= 0.44
