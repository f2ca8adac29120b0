"""
FluxCoupler Services Module

Numerical services: operators and circuit Hamiltonians, the coupler response,
semi-classical and composite coupling models, flux-noise coherence and the
sweep runner shared by all of them.
"""

from .circuits import build_coupler, build_flux_qubit, find_degeneracy, qubit_spectrum
from .coupler import CouplerModel, CouplerResponse, circulating_current, coupling_region_map, effective_inductance
from .coupled import build_composite, extract_splitting, spectroscopy_sweep, t1_matrix_element
from .noise import coherence_vs_coupler, dephasing_rate, eta, psd, t1_coupler_limit
from .semiclassical import coupling_vs_coupler, delta_vs_coupler, galvanic_to_mutual, mediated_coupling
from .sweep_runner import run_sweep

__all__ = [
    'build_coupler',
    'build_flux_qubit',
    'find_degeneracy',
    'qubit_spectrum',
    'CouplerModel',
    'CouplerResponse',
    'circulating_current',
    'coupling_region_map',
    'effective_inductance',
    'build_composite',
    'extract_splitting',
    'spectroscopy_sweep',
    't1_matrix_element',
    'coherence_vs_coupler',
    'dephasing_rate',
    'eta',
    'psd',
    't1_coupler_limit',
    'coupling_vs_coupler',
    'delta_vs_coupler',
    'galvanic_to_mutual',
    'mediated_coupling',
    'run_sweep',
]
