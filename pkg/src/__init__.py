"""
FluxCoupler - flux-qubit and rf-SQUID coupler simulation toolkit.

This package contains the core components of FluxCoupler:
- models: device parameters, noise models and run configuration documents
- services: circuit Hamiltonians, coupler response, coupling and coherence models
- cli: command-line front end producing CSV and SVG outputs
"""

__version__ = "1.0.0"
__author__ = "FluxCoupler Team"
__description__ = "Tunable-coupler simulations for capacitively shunted flux qubits"
