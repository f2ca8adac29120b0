"""
FluxCoupler Unit Conventions

Internal units: energies as frequency E/h in GHz, flux in Φ₀, current in nA,
inductance in pH, capacitance in fF, time in s. Every conversion between these
and SI goes through the factors defined here.
"""

import math

from scipy import constants as _sc

H_PLANCK = _sc.h
HBAR = _sc.hbar
E_CHARGE = _sc.e
PHI0 = _sc.h / (2 * _sc.e)

GHZ = 1e9
PICO = 1e-12
FEMTO = 1e-15
NANO = 1e-9
TWO_PI = 2 * math.pi

# 2π × 1 Hz pivot of the flux-noise spectral density
OMEGA_PIVOT = TWO_PI * 1.0


def inductive_energy(L_pH: float) -> float:
    """E_L = (Φ₀/2π)²/L in GHz."""
    return (PHI0 / TWO_PI) ** 2 / (L_pH * PICO) / H_PLANCK / GHZ


def josephson_energy(I0_nA: float) -> float:
    """E_J = I₀Φ₀/2π in GHz."""
    return I0_nA * NANO * PHI0 / TWO_PI / H_PLANCK / GHZ


def charging_energy(C_fF: float) -> float:
    """E_C = e²/2C in GHz."""
    return E_CHARGE ** 2 / (2 * C_fF * FEMTO) / H_PLANCK / GHZ


def phase_to_current(L_pH: float) -> float:
    """Current in nA carried by an inductor L per radian of branch phase."""
    return PHI0 / TWO_PI / (L_pH * PICO) / NANO


# dE/df in GHz per Φ₀  ->  current in nA
NA_PER_GHZ_PER_FLUX = H_PLANCK * GHZ / PHI0 / NANO

# dI/df in nA per Φ₀  ->  inverse inductance in 1/pH
INV_PH_PER_NA_PER_FLUX = NANO / PHI0 * PICO

# M·I·I with M in pH and currents in nA  ->  energy in GHz
GHZ_PER_PH_NA2 = PICO * NANO * NANO / H_PLANCK / GHZ

# M·I with M in pH and I in nA  ->  flux in Φ₀
PHI0_PER_PH_NA = PICO * NANO / PHI0


def ghz_to_rad_s(value_ghz: float) -> float:
    return TWO_PI * GHZ * value_ghz


def rad_s_to_ghz(value_rad_s: float) -> float:
    return value_rad_s / (TWO_PI * GHZ)


def beta(L_pH: float, I0_nA: float) -> float:
    """rf-SQUID screening parameter 2πLI₀/Φ₀."""
    return TWO_PI * L_pH * PICO * I0_nA * NANO / PHI0
