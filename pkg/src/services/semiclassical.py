"""
FluxCoupler Semi-classical Coupling Model

Galvanic-to-mutual renormalization, direct and coupler-mediated Ising coupling
J, coupler-induced qubit flux offsets and the inductive loading of the qubit
gap Δ. Circuit inputs come from `circuits` and `coupler`; everything else is
closed-form.

Units follow the package conventions: inductance pH, current nA, J and ε in
rad/s, Δ reported both in GHz and rad/s.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from numpy.polynomial import Chebyshev
from numpy.polynomial.chebyshev import chebpts1

from ..config import SolverConfig
from ..constants import HBAR, NANO, PHI0_PER_PH_NA, PICO, TWO_PI, ghz_to_rad_s
from ..exceptions import UnphysicalNetworkError, ValidationError
from ..models import DeviceParams, QubitLabel
from .circuits import build_flux_qubit, find_degeneracy, solver_settings
from .coupler import CouplerModel
from .operators import HermitianOperator, pauli_matrices
from .sweep_runner import run_sweep

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RenormalizedInductances:
    """Mutual-inductance picture of two galvanically coupled loops (pH)."""
    L_tilde_A: float
    L_tilde_B: float
    M_tilde: float


@dataclass(frozen=True)
class CouplingResult:
    """Signed Ising coupling and the inputs that produced it."""
    J: float
    M_eff: float
    M_tilde: float
    inv_L_eff: float
    i_p_a: float
    i_p_b: float

    @property
    def J_over_2pi_mhz(self) -> float:
        return self.J / TWO_PI / 1e6


class FluxOffset(NamedTuple):
    """Coupler-induced qubit flux offset δf (Φ₀) and bias shift δε (rad/s)."""
    delta_f: float
    delta_epsilon: float


def _require_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise ValidationError(f"{name} must be finite, got {value}")


def _energy_to_rad_s(m_ph: float, i1_na: float, i2_na: float) -> float:
    """M·I₁·I₂/ħ for M in pH and currents in nA."""
    return m_ph * PICO * i1_na * NANO * i2_na * NANO / HBAR


def galvanic_to_mutual(L_A: float, L_B: float, M: float) -> RenormalizedInductances:
    """L̃_{A,B} = L_{A,B} − M²/L_{B,A}; M̃ = M(1 − M²/(L_A L_B))."""
    _require_finite(L_A=L_A, L_B=L_B, M=M)
    if L_A <= 0 or L_B <= 0:
        raise UnphysicalNetworkError(f"Loop inductances must be positive, got {L_A}, {L_B}")
    if L_A * L_B <= M * M:
        raise UnphysicalNetworkError(
            f"Inductance network is not positive definite: L_A·L_B = {L_A * L_B:.4g} ≤ M² = {M * M:.4g}",
            details={"L_A": L_A, "L_B": L_B, "M": M},
        )
    return RenormalizedInductances(
        L_tilde_A=L_A - M * M / L_B,
        L_tilde_B=L_B - M * M / L_A,
        M_tilde=M * (1.0 - M * M / (L_A * L_B)),
    )


def renormalized_mutual(params: DeviceParams, which: Union[QubitLabel, str]) -> float:
    """M̃ between qubit `which` and the coupler; qubit–qubit mutual is zero."""
    return galvanic_to_mutual(params.qubit(which).l_loop, params.coupler.l_loop, params.m_shared).M_tilde


def direct_coupling(M_tilde: float, i_p_a: float, i_p_b: float) -> float:
    """J of two directly coupled qubits, ħJ = M̃ I_p^A I_p^B, in rad/s."""
    _require_finite(M_tilde=M_tilde, i_p_a=i_p_a, i_p_b=i_p_b)
    return _energy_to_rad_s(M_tilde, i_p_a, i_p_b)


def mediated_coupling(
    M_tilde: float,
    inv_L_eff: float,
    i_p_a: float,
    i_p_b: float,
    M_tilde_b: Optional[float] = None,
) -> CouplingResult:
    """J through the coupler, ħJ = (M̃_A M̃_B / L_eff) I_p^A I_p^B."""
    M_tilde_b = M_tilde if M_tilde_b is None else M_tilde_b
    _require_finite(M_tilde=M_tilde, M_tilde_b=M_tilde_b, inv_L_eff=inv_L_eff, i_p_a=i_p_a, i_p_b=i_p_b)
    m_eff = M_tilde * M_tilde_b * inv_L_eff
    return CouplingResult(
        J=_energy_to_rad_s(m_eff, i_p_a, i_p_b),
        M_eff=m_eff,
        M_tilde=M_tilde,
        inv_L_eff=inv_L_eff,
        i_p_a=i_p_a,
        i_p_b=i_p_b,
    )


def linear_loop_coupling(M_tilde: float, L: float, i_p_a: float, i_p_b: float) -> CouplingResult:
    """J through an intermediate linear loop of inductance L."""
    if L == 0:
        raise ValidationError("Intermediate loop inductance must be non-zero")
    return mediated_coupling(M_tilde, 1.0 / L, i_p_a, i_p_b)


def qubit_flux_offset(M_tilde: float, I_circ: float, i_p: float) -> FluxOffset:
    """δf = M̃ I_circ/Φ₀ and δε = 2 M̃ I_p I_circ/ħ."""
    _require_finite(M_tilde=M_tilde, I_circ=I_circ, i_p=i_p)
    return FluxOffset(
        delta_f=M_tilde * I_circ * PHI0_PER_PH_NA,
        delta_epsilon=2.0 * _energy_to_rad_s(M_tilde, i_p, I_circ),
    )


def loaded_inductance(L_q: float, M: float, inv_L_eff: float) -> float:
    """L_loaded = L_q − M²/L_eff in pH."""
    _require_finite(L_q=L_q, M=M, inv_L_eff=inv_L_eff)
    return L_q - M * M * inv_L_eff


def effective_ising_hamiltonian(
    eps_A: float, delta_A: float, eps_B: float, delta_B: float, J: float
) -> HermitianOperator:
    """Two-qubit transverse Ising Hamiltonian in the units of its inputs.

    H = ½(ε_A σz + Δ_A σx)⊗I + ½ I⊗(ε_B σz + Δ_B σx) + J σz⊗σz
    """
    sigma_x, _, sigma_z = pauli_matrices()
    identity = np.eye(2)
    single_a = 0.5 * (eps_A * sigma_z + delta_A * sigma_x)
    single_b = 0.5 * (eps_B * sigma_z + delta_B * sigma_x)
    matrix = np.kron(single_a, identity) + np.kron(identity, single_b) + J * np.kron(sigma_z, sigma_z)
    return HermitianOperator(matrix)


def total_sensitivity(eps: float, delta: float, kappa_eps: float, kappa_delta: float) -> float:
    """κ = (ε/ω₀₁)κ_ε + (Δ/ω₀₁)κ_Δ with ω₀₁ = √(ε² + Δ²)."""
    omega = math.hypot(eps, delta)
    if omega == 0:
        raise ValidationError("Sensitivity undefined for a vanishing qubit frequency")
    return (eps / omega) * kappa_eps + (delta / omega) * kappa_delta


def longitudinal_shift(eps_A: float, delta_A: float, eps_B: float, delta_B: float, J: float) -> float:
    """First-order conditional shift of qubit B's frequency, 2J (ε_A/ω_A)(ε_B/ω_B)."""
    return 2.0 * J * (eps_A / math.hypot(eps_A, delta_A)) * (eps_B / math.hypot(eps_B, delta_B))


def transverse_projection(delta_A: float, delta_B: float, omega: float) -> float:
    """(Δ_A/ω)(Δ_B/ω): weight of σzσz in the exchange of co-resonant qubits."""
    if omega <= 0:
        raise ValidationError("Resonance frequency must be positive")
    return (delta_A / omega) * (delta_B / omega)


def on_off_ratio(J_max: float, J_min: float) -> float:
    """|J_max| / |J_min|, infinite for a perfect off state."""
    if J_min == 0:
        return float("inf")
    return abs(J_max) / abs(J_min)


# --- loaded qubit gap --------------------------------------------------------

class LoadedQubitTable:
    """Δ and I_p of one qubit versus loop inductance.

    The degeneracy search runs at Chebyshev nodes spanning [l_min, l_max];
    values in between come from the interpolating polynomial, which is smooth
    in L, so derivatives are taken analytically.
    """

    def __init__(
        self,
        params: DeviceParams,
        which: Union[QubitLabel, str],
        l_min: float,
        l_max: float,
        settings: Optional[SolverConfig] = None,
        threads: int = 1,
    ):
        self.params = params
        self.which = QubitLabel(which)
        self.settings = solver_settings(settings)
        if not l_max > l_min:
            raise ValidationError(f"Inductance range must be increasing, got [{l_min}, {l_max}]")
        self.domain = (l_min, l_max)

        count = self.settings.interpolation_nodes
        middle, half = 0.5 * (l_min + l_max), 0.5 * (l_max - l_min)
        self.nodes = middle + half * chebpts1(count)

        logger.info(
            f"Sampling qubit {self.which.value} degeneracy at {count} inductances in "
            f"[{l_min:.2f}, {l_max:.2f}] pH"
        )
        points = run_sweep(
            lambda l: find_degeneracy(params, self.which, l_override=l, settings=self.settings),
            list(self.nodes), threads=threads, label=f"L_{self.which.value}",
        )
        self.degeneracies = points
        domain = [l_min, l_max]
        self._delta = Chebyshev.fit(self.nodes, [p.delta_ghz for p in points], count - 1, domain=domain)
        self._i_p = Chebyshev.fit(self.nodes, [p.i_p for p in points], count - 1, domain=domain)
        self._delta_slope = self._delta.deriv()

    def _check(self, L: np.ndarray) -> None:
        low, high = self.domain
        span = high - low
        if np.any(L < low - 1e-9 * span) or np.any(L > high + 1e-9 * span):
            raise ValidationError(f"Inductance outside sampled range [{low}, {high}] pH")

    def delta_ghz(self, L):
        L = np.asarray(L, dtype=float)
        self._check(L)
        return self._delta(L)

    def i_p(self, L):
        L = np.asarray(L, dtype=float)
        self._check(L)
        return self._i_p(L)

    def delta_slope(self, L):
        """∂Δ/∂L in GHz per pH."""
        L = np.asarray(L, dtype=float)
        self._check(L)
        return self._delta_slope(L)


@dataclass
class LoadedQubitCurve:
    """Per-qubit gap curve versus coupler flux."""
    which: QubitLabel
    l_loaded: np.ndarray
    delta_ghz: np.ndarray
    i_p: np.ndarray
    kappa: np.ndarray

    @property
    def kappa_peak(self) -> float:
        return float(np.max(np.abs(self.kappa))) if self.kappa.size else 0.0


@dataclass
class DeltaCurve:
    """Δ(f_C) and κ_{Δ,Φ_C}(f_C) for the requested qubits."""
    flux_grid: np.ndarray
    qubits: Dict[QubitLabel, LoadedQubitCurve]
    inv_L_eff: np.ndarray
    I_circ: np.ndarray
    tables: Dict[QubitLabel, LoadedQubitTable] = field(default_factory=dict, repr=False)

    def __getitem__(self, which: Union[QubitLabel, str]) -> LoadedQubitCurve:
        return self.qubits[QubitLabel(which)]

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({"f_C": self.flux_grid})
        for label, curve in self.qubits.items():
            frame[f"L_loaded_{label.value}_pH"] = curve.l_loaded
            frame[f"Delta_{label.value}_GHz"] = curve.delta_ghz
            frame[f"kappa_{label.value}_rad_per_s_per_phi0"] = curve.kappa
        return frame


def _loaded_curve_inputs(model: CouplerModel, grid: np.ndarray, threads: int):
    step = model.settings.fd_step_first

    def evaluate(f_C: float) -> Tuple[float, float, float, float]:
        return (
            model.inverse_inductance(f_C),
            model.inverse_inductance(f_C - step),
            model.inverse_inductance(f_C + step),
            model.circulating_current(f_C).slope,
        )

    rows = np.array(run_sweep(evaluate, list(grid), threads=threads, label="f_C"))
    return rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3]


def delta_vs_coupler(
    params: DeviceParams,
    grid: Sequence[float],
    qubits: Sequence[Union[QubitLabel, str]] = (QubitLabel.A, QubitLabel.B),
    settings: Optional[SolverConfig] = None,
    threads: int = 1,
    exact: bool = False,
) -> DeltaCurve:
    """Loaded qubit gaps Δ(f_C) and sensitivities κ_{Δ,Φ_C} = ∂Δ/∂Φ_C.

    κ is the centered difference of Δ over f_C ± fd_step_first, in rad/s per Φ₀.
    With `exact` every gap is located by its own degeneracy search instead of
    the inductance interpolant.
    """
    settings = solver_settings(settings)
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValidationError("Coupler grid must be a non-empty 1-D sequence")
    model = CouplerModel(params, settings)
    inv_l, inv_l_minus, inv_l_plus, currents = _loaded_curve_inputs(model, grid, threads)
    step = settings.fd_step_first

    curves: Dict[QubitLabel, LoadedQubitCurve] = {}
    tables: Dict[QubitLabel, LoadedQubitTable] = {}
    for which in qubits:
        label = QubitLabel(which)
        l_q = params.qubit(label).l_loop
        m = params.m_shared
        l_mid = np.array([loaded_inductance(l_q, m, v) for v in inv_l])
        l_minus = np.array([loaded_inductance(l_q, m, v) for v in inv_l_minus])
        l_plus = np.array([loaded_inductance(l_q, m, v) for v in inv_l_plus])

        if exact:
            def gap(l: float) -> Tuple[float, float]:
                point = find_degeneracy(params, label, l_override=l, settings=settings)
                return point.delta_ghz, point.i_p

            values = run_sweep(gap, list(np.concatenate([l_mid, l_minus, l_plus])), threads, f"L_{label.value}")
            values = np.array(values)
            n = grid.size
            delta, i_p = values[:n, 0], values[:n, 1]
            delta_minus, delta_plus = values[n:2 * n, 0], values[2 * n:, 0]
        else:
            everything = np.concatenate([l_mid, l_minus, l_plus])
            low, high = float(everything.min()), float(everything.max())
            pad = max(0.01 * (high - low), 0.05)
            table = LoadedQubitTable(params, label, low - pad, high + pad, settings, threads)
            tables[label] = table
            delta, i_p = table.delta_ghz(l_mid), table.i_p(l_mid)
            delta_minus, delta_plus = table.delta_ghz(l_minus), table.delta_ghz(l_plus)

        kappa = ghz_to_rad_s(1.0) * (delta_plus - delta_minus) / (2.0 * step)
        curves[label] = LoadedQubitCurve(label, l_mid, np.asarray(delta), np.asarray(i_p), np.asarray(kappa))
        logger.info(
            f"Qubit {label.value}: Δ/2π in [{np.min(delta):.4f}, {np.max(delta):.4f}] GHz, "
            f"peak |κ| = {curves[label].kappa_peak:.4g} rad/s/Φ₀"
        )

    return DeltaCurve(flux_grid=grid, qubits=curves, inv_L_eff=inv_l, I_circ=currents, tables=tables)


# --- coupling and qubit frequency versus coupler bias ------------------------

@dataclass
class CouplingCurve:
    """Semi-classical J(f_C)."""
    flux_grid: np.ndarray
    results: List[CouplingResult]

    @property
    def J_over_2pi_mhz(self) -> np.ndarray:
        return np.array([r.J_over_2pi_mhz for r in self.results])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "f_C": self.flux_grid,
            "J_over_2pi_MHz": self.J_over_2pi_mhz,
            "M_eff_pH": [r.M_eff for r in self.results],
        }, columns=["f_C", "J_over_2pi_MHz", "M_eff_pH"])


def coupling_vs_coupler(
    params: DeviceParams,
    grid: Sequence[float],
    settings: Optional[SolverConfig] = None,
    threads: int = 1,
    delta_curve: Optional[DeltaCurve] = None,
) -> CouplingCurve:
    """J(f_C) with I_p of each coupler-loaded qubit at its degeneracy."""
    grid = np.asarray(grid, dtype=float)
    curve = delta_curve or delta_vs_coupler(params, grid, settings=settings, threads=threads)
    m_a = renormalized_mutual(params, QubitLabel.A)
    m_b = renormalized_mutual(params, QubitLabel.B)
    results = [
        mediated_coupling(m_a, float(inv_l), float(i_a), float(i_b), M_tilde_b=m_b)
        for inv_l, i_a, i_b in zip(curve.inv_L_eff, curve[QubitLabel.A].i_p, curve[QubitLabel.B].i_p)
    ]
    return CouplingCurve(flux_grid=grid, results=results)


@dataclass
class FrequencyCurve:
    """Qubit ω₀₁ versus coupler bias at fixed qubit flux."""
    which: QubitLabel
    f_q: float
    flux_grid: np.ndarray
    omega01_ghz: np.ndarray
    delta_f: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "f_C": self.flux_grid,
            "delta_f_phi0": self.delta_f,
            "omega01_GHz": self.omega01_ghz,
        })


def qubit_frequency_vs_coupler(
    params: DeviceParams,
    which: Union[QubitLabel, str],
    f_q: float,
    grid: Sequence[float],
    settings: Optional[SolverConfig] = None,
    threads: int = 1,
) -> FrequencyCurve:
    """Loaded qubit rebuilt at f_q + δf(f_C) with L_loaded(f_C)."""
    settings = solver_settings(settings)
    label = QubitLabel(which)
    model = CouplerModel(params, settings)
    m_tilde = renormalized_mutual(params, label)
    l_q = params.qubit(label).l_loop

    def evaluate(f_C: float) -> Tuple[float, float]:
        offset = m_tilde * model.circulating_current(f_C).slope * PHI0_PER_PH_NA
        l_loaded = loaded_inductance(l_q, params.m_shared, model.inverse_inductance(f_C))
        build = build_flux_qubit(params, label, f_q + offset, l_override=l_loaded, settings=settings)
        return build.solve(2, settings.residual_factor).gap(), offset

    grid = np.asarray(grid, dtype=float)
    rows = np.array(run_sweep(evaluate, list(grid), threads=threads, label="f_C"))
    return FrequencyCurve(which=label, f_q=f_q, flux_grid=grid, omega01_ghz=rows[:, 0], delta_f=rows[:, 1])
