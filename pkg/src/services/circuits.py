"""
FluxCoupler Circuits

Quantized Hamiltonians and loop-current operators of the capacitively shunted
three-junction flux qubit and of the single-junction rf-SQUID coupler.

Both circuits are written in reduced node phases and Cooper-pair numbers and
expanded in the harmonic normal-mode basis of the circuit linearized around
its f = 1/2 operating point. Josephson cosines are built from exact operator
exponentials, so the only approximation is the level truncation, which is
checked against a 1 kHz contract.
"""

import logging
import threading
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.optimize import minimize_scalar

from ..config import SolverConfig, get_config
from ..constants import (
    HBAR,
    NA_PER_GHZ_PER_FLUX,
    NANO,
    PHI0,
    TWO_PI,
    charging_energy,
    ghz_to_rad_s,
    inductive_energy,
    josephson_energy,
    phase_to_current,
)
from ..exceptions import ConvergenceError, NumericError, RangeError, ValidationError
from ..models import DeviceParams, QubitLabel
from .operators import (
    BasisKind,
    EigenSolution,
    HermitianOperator,
    ModeBasis,
    eigendecompose,
    exp_i_flux,
    max_level_shift,
    mode_operators,
    tensor_product,
)

logger = logging.getLogger(__name__)


class QubitBranch(str, Enum):
    """Branches of the qubit ring, in loop order."""
    SMALL_JUNCTION = "small_junction"
    LARGE_JUNCTION_1 = "large_junction_1"
    LARGE_JUNCTION_2 = "large_junction_2"
    INDUCTOR = "inductor"


RING_BRANCHES: Tuple[QubitBranch, ...] = tuple(QubitBranch)

# branch phases from node phases: b = B φ, node 0 is the shunted node
RING_INCIDENCE = np.array([
    [1.0, 0.0, 0.0],
    [-1.0, 1.0, 0.0],
    [0.0, -1.0, 1.0],
    [0.0, 0.0, -1.0],
])

# branch phases of the f = 1/2 linearization point
OPERATING_PHASES = np.array([np.pi, 0.0, 0.0, 0.0])

COUPLER_GAUGE = "junction"

# loop inductances closer than this share one truncation check
LOOP_INDUCTANCE_BUCKET_PH = 5.0


def solver_settings(settings: Optional[SolverConfig] = None) -> SolverConfig:
    return settings if settings is not None else get_config().solver


def junction_capacitance(i0: float, params: DeviceParams) -> float:
    """Junction self-capacitance S_c·A in fF for a junction of critical current `i0` nA."""
    if not np.isfinite(i0) or i0 <= 0:
        raise ValidationError(f"Critical current must be positive, got {i0}")
    capacitance = params.s_c * params.junction_area(i0)
    if not np.isfinite(capacitance) or capacitance <= 0:
        raise ValidationError(f"Derived junction capacitance is not positive: {capacitance}")
    return capacitance


@dataclass(frozen=True)
class Spectrum:
    """Ordered eigenenergies with loop-current matrix elements."""
    energies: np.ndarray
    states: np.ndarray
    current_elements: np.ndarray
    residual: float

    @property
    def transitions(self) -> np.ndarray:
        """Transition frequencies from the ground state (GHz)."""
        return self.energies[1:] - self.energies[0]

    def mean_current(self, level: int = 0) -> float:
        return float(np.real(self.current_elements[level, level]))

    def as_solution(self) -> EigenSolution:
        return EigenSolution(energies=self.energies, states=self.states, residual=self.residual)


@dataclass(frozen=True)
class CircuitHamiltonian:
    """Hamiltonian, loop current and ∂H/∂Φ_ext of one circuit in one basis.

    `current_op` is the inductor-branch current and `flux_derivative_op` is
    ∂Ĥ/∂Φ_ext for the external flux on the `gauge` branch, both in nA. Their
    eigenstate expectations coincide.
    """
    hamiltonian: HermitianOperator
    current_op: HermitianOperator
    flux_derivative_op: HermitianOperator
    bases: Tuple[ModeBasis, ...]
    gauge: str
    label: str
    flux: float
    mode_frequencies: Tuple[float, ...] = ()

    @property
    def dim(self) -> int:
        return self.hamiltonian.dim

    @property
    def levels(self) -> int:
        return self.bases[0].levels

    def solve(self, k: int, residual_factor: float = 1e-9) -> EigenSolution:
        return eigendecompose(self.hamiltonian, k, residual_factor)

    def spectrum(self, k: int, residual_factor: float = 1e-9) -> Spectrum:
        solution = self.solve(k, residual_factor)
        elements = self.current_op.matrix_elements(solution.states)
        return Spectrum(
            energies=solution.energies,
            states=solution.states,
            current_elements=elements,
            residual=solution.residual,
        )


@dataclass(frozen=True)
class ConvergenceReport:
    """Outcome of one truncation refinement check."""
    label: str
    levels: int
    max_shift_ghz: float
    tolerance_ghz: float
    build: CircuitHamiltonian

    @property
    def converged(self) -> bool:
        return self.max_shift_ghz < self.tolerance_ghz


def check_convergence(
    builder: Callable[[int], CircuitHamiltonian],
    levels: int,
    retained: int = 4,
    settings: Optional[SolverConfig] = None,
) -> ConvergenceReport:
    """Compare the lowest `retained` levels at `levels` and `levels + 2` per mode."""
    settings = solver_settings(settings)
    coarse = builder(levels)
    fine = builder(levels + 2)
    k = min(retained, coarse.dim)
    shift = max_level_shift(
        coarse.solve(k, settings.residual_factor).energies,
        fine.solve(k, settings.residual_factor).energies,
    )
    report = ConvergenceReport(coarse.label, levels, shift, settings.convergence_tolerance_ghz, coarse)
    logger.debug(f"Truncation check {coarse.label}: levels={levels} shift={shift:.3e} GHz")
    return report


def converged_build(
    builder: Callable[[int], CircuitHamiltonian],
    levels: int,
    retained: int,
    settings: Optional[SolverConfig] = None,
) -> CircuitHamiltonian:
    """Raise the per-mode level count until the truncation contract holds."""
    settings = solver_settings(settings)
    report = None
    for _ in range(settings.max_level_increases + 1):
        report = check_convergence(builder, levels, retained, settings)
        if report.converged:
            return report.build
        logger.warning(
            f"{report.label} not converged at {levels} levels "
            f"(shift {report.max_shift_ghz:.3e} GHz), raising truncation"
        )
        levels += 2
    raise ConvergenceError(
        f"{report.label} failed the {settings.convergence_tolerance_ghz:.1e} GHz truncation contract "
        f"up to {report.levels} levels (last shift {report.max_shift_ghz:.3e} GHz)",
        mode=report.label,
        levels=report.levels,
        details={"max_shift_ghz": report.max_shift_ghz},
    )


@lru_cache(maxsize=256)
def _exp_i_flux_cached(levels: int, phi_zpf: float, coefficient: float, padding: int) -> np.ndarray:
    matrix = exp_i_flux(ModeBasis(levels, BasisKind.HARMONIC, phi_zpf), coefficient, padding)
    matrix.setflags(write=False)
    return matrix


def _embed(factors_by_slot: Dict[int, np.ndarray], dims: Sequence[int]) -> np.ndarray:
    factors = [factors_by_slot.get(slot, np.eye(d)) for slot, d in enumerate(dims)]
    return tensor_product(factors)


# --- rf-SQUID coupler -------------------------------------------------------

def coupler_energies(params: DeviceParams) -> Tuple[float, float, float]:
    """(E_L, E_J, E_C) of the coupler in GHz."""
    coupler = params.coupler
    e_c = charging_energy(junction_capacitance(coupler.i0, params))
    return inductive_energy(coupler.l_loop), josephson_energy(coupler.i0), e_c


def coupler_basis(params: DeviceParams, levels: int) -> ModeBasis:
    """Flux-independent oscillator basis of stiffness E_L + E_J."""
    e_l, e_j, e_c = coupler_energies(params)
    phi_zpf = (2.0 * e_c / (e_l + e_j)) ** 0.25
    return ModeBasis(levels, BasisKind.HARMONIC, phi_zpf, label="coupler")


def _assemble_coupler(params: DeviceParams, f_C: float, levels: int, padding: int) -> CircuitHamiltonian:
    e_l, e_j, e_c = coupler_energies(params)
    basis = coupler_basis(params, levels)
    theta, n = mode_operators(basis)
    n_squared = np.real(n @ n)

    exponential = _exp_i_flux_cached(levels, basis.phi_zpf, 1.0, padding)
    cos_theta, sin_theta = exponential.real, exponential.imag
    bias = TWO_PI * f_C
    cos_shifted = np.cos(bias) * cos_theta - np.sin(bias) * sin_theta
    sin_shifted = np.sin(bias) * cos_theta + np.cos(bias) * sin_theta

    # θ is the inductor branch phase; the external flux sits on the junction
    hamiltonian = 4.0 * e_c * n_squared + 0.5 * e_l * (theta @ theta) - e_j * cos_shifted
    current = -phase_to_current(params.coupler.l_loop) * theta
    flux_derivative = NA_PER_GHZ_PER_FLUX * TWO_PI * e_j * sin_shifted

    return CircuitHamiltonian(
        hamiltonian=HermitianOperator(hamiltonian),
        current_op=HermitianOperator(current),
        flux_derivative_op=HermitianOperator(flux_derivative),
        bases=(basis,),
        gauge=COUPLER_GAUGE,
        label="coupler",
        flux=f_C,
        mode_frequencies=(float(np.sqrt(8.0 * e_c * (e_l + e_j))),),
    )


def build_coupler(
    params: DeviceParams,
    f_C: float,
    levels: Optional[int] = None,
    settings: Optional[SolverConfig] = None,
    check: bool = True,
) -> CircuitHamiltonian:
    """Coupler Hamiltonian Ĥ = 4E_C n² + E_L θ²/2 − E_J cos(θ + 2πf_C)."""
    settings = solver_settings(settings)
    levels = levels or settings.coupler_levels
    if not np.isfinite(f_C):
        raise ValidationError("Coupler flux must be finite")

    def builder(n: int) -> CircuitHamiltonian:
        return _assemble_coupler(params, f_C, n, settings.expm_padding)

    if not check:
        return builder(levels)
    return converged_build(builder, levels, settings.composite_levels + 2, settings)


# --- three-junction flux qubit ----------------------------------------------

def capacitance_matrix(params: DeviceParams, which: Union[QubitLabel, str]) -> np.ndarray:
    """Node capacitance matrix of the ring in fF."""
    qubit = params.qubit(which)
    c_small = junction_capacitance(qubit.i0_small, params) + qubit.c_shunt
    c_large = junction_capacitance(qubit.i0_large, params)
    branch_c = np.array([c_small, c_large, c_large, 0.0])
    matrix = RING_INCIDENCE.T @ np.diag(branch_c) @ RING_INCIDENCE
    try:
        np.linalg.cholesky(matrix)
    except np.linalg.LinAlgError as e:
        raise ValidationError(f"Capacitance matrix of qubit {which} is not positive definite") from e
    return matrix


@dataclass(frozen=True)
class RingModes:
    """Normal modes of the linearized ring: node phases φ = center + T·y."""
    transform: np.ndarray
    frequencies: np.ndarray
    center: np.ndarray
    branch_weights: np.ndarray
    branch_offsets: np.ndarray

    @property
    def branch_phases(self) -> np.ndarray:
        """Branch phases at y = 0: gauge offsets plus the centered node phases."""
        return self.branch_offsets + RING_INCIDENCE @ self.center


def _ring_energies(params: DeviceParams, which: Union[QubitLabel, str], l_loop: float):
    qubit = params.qubit(which)
    e_j = np.array([
        josephson_energy(qubit.i0_small),
        josephson_energy(qubit.i0_large),
        josephson_energy(qubit.i0_large),
    ])
    return e_j, inductive_energy(l_loop)


def ring_normal_modes(
    params: DeviceParams,
    which: Union[QubitLabel, str],
    f_q: float,
    l_loop: float,
    gauge: QubitBranch = QubitBranch.INDUCTOR,
) -> RingModes:
    """Normal modes of the ring linearized at f = 1/2.

    The full 2πf sits on the `gauge` branch. The node-phase center moves the
    expansion point onto OPERATING_PHASES at f = 1/2 in every gauge, so the
    basis is flux-independent and gauges differ only by where the 2π(f − 1/2)
    displacement enters.
    """
    e_j, e_l = _ring_energies(params, which, l_loop)
    inverse_c = np.linalg.inv(capacitance_matrix(params, which))
    # H = ½ nᵀ A n with A = 8 E_C, E_C = e²C⁻¹/2h
    kinetic = 8.0 * charging_energy(1.0) * inverse_c

    gauge_index = RING_BRANCHES.index(QubitBranch(gauge))
    offsets = np.zeros(4)
    # whole flux quanta are a 2π node-phase translation; keep the displacement within ½ Φ₀
    offsets[gauge_index] = TWO_PI * (f_q - np.round(f_q - 0.5))
    # B·center = OPERATING_PHASES − (gauge offsets at f = 1/2); the right side sums to zero
    target = OPERATING_PHASES.copy()
    target[gauge_index] -= np.pi
    center, *_ = np.linalg.lstsq(RING_INCIDENCE, target, rcond=None)

    values, vectors = np.linalg.eigh(kinetic)
    kinetic_root = (vectors * np.sqrt(values)) @ vectors.T

    def normal_modes(stiffness_per_branch):
        stiffness = RING_INCIDENCE.T @ np.diag(stiffness_per_branch) @ RING_INCIDENCE
        return np.linalg.eigh(kinetic_root @ stiffness @ kinetic_root)

    curvature = np.array([-e_j[0], e_j[1], e_j[2], e_l])
    omega_squared, modes = normal_modes(curvature)
    if np.any(omega_squared <= 0):
        logger.debug(f"Qubit {which} linearization at f=1/2 not stable, using |cos| stiffness")
        omega_squared, modes = normal_modes(np.abs(curvature))

    transform = kinetic_root @ modes
    return RingModes(
        transform=transform,
        frequencies=np.sqrt(omega_squared),
        center=center,
        branch_weights=RING_INCIDENCE @ transform,
        branch_offsets=offsets,
    )


def _assemble_qubit(
    params: DeviceParams,
    which: Union[QubitLabel, str],
    f_q: float,
    l_loop: float,
    gauge: QubitBranch,
    levels: int,
    padding: int,
) -> CircuitHamiltonian:
    label = f"qubit_{QubitLabel(which).value}"
    e_j, e_l = _ring_energies(params, which, l_loop)
    modes = ring_normal_modes(params, which, f_q, l_loop, gauge)
    weights = modes.branch_weights
    phases = modes.branch_phases
    dims = [levels] * 3

    bases, coordinates, momenta = [], [], []
    for k, omega in enumerate(modes.frequencies):
        basis = ModeBasis(levels, BasisKind.HARMONIC, 1.0 / np.sqrt(2.0 * omega), label=f"{label}_mode{k}")
        y, p = mode_operators(basis)
        bases.append(basis)
        coordinates.append(y)
        momenta.append(p)

    dim = levels ** 3
    hamiltonian = np.zeros((dim, dim))
    for k in range(3):
        hamiltonian += 0.5 * _embed({k: np.real(momenta[k] @ momenta[k])}, dims)

    # junction branches: -E_J cos(b), b = Σ_k W_bk y_k + phase_b
    junction_sines = []
    for branch in range(3):
        factors = {
            k: _exp_i_flux_cached(levels, bases[k].phi_zpf, float(weights[branch, k]), padding)
            for k in range(3)
        }
        phase = np.exp(1j * phases[branch]) * _embed(factors, dims)
        hamiltonian -= e_j[branch] * phase.real
        junction_sines.append(phase.imag)
        del phase

    # inductor branch: E_L (b_L)²/2, b_L = Σ_k W_Lk y_k + phase_L
    inductor_phase = np.zeros((dim, dim))
    inductor_squared = np.zeros((dim, dim))
    for k in range(3):
        w_k = float(weights[3, k])
        inductor_phase += w_k * _embed({k: coordinates[k]}, dims)
        inductor_squared += w_k * w_k * _embed({k: coordinates[k] @ coordinates[k]}, dims)
        for m in range(k + 1, 3):
            w_m = float(weights[3, m])
            inductor_squared += 2.0 * w_k * w_m * _embed({k: coordinates[k], m: coordinates[m]}, dims)
    shift = float(phases[3])
    diagonal = np.diag_indices(dim)
    inductor_squared += 2.0 * shift * inductor_phase
    inductor_squared[diagonal] += shift * shift
    inductor_phase[diagonal] += shift
    hamiltonian += 0.5 * e_l * inductor_squared

    current = phase_to_current(l_loop) * inductor_phase
    gauge_index = RING_BRANCHES.index(QubitBranch(gauge))
    if gauge_index == 3:
        flux_derivative = NA_PER_GHZ_PER_FLUX * TWO_PI * e_l * inductor_phase
    else:
        flux_derivative = NA_PER_GHZ_PER_FLUX * TWO_PI * e_j[gauge_index] * junction_sines[gauge_index]

    return CircuitHamiltonian(
        hamiltonian=HermitianOperator(hamiltonian),
        current_op=HermitianOperator(current),
        flux_derivative_op=HermitianOperator(flux_derivative),
        bases=tuple(bases),
        gauge=QubitBranch(gauge).value,
        label=label,
        flux=f_q,
        mode_frequencies=tuple(float(w) for w in modes.frequencies),
    )


_truncation_levels: Dict[tuple, int] = {}
_truncation_lock = threading.Lock()


def clear_truncation_cache() -> None:
    with _truncation_lock:
        _truncation_levels.clear()


def qubit_truncation_levels(
    params: DeviceParams,
    which: Union[QubitLabel, str],
    l_loop: float,
    gauge: QubitBranch = QubitBranch.INDUCTOR,
    levels: Optional[int] = None,
    retained: int = 2,
    settings: Optional[SolverConfig] = None,
) -> int:
    """Per-mode level count meeting the truncation contract at f = 1/2.

    Resolved once per device, qubit, gauge and loop inductance (to the nearest
    `LOOP_INDUCTANCE_BUCKET_PH`) and cached. Raises ConvergenceError naming the
    mode when `max_level_increases` raises are not enough.
    """
    settings = solver_settings(settings)
    levels = levels or settings.qubit_levels
    key = (
        params.model_dump_json(),
        QubitLabel(which),
        QubitBranch(gauge),
        round(l_loop / LOOP_INDUCTANCE_BUCKET_PH),
        levels,
        retained,
        settings.convergence_tolerance_ghz,
        settings.max_level_increases,
        settings.expm_padding,
    )
    with _truncation_lock:
        cached = _truncation_levels.get(key)
    if cached is not None:
        return cached

    def builder(n: int) -> CircuitHamiltonian:
        return _assemble_qubit(params, which, 0.5, l_loop, gauge, n, settings.expm_padding)

    resolved = converged_build(builder, levels, retained, settings).levels
    with _truncation_lock:
        _truncation_levels[key] = resolved
    logger.info(f"qubit_{QubitLabel(which).value} truncation resolved at {resolved} levels/mode (L={l_loop:.1f} pH)")
    return resolved


def build_flux_qubit(
    params: DeviceParams,
    which: Union[QubitLabel, str],
    f_q: float,
    l_override: Optional[float] = None,
    gauge: QubitBranch = QubitBranch.INDUCTOR,
    levels: Optional[int] = None,
    settings: Optional[SolverConfig] = None,
    retained: int = 2,
) -> CircuitHamiltonian:
    """Ring Hamiltonian of qubit `which` at reduced flux `f_q`.

    `l_override` replaces the loop inductance, e.g. with the coupler-loaded value.
    The lowest `retained` eigenvalues meet the truncation contract: checked at
    this flux when `check_convergence` is set, otherwise resolved once per
    configuration by `qubit_truncation_levels` unless `verify_truncation` is off.
    """
    settings = solver_settings(settings)
    levels = levels or settings.qubit_levels
    if not np.isfinite(f_q):
        raise ValidationError("Qubit flux must be finite")
    l_loop = params.qubit(which).l_loop if l_override is None else l_override
    if not np.isfinite(l_loop) or l_loop <= 0:
        raise ValidationError(f"Loop inductance must be positive, got {l_loop}")

    def builder(n: int) -> CircuitHamiltonian:
        return _assemble_qubit(params, which, f_q, l_loop, gauge, n, settings.expm_padding)

    if settings.check_convergence:
        return converged_build(builder, levels, retained, settings)
    if settings.verify_truncation:
        levels = qubit_truncation_levels(params, which, l_loop, gauge, levels, retained, settings)
    return builder(levels)


# --- two-level reduction ----------------------------------------------------

def epsilon_from_flux(i_p: float, f: float, f_degeneracy: float = 0.5) -> float:
    """Two-level bias ε = 2 I_p (f − f_deg) Φ₀ / ħ in rad/s."""
    return 2.0 * i_p * NANO * (f - f_degeneracy) * PHI0 / HBAR


@dataclass(frozen=True)
class TwoLevelParameters:
    """ε, Δ in rad/s and I_p in nA at flux `f`."""
    epsilon: float
    delta: float
    i_p: float
    f: float
    f_degeneracy: float

    @property
    def delta_ghz(self) -> float:
        return self.delta / (TWO_PI * 1e9)

    def epsilon_at(self, f: float) -> float:
        return epsilon_from_flux(self.i_p, f, self.f_degeneracy)

    def gap(self, f: float) -> float:
        """√(ε² + Δ²) in rad/s."""
        return float(np.hypot(self.epsilon_at(f), self.delta))


def two_level_reduction(
    spectrum: Union[Spectrum, EigenSolution],
    current_elements: np.ndarray,
    f: float = 0.5,
    f_degeneracy: float = 0.5,
) -> TwoLevelParameters:
    """Reduce a spectrum taken at the degeneracy point to (ε, Δ, I_p)."""
    if len(spectrum.energies) < 2:
        raise ValidationError("Two-level reduction needs at least two levels")
    delta = ghz_to_rad_s(float(spectrum.energies[1] - spectrum.energies[0]))
    i_p = float(abs(np.asarray(current_elements)[0, 1]))
    return TwoLevelParameters(
        epsilon=epsilon_from_flux(i_p, f, f_degeneracy),
        delta=delta,
        i_p=i_p,
        f=f,
        f_degeneracy=f_degeneracy,
    )


@dataclass(frozen=True)
class DegeneracyPoint:
    """Location and two-level parameters of a qubit's minimum gap."""
    f: float
    delta_ghz: float
    i_p: float
    spectrum: Spectrum
    evaluations: int

    def two_level(self) -> TwoLevelParameters:
        return two_level_reduction(self.spectrum, self.spectrum.current_elements, self.f, self.f)


def find_degeneracy(
    params: DeviceParams,
    which: Union[QubitLabel, str],
    bracket: Optional[Tuple[float, float]] = None,
    l_override: Optional[float] = None,
    levels: Optional[int] = None,
    settings: Optional[SolverConfig] = None,
) -> DegeneracyPoint:
    """Minimize the 0–1 gap over flux inside `bracket` (bounded Brent search)."""
    settings = solver_settings(settings)
    if bracket is None:
        half = settings.degeneracy_half_width
        bracket = (0.5 - half, 0.5 + half)
    low, high = bracket
    if not high > low:
        raise ValidationError(f"Degeneracy bracket must be increasing, got {bracket}")

    def gap(f: float) -> float:
        build = build_flux_qubit(params, which, f, l_override=l_override, levels=levels, settings=settings)
        return build.solve(2, settings.residual_factor).gap()

    try:
        result = minimize_scalar(
            gap, bounds=(low, high), method="bounded",
            options={"xatol": settings.degeneracy_xtol, "maxiter": 200},
        )
    except (ValueError, RuntimeError) as e:
        raise NumericError(f"Degeneracy search failed for qubit {which}: {e}") from e
    if not result.success:
        raise NumericError(
            f"Degeneracy search did not converge for qubit {which}",
            details={"bracket": bracket, "message": str(result.message), "nfev": result.nfev},
        )

    edge = 10.0 * settings.degeneracy_xtol
    if result.x - low < edge or high - result.x < edge:
        raise RangeError(
            f"Gap minimum of qubit {which} is not bracketed by [{low}, {high}] (found at {result.x:.7f})",
            details={"bracket": bracket, "f": float(result.x)},
        )

    build = build_flux_qubit(params, which, result.x, l_override=l_override, levels=levels, settings=settings)
    spectrum = build.spectrum(4, settings.residual_factor)
    point = DegeneracyPoint(
        f=float(result.x),
        delta_ghz=float(spectrum.energies[1] - spectrum.energies[0]),
        i_p=float(abs(spectrum.current_elements[0, 1])),
        spectrum=spectrum,
        evaluations=int(result.nfev),
    )
    logger.debug(
        f"Qubit {QubitLabel(which).value} degeneracy f={point.f:.7f} "
        f"Δ={point.delta_ghz:.6f} GHz I_p={point.i_p:.3f} nA ({point.evaluations} evaluations)"
    )
    return point


@dataclass
class QubitSpectrum:
    """Transition frequencies of one bare qubit versus its own flux."""
    which: QubitLabel
    flux_grid: np.ndarray
    transitions: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {"f_q": float(f), "level": level + 1, "freq_GHz": float(freq)}
            for f, row in zip(self.flux_grid, self.transitions)
            for level, freq in enumerate(row)
        ]
        return pd.DataFrame(rows, columns=["f_q", "level", "freq_GHz"])


def qubit_spectrum(
    params: DeviceParams,
    which: Union[QubitLabel, str],
    grid: Sequence[float],
    levels: int = 4,
    l_override: Optional[float] = None,
    settings: Optional[SolverConfig] = None,
    threads: int = 1,
) -> QubitSpectrum:
    """Lowest `levels − 1` transitions of the bare qubit over its own flux."""
    from .sweep_runner import run_sweep

    settings = solver_settings(settings)
    if levels < 2:
        raise ValidationError("Qubit spectrum needs at least two levels")

    def evaluate(f: float) -> np.ndarray:
        build = build_flux_qubit(params, which, f, l_override=l_override, settings=settings, retained=levels)
        energies = build.solve(levels, settings.residual_factor).energies
        return energies[1:] - energies[0]

    grid = np.asarray(grid, dtype=float)
    rows = run_sweep(evaluate, list(grid), threads=threads, label=f"f_{QubitLabel(which).value}")
    return QubitSpectrum(which=QubitLabel(which), flux_grid=grid, transitions=np.vstack(rows))
