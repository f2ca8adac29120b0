"""
FluxCoupler Composite Model

Two qubits and the coupler as one quantum system, written in the product of
their truncated bare eigenbases:

    Ĥ = Ĥ_A + Ĥ_B + Ĥ_C + M̃_A Î_A Î_C + M̃_B Î_B Î_C + (M̃_A Î_A + M̃_B Î_B)² / 2L_C

The last term is the diamagnetic part of the flux coupling; together with the
coupler's paramagnetic response it yields the static susceptibility 1/L_eff,
so the composite J vanishes where 1/L_eff does.

Spectroscopy sweeps tag every eigenstate by its dominant bare product state,
and avoided crossings are reduced to a splitting 2|J|.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..config import SolverConfig
from ..constants import GHZ, GHZ_PER_PH_NA2, H_PLANCK, NANO, PHI0, PHI0_PER_PH_NA, ghz_to_rad_s
from ..exceptions import ConvergenceError, IdentificationError, NotBracketedError, RangeError, ValidationError
from ..models import DeviceParams, FluxPoint, QubitLabel
from .circuits import CircuitHamiltonian, build_coupler, build_flux_qubit, solver_settings
from .operators import EigenSolution, HermitianOperator, eigendecompose, max_level_shift
from .semiclassical import DeltaCurve, renormalized_mutual, transverse_projection
from .sweep_runner import run_sweep

logger = logging.getLogger(__name__)

SUBSYSTEMS = ("A", "B", "C")
SPECTRUM_COLUMNS = ["swept_flux", "branch_index", "freq_GHz", "tag"]


class StateTag(str, Enum):
    """Bare character of a composite eigenstate."""
    GROUND = "ground"
    QUBIT_A = "qubit-A"
    QUBIT_B = "qubit-B"
    COUPLER = "coupler"
    HYBRIDIZED = "hybridized"
    OTHER = "other"


@dataclass(frozen=True)
class BareSubsystem:
    """Lowest eigenstates of one bare circuit, energies relative to its ground."""
    label: str
    energies: np.ndarray
    current: np.ndarray
    current_squared: np.ndarray

    @property
    def levels(self) -> int:
        return len(self.energies)

    def truncated(self, levels: int) -> "BareSubsystem":
        if levels > self.levels:
            raise ValidationError(f"Subsystem {self.label} holds {self.levels} levels, {levels} requested")
        return BareSubsystem(
            self.label,
            self.energies[:levels],
            self.current[:levels, :levels],
            self.current_squared[:levels, :levels],
        )


def bare_subsystem(build: CircuitHamiltonian, levels: int, label: str, residual_factor: float = 1e-9) -> BareSubsystem:
    """Project a circuit onto its lowest `levels` eigenstates.

    Î² is formed in the full basis before projection.
    """
    solution = build.solve(levels, residual_factor)
    projected = build.current_op.matrix @ solution.states
    return BareSubsystem(
        label=label,
        energies=solution.energies - solution.energies[0],
        current=solution.states.conj().T @ projected,
        current_squared=projected.conj().T @ projected,
    )


def _embed_three(op: np.ndarray, slot: int, dims: Sequence[int]) -> np.ndarray:
    factors = [np.eye(d) for d in dims]
    factors[slot] = op
    return np.kron(np.kron(factors[0], factors[1]), factors[2])


@dataclass(frozen=True)
class CompositeSystem:
    """Qubit A ⊗ qubit B ⊗ coupler in their bare eigenbases."""
    flux: FluxPoint
    subsystems: Tuple[BareSubsystem, BareSubsystem, BareSubsystem]
    m_tilde: Tuple[float, float]
    l_coupler: float
    hamiltonian: HermitianOperator
    coupler_current: np.ndarray

    @property
    def dims(self) -> Tuple[int, int, int]:
        return tuple(s.levels for s in self.subsystems)

    @property
    def dim(self) -> int:
        return self.hamiltonian.dim

    def solve(self, k: Optional[int] = None, residual_factor: float = 1e-9) -> EigenSolution:
        return eigendecompose(self.hamiltonian, k, residual_factor)

    def product_index(self, a: int, b: int, c: int) -> int:
        _, dim_b, dim_c = self.dims
        return (a * dim_b + b) * dim_c + c

    def bare_labels(self, index: int) -> Tuple[int, int, int]:
        _, dim_b, dim_c = self.dims
        return index // (dim_b * dim_c), (index // dim_c) % dim_b, index % dim_c


def assemble_composite(
    subsystems: Tuple[BareSubsystem, BareSubsystem, BareSubsystem],
    m_tilde: Tuple[float, float],
    l_coupler: float,
    flux: FluxPoint,
) -> CompositeSystem:
    """Composite Hamiltonian from already projected bare subsystems."""
    dims = [s.levels for s in subsystems]
    qubit_a, qubit_b, coupler = subsystems
    m_a, m_b = m_tilde

    hamiltonian = sum(_embed_three(np.diag(s.energies), slot, dims) for slot, s in enumerate(subsystems))
    i_a = _embed_three(qubit_a.current, 0, dims)
    i_b = _embed_three(qubit_b.current, 1, dims)
    i_c = _embed_three(coupler.current, 2, dims)
    i_a2 = _embed_three(qubit_a.current_squared, 0, dims)
    i_b2 = _embed_three(qubit_b.current_squared, 1, dims)

    paramagnetic = m_a * i_a @ i_c + m_b * i_b @ i_c
    diamagnetic = (m_a ** 2 * i_a2 + m_b ** 2 * i_b2 + 2.0 * m_a * m_b * i_a @ i_b) / (2.0 * l_coupler)
    hamiltonian = hamiltonian + GHZ_PER_PH_NA2 * (paramagnetic + diamagnetic)

    # cross products of commuting embeds are Hermitian up to round-off
    hamiltonian = 0.5 * (hamiltonian + hamiltonian.conj().T)
    return CompositeSystem(
        flux=flux,
        subsystems=tuple(subsystems),
        m_tilde=(m_a, m_b),
        l_coupler=l_coupler,
        hamiltonian=HermitianOperator(hamiltonian),
        coupler_current=i_c,
    )


def _lowest_transitions(system: CompositeSystem, count: int, residual_factor: float) -> np.ndarray:
    k = min(count + 1, system.dim)
    energies = system.solve(k, residual_factor).energies
    return energies[1:] - energies[0]


def check_composite_convergence(
    extended: Tuple[BareSubsystem, BareSubsystem, BareSubsystem],
    retained: Tuple[int, int, int],
    m_tilde: Tuple[float, float],
    l_coupler: float,
    flux: FluxPoint,
    settings: SolverConfig,
) -> Dict[str, float]:
    """Shift of the lowest three transitions when each retained count grows by 2."""
    reference = assemble_composite(
        tuple(s.truncated(n) for s, n in zip(extended, retained)), m_tilde, l_coupler, flux
    )
    baseline = _lowest_transitions(reference, 3, settings.residual_factor)
    shifts: Dict[str, float] = {}
    for slot, label in enumerate(SUBSYSTEMS):
        counts = list(retained)
        counts[slot] += 2
        refined = assemble_composite(
            tuple(s.truncated(n) for s, n in zip(extended, counts)), m_tilde, l_coupler, flux
        )
        shift = max_level_shift(baseline, _lowest_transitions(refined, 3, settings.residual_factor))
        shifts[label] = shift
        if shift >= settings.composite_tolerance_ghz:
            raise ConvergenceError(
                f"Composite spectrum not converged in subsystem {label} at {retained[slot]} retained levels "
                f"(shift {shift:.3e} GHz)",
                mode=label,
                levels=retained[slot],
                details={"flux": flux.model_dump(), "shift_ghz": shift},
            )
    return shifts


def _default_retained(settings: SolverConfig, retained: Optional[Sequence[int]]) -> Tuple[int, int, int]:
    if retained is None:
        return (settings.composite_levels,) * 3
    retained = tuple(int(n) for n in retained)
    if len(retained) != 3 or min(retained) < 2:
        raise ValidationError(f"Need three retained level counts of at least 2, got {retained}")
    return retained


def bare_subsystems(
    params: DeviceParams,
    flux: FluxPoint,
    levels: Tuple[int, int, int],
    settings: SolverConfig,
    labels: Sequence[str] = SUBSYSTEMS,
) -> Dict[str, BareSubsystem]:
    """Bare projections of the requested subsystems at `flux`."""
    builders = {
        "A": lambda n: build_flux_qubit(params, QubitLabel.A, flux.f_A, settings=settings, retained=n),
        "B": lambda n: build_flux_qubit(params, QubitLabel.B, flux.f_B, settings=settings, retained=n),
        "C": lambda n: build_coupler(params, flux.f_C, settings=settings),
    }
    return {
        label: bare_subsystem(builders[label](n), n, label, settings.residual_factor)
        for label, n in zip(SUBSYSTEMS, levels)
        if label in labels
    }


def build_composite(
    params: DeviceParams,
    flux: FluxPoint,
    retained: Optional[Sequence[int]] = None,
    settings: Optional[SolverConfig] = None,
    bare: Optional[Dict[str, BareSubsystem]] = None,
    check: Optional[bool] = None,
) -> CompositeSystem:
    """Composite system at `flux` with `retained` bare levels for (A, B, C).

    `bare` supplies precomputed subsystems keyed "A", "B", "C"; they must hold
    at least retained + 2 levels when the retained-level check runs. `check`
    defaults to the solver's `check_convergence` setting.
    """
    settings = solver_settings(settings)
    retained = _default_retained(settings, retained)
    check = settings.check_convergence if check is None else check
    needed = tuple(n + 2 for n in retained)

    bare = dict(bare or {})
    missing = [label for label in SUBSYSTEMS if label not in bare]
    if missing:
        bare.update(bare_subsystems(params, flux, needed, settings, labels=missing))

    extended = tuple(bare[label] for label in SUBSYSTEMS)
    m_tilde = (renormalized_mutual(params, QubitLabel.A), renormalized_mutual(params, QubitLabel.B))
    l_coupler = params.coupler.l_loop

    if check:
        check_composite_convergence(extended, retained, m_tilde, l_coupler, flux, settings)
    return assemble_composite(
        tuple(s.truncated(n) for s, n in zip(extended, retained)), m_tilde, l_coupler, flux
    )


def verify_composite_truncation(
    params: DeviceParams,
    flux: FluxPoint,
    retained: Optional[Sequence[int]] = None,
    settings: Optional[SolverConfig] = None,
) -> bool:
    """One-off retained-level check for a sweep; warns instead of raising."""
    try:
        build_composite(params, flux, retained, settings, check=True)
    except ConvergenceError as e:
        logger.warning(f"Composite truncation: {e}")
        return False
    logger.info(f"Composite truncation converged at {flux.model_dump()}")
    return True


# --- identification ----------------------------------------------------------

def _tag_for(labels: Tuple[int, int, int]) -> StateTag:
    excited = [slot for slot, n in enumerate(labels) if n > 0]
    if not excited:
        return StateTag.GROUND
    if len(excited) > 1:
        return StateTag.OTHER
    return (StateTag.QUBIT_A, StateTag.QUBIT_B, StateTag.COUPLER)[excited[0]]


def identify_states(system: CompositeSystem, states: np.ndarray, threshold: float = 0.5) -> List[StateTag]:
    """Tag each eigenvector by its largest bare product-state weight."""
    tags = []
    weights = np.abs(states) ** 2
    for column in range(states.shape[1]):
        index = int(np.argmax(weights[:, column]))
        if weights[index, column] <= threshold:
            tags.append(StateTag.HYBRIDIZED)
        else:
            tags.append(_tag_for(system.bare_labels(index)))
    return tags


def find_product_state(system: CompositeSystem, states: np.ndarray, labels: Tuple[int, int, int],
                       threshold: float = 0.5) -> int:
    """Eigenvector index with the largest weight on bare product state `labels`."""
    weights = np.abs(states[system.product_index(*labels), :]) ** 2
    index = int(np.argmax(weights))
    if weights[index] <= threshold:
        raise IdentificationError(
            f"No eigenstate resembles bare state {labels} (best overlap {weights[index]:.3f})",
            details={"flux": system.flux.model_dump(), "labels": labels, "overlap": float(weights[index])},
        )
    return index


def qubit_transition(
    system: CompositeSystem,
    tag: StateTag = StateTag.QUBIT_B,
    levels: int = 8,
    settings: Optional[SolverConfig] = None,
) -> Tuple[int, float, EigenSolution]:
    """Index and frequency (GHz) of the first excited state carrying `tag`."""
    settings = solver_settings(settings)
    solution = system.solve(min(levels, system.dim), settings.residual_factor)
    tags = identify_states(system, solution.states, settings.overlap_threshold)
    for index in range(1, solution.count):
        if tags[index] == tag:
            return index, solution.gap(index, 0), solution
    raise IdentificationError(
        f"No {tag.value} excitation among the lowest {solution.count} composite states",
        details={"flux": system.flux.model_dump(), "tags": [t.value for t in tags]},
    )


def t1_matrix_element(system: CompositeSystem, settings: Optional[SolverConfig] = None) -> float:
    """|⟨e|Î_C|g⟩| in nA, e the first qubit-B excitation."""
    index, _, solution = qubit_transition(system, StateTag.QUBIT_B, settings=settings)
    ground, excited = solution.states[:, 0], solution.states[:, index]
    return float(abs(np.vdot(excited, system.coupler_current @ ground)))


@dataclass(frozen=True)
class ConditionalShift:
    """Qubit-B transition with qubit A in its ground or excited state (GHz)."""
    omega_b_given_a0: float
    omega_b_given_a1: float

    @property
    def shift(self) -> float:
        """Half the conditional difference; ±2J in the longitudinal limit."""
        return 0.5 * (self.omega_b_given_a1 - self.omega_b_given_a0)


def conditional_frequency_shift(
    params: DeviceParams,
    flux: FluxPoint,
    retained: Optional[Sequence[int]] = None,
    settings: Optional[SolverConfig] = None,
) -> ConditionalShift:
    """Qubit B's frequency conditioned on qubit A's state, from the composite spectrum."""
    settings = solver_settings(settings)
    system = build_composite(params, flux, retained, settings)
    solution = system.solve(min(12, system.dim), settings.residual_factor)
    threshold = settings.overlap_threshold

    energy = {}
    for labels in [(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 0)]:
        energy[labels] = solution.energies[find_product_state(system, solution.states, labels, threshold)]
    result = ConditionalShift(
        omega_b_given_a0=float(energy[(0, 1, 0)] - energy[(0, 0, 0)]),
        omega_b_given_a1=float(energy[(1, 1, 0)] - energy[(1, 0, 0)]),
    )
    logger.info(f"Conditional shift at {flux.model_dump()}: {1e3 * result.shift:.3f} MHz")
    return result


# --- spectroscopy ------------------------------------------------------------

@dataclass
class TransitionSpectrum:
    """Composite transitions from the ground state along one swept flux."""
    axis: str
    flux_grid: np.ndarray
    frequencies: np.ndarray
    tags: List[List[str]]
    fixed: FluxPoint

    @property
    def branches(self) -> int:
        return self.frequencies.shape[1]

    def branch_distance(self, lower: int = 0, upper: int = 1) -> np.ndarray:
        return self.frequencies[:, upper] - self.frequencies[:, lower]

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {"swept_flux": float(f), "branch_index": branch, "freq_GHz": float(freq), "tag": tag}
            for f, row, row_tags in zip(self.flux_grid, self.frequencies, self.tags)
            for branch, (freq, tag) in enumerate(zip(row, row_tags))
        ]
        return pd.DataFrame(rows, columns=SPECTRUM_COLUMNS)


def spectroscopy_sweep(
    params: DeviceParams,
    axis: str,
    grid: Sequence[float],
    fixed: FluxPoint,
    branches: int = 3,
    retained: Optional[Sequence[int]] = None,
    settings: Optional[SolverConfig] = None,
    threads: int = 1,
) -> TransitionSpectrum:
    """Lowest `branches` composite transitions while `axis` (f_A, f_B or f_C) is swept."""
    settings = solver_settings(settings)
    if axis not in ("f_A", "f_B", "f_C"):
        raise ValidationError(f"Unknown sweep axis {axis}")
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValidationError("Spectroscopy grid must be a non-empty 1-D sequence")
    retained = _default_retained(settings, retained)
    extended = tuple(n + 2 for n in retained)

    # subsystems on the fixed axes are shared by every point
    swept_label = axis[-1]
    shared = bare_subsystems(params, fixed, extended, settings,
                             labels=[label for label in SUBSYSTEMS if label != swept_label])

    def evaluate(value: float) -> Tuple[np.ndarray, List[str]]:
        flux = fixed.model_copy(update={axis: float(value)})
        system = build_composite(params, flux, retained, settings, bare=shared)
        solution = system.solve(min(branches + 1, system.dim), settings.residual_factor)
        tags = identify_states(system, solution.states, settings.overlap_threshold)
        return solution.energies[1:] - solution.energies[0], [t.value for t in tags[1:]]

    logger.info(f"Spectroscopy over {axis} on {grid.size} points, fixed {fixed.model_dump()}")
    rows = run_sweep(evaluate, list(grid), threads=threads, label=axis)
    return TransitionSpectrum(
        axis=axis,
        flux_grid=grid,
        frequencies=np.vstack([r[0] for r in rows]),
        tags=[r[1] for r in rows],
        fixed=fixed,
    )


@dataclass(frozen=True)
class Splitting:
    """Minimum distance of two hybridizing branches."""
    splitting: float
    location: float
    floor: float

    @property
    def splitting_ghz(self) -> float:
        return self.splitting / ghz_to_rad_s(1.0)

    @property
    def resolved(self) -> bool:
        return self.splitting_ghz > self.floor

    @property
    def J(self) -> float:
        return 0.5 * self.splitting


def extract_splitting(
    spectrum: TransitionSpectrum,
    branches: Tuple[int, int] = (0, 1),
    floor_ghz: float = 1e-5,
) -> Splitting:
    """2|J| in rad/s and the resonance location on the swept axis.

    The squared branch distance is fitted by a parabola over the five points
    nearest the grid minimum; for a two-level crossing this is exact.
    """
    x = np.asarray(spectrum.flux_grid, dtype=float)
    distance = spectrum.branch_distance(*branches)
    if x.size < 3:
        raise NotBracketedError("Need at least three sweep points to bracket a crossing")
    centre = int(np.argmin(distance))
    if centre == 0 or centre == x.size - 1:
        raise NotBracketedError(
            f"Branch distance minimum lies on the sweep edge ({spectrum.axis}={x[centre]})",
            details={"axis": spectrum.axis, "location": float(x[centre])},
        )

    window = np.argsort(np.abs(np.arange(x.size) - centre), kind="stable")[:5]
    window.sort()
    a, b, c = np.polyfit(x[window], distance[window] ** 2, 2)
    if a > 0:
        location = -b / (2.0 * a)
        minimum = c - b * b / (4.0 * a)
    else:
        location, minimum = x[centre], distance[centre] ** 2
    if not x[window[0]] <= location <= x[window[-1]]:
        location, minimum = x[centre], distance[centre] ** 2

    result = Splitting(
        splitting=ghz_to_rad_s(math.sqrt(max(minimum, 0.0))),
        location=float(location),
        floor=floor_ghz,
    )
    if not result.resolved:
        logger.warning(
            f"Splitting at {spectrum.axis}={result.location:.6f} below resolution floor "
            f"({1e3 * result.splitting_ghz:.4f} MHz < {1e3 * floor_ghz:.4f} MHz)"
        )
    return result


# --- J from avoided crossings -----------------------------------------------

@dataclass(frozen=True)
class CrossingCoupling:
    """J at one coupler bias from the qubit–qubit avoided crossing."""
    f_C: float
    splitting: Splitting
    projection: float
    spectrum: Optional[TransitionSpectrum] = None

    @property
    def J_over_2pi_mhz(self) -> float:
        """Splitting/2 corrected for the transverse projection of σzσz."""
        return 1e3 * 0.5 * self.splitting.splitting_ghz / self.projection

    @property
    def splitting_mhz(self) -> float:
        return 1e3 * self.splitting.splitting_ghz


def _flux_for_bias(eps_ghz: float, i_p: float) -> float:
    """Qubit flux detuning (Φ₀) giving bias ε/h = eps_ghz."""
    return eps_ghz * GHZ * H_PLANCK / (2.0 * i_p * NANO * PHI0)


def resonance_window(
    params: DeviceParams,
    index: int,
    delta_curve: DeltaCurve,
    f_B_offset: float,
    half_width: float,
    resolution: float,
) -> Tuple[FluxPoint, np.ndarray, float]:
    """Fixed bias, f_A scan grid and σzσz projection around A–B resonance."""
    f_C = float(delta_curve.flux_grid[index])
    current = float(delta_curve.I_circ[index])
    curve_a, curve_b = delta_curve[QubitLabel.A], delta_curve[QubitLabel.B]
    delta_a, delta_b = float(curve_a.delta_ghz[index]), float(curve_b.delta_ghz[index])
    i_p_a, i_p_b = float(curve_a.i_p[index]), float(curve_b.i_p[index])

    offset_a = renormalized_mutual(params, QubitLabel.A) * current * PHI0_PER_PH_NA
    offset_b = renormalized_mutual(params, QubitLabel.B) * current * PHI0_PER_PH_NA
    eps_b = 2.0 * i_p_b * NANO * PHI0 * f_B_offset / H_PLANCK / GHZ
    omega_b = math.hypot(eps_b, delta_b)
    if omega_b <= delta_a:
        raise RangeError(
            f"Qubit A (Δ={delta_a:.4f} GHz) cannot reach qubit B at {omega_b:.4f} GHz for f_C={f_C}",
            details={"f_C": f_C, "delta_A": delta_a, "omega_B": omega_b},
        )
    detuning_a = _flux_for_bias(math.sqrt(omega_b ** 2 - delta_a ** 2), i_p_a)
    centre = 0.5 - offset_a + math.copysign(detuning_a, f_B_offset or 1.0)

    steps = int(round(half_width / resolution))
    grid = centre + resolution * np.arange(-steps, steps + 1)
    fixed = FluxPoint(f_A=centre, f_B=0.5 - offset_b + f_B_offset, f_C=f_C)
    return fixed, grid, transverse_projection(delta_a, delta_b, omega_b)


def coupling_from_splitting(
    params: DeviceParams,
    delta_curve: DeltaCurve,
    f_B_offset: float = 0.010,
    half_width: float = 0.004,
    settings: Optional[SolverConfig] = None,
    threads: int = 1,
    retained: Optional[Sequence[int]] = None,
) -> List[CrossingCoupling]:
    """J(f_C) from composite avoided crossings on the grid of `delta_curve`."""
    settings = solver_settings(settings)
    results = []
    for index, f_C in enumerate(delta_curve.flux_grid):
        fixed, grid, projection = resonance_window(
            params, index, delta_curve, f_B_offset, half_width, settings.resonance_resolution
        )
        spectrum = spectroscopy_sweep(params, "f_A", grid, fixed, branches=2, retained=retained,
                                      settings=settings, threads=threads)
        splitting = extract_splitting(spectrum, floor_ghz=settings.composite_tolerance_ghz)
        result = CrossingCoupling(f_C=float(f_C), splitting=splitting, projection=projection, spectrum=spectrum)
        logger.info(
            f"f_C={f_C:.4f}: splitting {result.splitting_mhz:.4f} MHz at f_A={splitting.location:.6f}, "
            f"J/2π={result.J_over_2pi_mhz:.4f} MHz"
        )
        results.append(result)
    return results
