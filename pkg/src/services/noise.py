"""
FluxCoupler Flux-Noise Coherence Model

1/f^γ flux-noise spectral density, Ramsey and echo filter functions, the
sequence factors η_N, 1/e dephasing rates, golden-rule T1 through the coupler
current, coherence predictions versus coupler bias and the inverse problem of
bounding the noise amplitude from measured rates.

Rates are in 1/s, sensitivities κ in rad/s per Φ₀, amplitudes in Φ₀/√Hz.
"""

import logging
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.integrate import IntegrationWarning, quad
from scipy.optimize import brentq

from ..config import SolverConfig
from ..constants import HBAR, NANO, OMEGA_PIVOT, PHI0, PHI0_PER_PH_NA, TWO_PI, ghz_to_rad_s
from ..exceptions import (
    DomainError,
    InconsistentDataError,
    NumericError,
    UnboundedAmplitudeError,
    ValidationError,
)
from ..models import DeviceParams, FluxPoint, NoiseModel, QubitLabel
from .circuits import solver_settings
from .coupled import StateTag, build_composite, qubit_transition
from .semiclassical import DeltaCurve, delta_vs_coupler, renormalized_mutual
from .sweep_runner import run_sweep

logger = logging.getLogger(__name__)

RAMSEY = 0
ECHO = 1
CHANNELS = ("ramsey", "echo", "t1")
COHERENCE_COLUMNS = [
    "f_C", "Delta_B_GHz", "kappa_rad_per_s_per_phi0", "matrix_element_nA",
    "T1_coupler_s", "T1_total_s", "Gamma0_per_s", "Gamma1_per_s", "T2_ramsey_s", "T2_echo_s",
]

# above this z the filter functions are integrated through their cosine expansion
_SPLIT_Z = 8.0 * math.pi
_RELATIVE_ACCURACY = 1e-6


def psd(model: NoiseModel, omega: float) -> float:
    """S(ω) = A²(2π·1 Hz/ω)^γ in Φ₀²/Hz."""
    if not omega > 0:
        raise DomainError(f"Spectral density is defined for ω > 0, got {omega}")
    return model.A ** 2 * (OMEGA_PIVOT / omega) ** model.gamma


def _check_sequence(N: int) -> None:
    if N not in (RAMSEY, ECHO):
        raise ValidationError(f"Pulse sequence must be 0 (Ramsey) or 1 (echo), got {N}")


def filter_function(N: int, z):
    """g₀ = sinc²(z/2), g₁ = sinc²(z/4)·sin²(z/4) with sinc(x) = sin(x)/x."""
    _check_sequence(N)
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise DomainError("Filter functions take z ≥ 0")
    if N == RAMSEY:
        value = np.sinc(z / TWO_PI) ** 2
    else:
        value = np.sinc(z / (2.0 * TWO_PI)) ** 2 * np.sin(z / 4.0) ** 2
    return float(value) if value.ndim == 0 else value


# g_N(z)·z² = c₀ + Σ c_k cos(ω_k z)
_COSINE_EXPANSIONS = {
    RAMSEY: (2.0, [(-2.0, 1.0)]),
    ECHO: (6.0, [(-8.0, 0.5), (2.0, 1.0)]),
}


def _integrate(fn: Callable, low: float, high: float, epsabs: float = 0.0, **kwargs) -> Tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            return quad(fn, low, high, epsabs=epsabs, epsrel=1e-9, limit=500, **kwargs)
        except IntegrationWarning as e:
            raise NumericError(
                f"Quadrature did not converge on [{low}, {high}]: {e}",
                details={"low": low, "high": high},
            ) from e


def _tail(N: int, gamma: float) -> Tuple[float, float]:
    """∫_{Z1}^∞ z^{-γ} g_N(z) dz from the cosine expansion."""
    constant, terms = _COSINE_EXPANSIONS[N]
    power = gamma + 2.0
    value = constant * _SPLIT_Z ** (1.0 - power) / (power - 1.0)
    error = 0.0
    for coefficient, frequency in terms:
        # the Fourier-integral routine honours only an absolute tolerance
        part, part_error = _integrate(lambda z: z ** -power, _SPLIT_Z, np.inf, epsabs=1e-14,
                                      weight="cos", wvar=frequency)
        value += coefficient * part
        error += abs(coefficient) * part_error
    return value, error


@lru_cache(maxsize=512)
def _eta(N: int, gamma: float, window: float) -> float:
    if N == RAMSEY:
        # logarithmic variable spreads the 1/z^γ weight evenly over decades
        head, head_error = _integrate(
            lambda s: math.exp(s * (1.0 - gamma)) * filter_function(RAMSEY, math.exp(s)),
            math.log(window), math.log(_SPLIT_Z),
        )
    else:
        head, head_error = _integrate(
            lambda z: z ** -gamma * filter_function(ECHO, z) if z > 0 else 0.0, 0.0, _SPLIT_Z,
        )
    tail, tail_error = _tail(N, gamma)
    total = head + tail
    error = head_error + tail_error
    if error > _RELATIVE_ACCURACY * abs(total):
        raise NumericError(
            f"η_{N} quadrature error {error:.3e} exceeds the relative accuracy target",
            details={"N": N, "gamma": gamma, "window": window, "value": total, "error": error},
        )
    return TWO_PI ** (gamma - 1.0) * total


def eta(N: int, gamma: float, window: Optional[float] = None) -> float:
    """Sequence factor η_N for exponent γ; `window` is ω_low·t (Ramsey only)."""
    _check_sequence(N)
    if not 0.0 < gamma < 2.0:
        raise DomainError(f"Noise exponent must lie in (0, 2), got {gamma}")
    if N == RAMSEY:
        if window is None or not 0.0 < window < 1.0:
            raise DomainError(f"Ramsey η needs 0 < ω_low·t < 1, got {window}")
        return _eta(RAMSEY, float(gamma), float(window))
    return _eta(ECHO, float(gamma), 0.0)


def eta_for(model: NoiseModel, N: int) -> float:
    return eta(N, model.gamma, model.window)


def eta_table(gamma_grid: Sequence[float], window: float) -> pd.DataFrame:
    """η₀, η₁ and their square roots over a grid of exponents."""
    rows = []
    for gamma in gamma_grid:
        eta0, eta1 = eta(RAMSEY, gamma, window), eta(ECHO, gamma)
        rows.append({
            "gamma": float(gamma),
            "eta0": eta0,
            "eta1": eta1,
            "sqrt_eta0": math.sqrt(eta0),
            "sqrt_eta1": math.sqrt(eta1),
        })
    return pd.DataFrame(rows, columns=["gamma", "eta0", "eta1", "sqrt_eta0", "sqrt_eta1"])


def dephasing_rate(kappa: float, model: NoiseModel, N: int, eta_value: Optional[float] = None) -> float:
    """1/e dephasing rate Γ = [|κ| A √η_N]^{2/(1+γ)}."""
    if not math.isfinite(kappa):
        raise ValidationError("Sensitivity must be finite")
    eta_value = eta_for(model, N) if eta_value is None else eta_value
    return (abs(kappa) * model.A * math.sqrt(eta_value)) ** (2.0 / (1.0 + model.gamma))


def combine_dephasing(rates: Sequence[float], gamma: float) -> float:
    """Independent Gaussian channels add in (Γτ)^{1+γ}."""
    power = 1.0 + gamma
    return sum(r ** power for r in rates) ** (1.0 / power)


def decay_envelope(Gamma_other: float, Gamma_phiC: float, gamma: float, tau):
    """exp[−Γ_other τ − (Γ_ΦC τ)^{1+γ}]."""
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise DomainError("Delay must be non-negative")
    value = np.exp(-Gamma_other * tau - (Gamma_phiC * tau) ** (1.0 + gamma))
    return float(value) if value.ndim == 0 else value


def total_rate(Gamma_other: float, Gamma_phi: float, gamma: float) -> float:
    """1/e rate of the combined envelope: Γ_o/Γ + (Γ_φ/Γ)^{1+γ} = 1."""
    if Gamma_other < 0 or Gamma_phi < 0:
        raise ValidationError("Rates must be non-negative")
    if Gamma_phi == 0:
        return Gamma_other
    if Gamma_other == 0:
        return Gamma_phi
    low, high = max(Gamma_other, Gamma_phi), Gamma_other + Gamma_phi

    def residual(rate: float) -> float:
        return Gamma_other / rate + (Gamma_phi / rate) ** (1.0 + gamma) - 1.0

    try:
        return brentq(residual, low, high, xtol=1e-14 * high, rtol=1e-14)
    except ValueError as e:
        raise NumericError(f"Total dephasing rate not bracketed in [{low}, {high}]: {e}") from e


@dataclass(frozen=True)
class T1Estimate:
    """Golden-rule T1 through the coupler current, with the background."""
    t1_coupler: float
    t1_background: float

    @property
    def t1_total(self) -> float:
        return 1.0 / (1.0 / self.t1_coupler + 1.0 / self.t1_background)


def t1_coupler_limit(matrix_element: float, model: NoiseModel, omega01: float,
                     t1_background: float = 3.5e-6) -> T1Estimate:
    """1/T1_C = 2|⟨e|Î_C|g⟩|² S_ΦC(ω₀₁)/ħ², matrix element in nA, ω₀₁ in rad/s."""
    if not omega01 > 0:
        raise DomainError(f"Transition frequency must be positive, got {omega01}")
    if not t1_background > 0:
        raise ValidationError("Background T1 must be positive")
    rate = 2.0 * (abs(matrix_element) * NANO) ** 2 * psd(model, omega01) * PHI0 ** 2 / HBAR ** 2
    t1_coupler = float("inf") if rate == 0 else 1.0 / rate
    return T1Estimate(t1_coupler=t1_coupler, t1_background=t1_background)


def qubit_loop_sensitivity(i_p: float, delta: float, detuning: float) -> float:
    """∂ω₀₁/∂Φ_q in rad/s per Φ₀ at flux `detuning` from degeneracy; Δ in rad/s."""
    slope = 2.0 * i_p * NANO * PHI0 / HBAR
    eps = slope * detuning
    return slope * eps / math.hypot(eps, delta)


# --- forward prediction versus coupler bias ---------------------------------

@dataclass
class CoherenceReport:
    """Predicted T1, Γ_N and T2 of qubit B on a coupler-bias grid."""
    flux_grid: np.ndarray
    delta_ghz: np.ndarray
    kappa: np.ndarray
    matrix_element: np.ndarray
    t1_coupler: np.ndarray
    t1_background: float
    gamma_phi: Dict[int, np.ndarray]
    gamma_other: Dict[int, float]
    gamma: float
    Gamma: Dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        if not self.Gamma:
            self.Gamma = {
                N: np.array([total_rate(self.gamma_other[N], g, self.gamma) for g in self.gamma_phi[N]])
                for N in (RAMSEY, ECHO)
            }

    @property
    def t1_total(self) -> np.ndarray:
        return 1.0 / (1.0 / self.t1_coupler + 1.0 / self.t1_background)

    @property
    def t2_ramsey(self) -> np.ndarray:
        return 1.0 / self.Gamma[RAMSEY]

    @property
    def t2_echo(self) -> np.ndarray:
        return 1.0 / self.Gamma[ECHO]

    def envelopes(self, points: Sequence[float], times: Sequence[float]) -> pd.DataFrame:
        """Ramsey and echo decay envelopes at the grid points nearest `points`."""
        times = np.asarray(times, dtype=float)
        frames = []
        for f_C in points:
            index = int(np.argmin(np.abs(self.flux_grid - f_C)))
            frames.append(pd.DataFrame({
                "f_C": float(self.flux_grid[index]),
                "tau_s": times,
                "ramsey": decay_envelope(self.gamma_other[RAMSEY], self.gamma_phi[RAMSEY][index], self.gamma, times),
                "echo": decay_envelope(self.gamma_other[ECHO], self.gamma_phi[ECHO][index], self.gamma, times),
            }))
        if not frames:
            return pd.DataFrame(columns=["f_C", "tau_s", "ramsey", "echo"])
        return pd.concat(frames, ignore_index=True)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "f_C": self.flux_grid,
            "Delta_B_GHz": self.delta_ghz,
            "kappa_rad_per_s_per_phi0": self.kappa,
            "matrix_element_nA": self.matrix_element,
            "T1_coupler_s": self.t1_coupler,
            "T1_total_s": self.t1_total,
            "Gamma0_per_s": self.Gamma[RAMSEY],
            "Gamma1_per_s": self.Gamma[ECHO],
            "T2_ramsey_s": self.t2_ramsey,
            "T2_echo_s": self.t2_echo,
        }, columns=COHERENCE_COLUMNS)


def coupler_matrix_elements(
    params: DeviceParams,
    delta_curve: DeltaCurve,
    f_A_park: float = 0.02,
    settings: Optional[SolverConfig] = None,
    threads: int = 1,
    retained: Optional[Sequence[int]] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """|⟨e|Î_C|g⟩| (nA) and ω₀₁ (GHz) of qubit B held at its shifted degeneracy."""
    settings = solver_settings(settings)
    m_a = renormalized_mutual(params, QubitLabel.A)
    m_b = renormalized_mutual(params, QubitLabel.B)

    def evaluate(index: int) -> Tuple[float, float]:
        current = float(delta_curve.I_circ[index])
        flux = FluxPoint(
            f_A=0.5 - m_a * current * PHI0_PER_PH_NA + f_A_park,
            f_B=0.5 - m_b * current * PHI0_PER_PH_NA,
            f_C=float(delta_curve.flux_grid[index]),
        )
        system = build_composite(params, flux, retained, settings)
        level, frequency, solution = qubit_transition(system, StateTag.QUBIT_B, settings=settings)
        element = abs(np.vdot(solution.states[:, level], system.coupler_current @ solution.states[:, 0]))
        return float(element), frequency

    rows = np.array(run_sweep(evaluate, list(range(delta_curve.flux_grid.size)), threads=threads, label="f_C index"))
    return rows[:, 0], rows[:, 1]


def coherence_vs_coupler(
    params: DeviceParams,
    model: NoiseModel,
    grid: Sequence[float],
    gamma_other: Optional[Dict[int, float]] = None,
    t1_background: float = 3.5e-6,
    settings: Optional[SolverConfig] = None,
    threads: int = 1,
    delta_curve: Optional[DeltaCurve] = None,
    matrix_elements: Optional[Tuple[np.ndarray, np.ndarray]] = None,
    qubit_loop_model: Optional[NoiseModel] = None,
    qubit_detuning: float = 0.0,
    f_A_park: float = 0.02,
    retained: Optional[Sequence[int]] = None,
) -> CoherenceReport:
    """Forward coherence prediction for qubit B versus coupler bias.

    T2 reflects pure dephasing on top of the backgrounds Γ_N,other, which
    default to the T1-limited 1/(2 T1_background). The coupler-induced T1 is
    reported separately. `matrix_elements` may supply (|⟨e|Î_C|g⟩|, ω₀₁/GHz)
    per grid point instead of the composite computation.
    """
    settings = solver_settings(settings)
    grid = np.asarray(grid, dtype=float)
    curve = delta_curve or delta_vs_coupler(params, grid, settings=settings, threads=threads)
    if curve.flux_grid.shape != grid.shape or not np.allclose(curve.flux_grid, grid):
        raise ValidationError("Gap curve grid does not match the coherence grid")
    background = 1.0 / (2.0 * t1_background)
    gamma_other = gamma_other or {RAMSEY: background, ECHO: background}

    qubit = curve[QubitLabel.B]
    gamma_phi = {}
    for N in (RAMSEY, ECHO):
        eta_coupler = eta_for(model, N)
        rates = np.array([dephasing_rate(k, model, N, eta_coupler) for k in qubit.kappa])
        if qubit_loop_model is not None:
            eta_loop = eta_for(qubit_loop_model, N)
            loop = [
                dephasing_rate(qubit_loop_sensitivity(i_p, ghz_to_rad_s(d), qubit_detuning),
                               qubit_loop_model, N, eta_loop)
                for i_p, d in zip(qubit.i_p, qubit.delta_ghz)
            ]
            rates = np.array([combine_dephasing([c, q], model.gamma) for c, q in zip(rates, loop)])
        gamma_phi[N] = rates

    if matrix_elements is None:
        matrix_elements = coupler_matrix_elements(params, curve, f_A_park, settings, threads, retained)
    elements, frequencies = (np.asarray(v, dtype=float) for v in matrix_elements)
    t1_coupler = np.array([
        t1_coupler_limit(e, model, ghz_to_rad_s(w), t1_background).t1_coupler
        for e, w in zip(elements, frequencies)
    ])

    report = CoherenceReport(
        flux_grid=grid,
        delta_ghz=qubit.delta_ghz,
        kappa=qubit.kappa,
        matrix_element=elements,
        t1_coupler=t1_coupler,
        t1_background=t1_background,
        gamma_phi=gamma_phi,
        gamma_other=dict(gamma_other),
        gamma=model.gamma,
    )
    logger.info(
        f"Coherence over {grid.size} points: min T2 Ramsey {np.min(report.t2_ramsey) * 1e6:.3f} μs, "
        f"min T1 {np.min(report.t1_total) * 1e6:.3f} μs"
    )
    return report


# --- inverse problem ----------------------------------------------------------

def estimate_amplitude(Gamma_N: float, Gamma_N_other: float, kappa: float, gamma: float, N: int,
                       window: Optional[float] = None, row_index: Optional[int] = None) -> float:
    """Coupler noise amplitude A from a measured 1/e rate and its background."""
    if Gamma_N < Gamma_N_other:
        raise InconsistentDataError(
            f"Measured rate {Gamma_N:.6g} is below its background {Gamma_N_other:.6g}",
            row_index=row_index,
        )
    if kappa == 0:
        raise UnboundedAmplitudeError("Zero sensitivity leaves the amplitude unbounded",
                                      details={"row_index": row_index})
    gamma_phi = Gamma_N * (1.0 - Gamma_N_other / Gamma_N) ** (1.0 / (1.0 + gamma)) if Gamma_N > 0 else 0.0
    return gamma_phi ** ((1.0 + gamma) / 2.0) / (abs(kappa) * math.sqrt(eta(N, gamma, window)))


def estimate_amplitude_from_t1(T1_measured: float, T1_background: float, matrix_element: float,
                               omega01: float, gamma: float, row_index: Optional[int] = None) -> float:
    """A from a measured T1, inverting the golden-rule coupler channel."""
    if not omega01 > 0:
        raise DomainError("Transition frequency must be positive")
    rate = 1.0 / T1_measured - 1.0 / T1_background
    if rate < 0:
        raise InconsistentDataError(
            f"Measured T1 {T1_measured:.4g} s exceeds the background {T1_background:.4g} s",
            row_index=row_index,
        )
    if matrix_element == 0:
        raise UnboundedAmplitudeError("Zero coupler matrix element leaves the amplitude unbounded",
                                      details={"row_index": row_index})
    spectral = rate * HBAR ** 2 / (2.0 * (abs(matrix_element) * NANO) ** 2 * PHI0 ** 2)
    return math.sqrt(spectral * (omega01 / OMEGA_PIVOT) ** gamma)


@dataclass(frozen=True)
class ChannelInputs:
    """Model quantities needed to invert one measurement at a coupler bias."""
    kappa: float
    matrix_element: float
    omega01: float


@dataclass
class AmplitudeConstraints:
    """Per-channel A(γ) curves and their pairwise intersections."""
    gamma_grid: np.ndarray
    amplitudes: Dict[str, np.ndarray]
    intersections: List[Tuple[str, str, float, float]]

    def triangle(self) -> Dict[str, List[float]]:
        """[min, max] bounds on A and γ spanned by the intersections."""
        if not self.intersections:
            return {}
        gammas = [g for _, _, g, _ in self.intersections]
        values = [a for _, _, _, a in self.intersections]
        return {"A": [min(values), max(values)], "gamma": [min(gammas), max(gammas)]}

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({"gamma": self.gamma_grid})
        for channel in CHANNELS:
            if channel in self.amplitudes:
                frame[f"A_{channel}"] = self.amplitudes[channel]
        return frame

    def summary_frame(self) -> pd.DataFrame:
        rows = [
            {"channel_a": a, "channel_b": b, "gamma": g, "A": value}
            for a, b, g, value in self.intersections
        ]
        return pd.DataFrame(rows, columns=["channel_a", "channel_b", "gamma", "A"])


def _validate_rows(rows: pd.DataFrame) -> pd.DataFrame:
    missing = [c for c in ("channel", "value", "background", "f_C") if c not in rows.columns]
    if missing:
        raise InconsistentDataError(f"Data table lacks columns {missing}")
    rows = rows.reset_index(drop=True)
    for index, row in rows.iterrows():
        if row["channel"] not in CHANNELS:
            raise InconsistentDataError(f"Unknown channel {row['channel']!r}", row_index=int(index))
        values = (row["value"], row["background"], row["f_C"])
        if not all(isinstance(v, (int, float, np.number)) and math.isfinite(v) for v in values):
            raise InconsistentDataError("Row carries non-numeric values", row_index=int(index))
        if row["value"] <= 0 or row["background"] <= 0:
            raise InconsistentDataError("Rates must be positive", row_index=int(index))
        if row["value"] < row["background"]:
            raise InconsistentDataError(
                f"{row['channel']} rate {row['value']:.6g} is below its background {row['background']:.6g}",
                row_index=int(index),
            )
    return rows


def _crossings(gamma_grid: np.ndarray, difference: np.ndarray) -> List[int]:
    return [i for i in range(len(gamma_grid) - 1) if difference[i] == 0 or difference[i] * difference[i + 1] < 0]


def amplitude_constraints(
    rows: pd.DataFrame,
    gamma_grid: Sequence[float],
    inputs_at: Callable[[float], ChannelInputs],
    window: float,
) -> AmplitudeConstraints:
    """A(γ) per measurement channel, averaged over its rows.

    Rows carry `channel` (ramsey | echo | t1), `value` and `background` as rates
    in 1/s (1/T1 for t1 rows) and the coupler bias `f_C`.
    """
    rows = _validate_rows(rows)
    gamma_grid = np.asarray(gamma_grid, dtype=float)
    inputs = {f_C: inputs_at(f_C) for f_C in sorted(set(rows["f_C"]))}

    amplitudes: Dict[str, np.ndarray] = {}
    for channel in CHANNELS:
        subset = rows[rows["channel"] == channel]
        if subset.empty:
            continue
        curve = []
        for gamma in gamma_grid:
            estimates = []
            for index, row in subset.iterrows():
                model_inputs = inputs[row["f_C"]]
                if channel == "t1":
                    estimates.append(estimate_amplitude_from_t1(
                        1.0 / row["value"], 1.0 / row["background"], model_inputs.matrix_element,
                        model_inputs.omega01, gamma, row_index=int(index),
                    ))
                else:
                    N = RAMSEY if channel == "ramsey" else ECHO
                    estimates.append(estimate_amplitude(
                        row["value"], row["background"], model_inputs.kappa, gamma, N,
                        window=window, row_index=int(index),
                    ))
            curve.append(float(np.mean(estimates)))
        amplitudes[channel] = np.array(curve)

    intersections = []
    present = [c for c in CHANNELS if c in amplitudes]
    for i, first in enumerate(present):
        for second in present[i + 1:]:
            difference = amplitudes[first] - amplitudes[second]
            for k in _crossings(gamma_grid, difference):
                if difference[k] == 0:
                    g, a = gamma_grid[k], amplitudes[first][k]
                else:
                    weight = difference[k] / (difference[k] - difference[k + 1])
                    g = gamma_grid[k] + weight * (gamma_grid[k + 1] - gamma_grid[k])
                    a = amplitudes[first][k] + weight * (amplitudes[first][k + 1] - amplitudes[first][k])
                intersections.append((first, second, float(g), float(a)))
    if not intersections:
        logger.warning("Amplitude curves do not intersect on the exponent grid")
    return AmplitudeConstraints(gamma_grid=gamma_grid, amplitudes=amplitudes, intersections=intersections)


def synthetic_rates(
    model: NoiseModel,
    inputs: ChannelInputs,
    f_C: float,
    gamma_other: Dict[int, float],
    t1_background: float,
) -> pd.DataFrame:
    """Noise-free measurement rows generated by the forward model."""
    rows = []
    for channel, N in (("ramsey", RAMSEY), ("echo", ECHO)):
        rate = total_rate(gamma_other[N], dephasing_rate(inputs.kappa, model, N), model.gamma)
        rows.append({"channel": channel, "value": rate, "background": gamma_other[N], "f_C": f_C})
    t1 = t1_coupler_limit(inputs.matrix_element, model, inputs.omega01, t1_background)
    rows.append({"channel": "t1", "value": 1.0 / t1.t1_total, "background": 1.0 / t1_background, "f_C": f_C})
    return pd.DataFrame(rows, columns=["channel", "value", "background", "f_C"])
