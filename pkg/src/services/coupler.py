"""
FluxCoupler Coupler Response

Ground-state response of the rf-SQUID coupler versus its flux bias: energy,
circulating current by energy slope and by operator expectation, and the
quantum inductance 1/L_eff = ∂⟨I_C⟩/∂Φ_C. The coupler is assumed to stay in
its ground state; excited levels are only used by the composite model.
"""

import logging
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import brentq

from ..config import SolverConfig
from ..constants import INV_PH_PER_NA_PER_FLUX, NA_PER_GHZ_PER_FLUX
from ..exceptions import NumericError, ValidationError
from ..models import DeviceParams
from .circuits import build_coupler, solver_settings
from .sweep_runner import run_sweep

logger = logging.getLogger(__name__)

COUPLER_RESPONSE_COLUMNS = ["f_C", "E0_GHz", "Icirc_slope_nA", "Icirc_op_nA", "invLeff_per_pH", "region"]


class CouplingRegion(str, Enum):
    """Sign of the coupler susceptibility and hence of J."""
    AF = "AF"
    FM = "FM"
    ZERO = "zero-crossing"


@dataclass(frozen=True)
class CurrentEstimate:
    """⟨I_C⟩ in nA by energy slope and by operator expectation."""
    slope: float
    operator: float

    @property
    def discrepancy(self) -> float:
        return abs(self.slope - self.operator)


class CouplerModel:
    """Memoized coupler ground-state evaluations for one parameter set."""

    def __init__(self, params: DeviceParams, settings: Optional[SolverConfig] = None):
        self.params = params
        self.settings = solver_settings(settings)
        self._energies: Dict[float, float] = {}
        self._lock = threading.Lock()

    def ground_energy(self, f_C: float) -> float:
        """E₀(f_C) in GHz."""
        key = float(f_C)
        with self._lock:
            if key in self._energies:
                return self._energies[key]
        build = build_coupler(self.params, key, settings=self.settings)
        energy = float(build.solve(1, self.settings.residual_factor).energies[0])
        with self._lock:
            self._energies[key] = energy
        return energy

    def operator_current(self, f_C: float) -> float:
        """⟨g|Î^C|g⟩ in nA."""
        build = build_coupler(self.params, f_C, settings=self.settings)
        return build.spectrum(1, self.settings.residual_factor).mean_current(0)

    def energy_slope(self, f_C: float) -> float:
        """∂E₀/∂f in GHz per Φ₀, centered difference with one Richardson step."""
        h = self.settings.fd_step_first

        def centered(step: float) -> float:
            return (self.ground_energy(f_C + step) - self.ground_energy(f_C - step)) / (2.0 * step)

        return (4.0 * centered(h / 2.0) - centered(h)) / 3.0

    def energy_curvature(self, f_C: float) -> float:
        """∂²E₀/∂f² in GHz per Φ₀², second difference with one Richardson step."""
        h = self.settings.fd_step_second
        center = self.ground_energy(f_C)

        def second(step: float) -> float:
            return (self.ground_energy(f_C + step) - 2.0 * center + self.ground_energy(f_C - step)) / step ** 2

        return (4.0 * second(h / 2.0) - second(h)) / 3.0

    def circulating_current(self, f_C: float) -> CurrentEstimate:
        return CurrentEstimate(
            slope=NA_PER_GHZ_PER_FLUX * self.energy_slope(f_C),
            operator=self.operator_current(f_C),
        )

    def inverse_inductance(self, f_C: float) -> float:
        """1/L_eff in 1/pH."""
        return INV_PH_PER_NA_PER_FLUX * NA_PER_GHZ_PER_FLUX * self.energy_curvature(f_C)


def circulating_current(params: DeviceParams, f_C: float, settings: Optional[SolverConfig] = None) -> CurrentEstimate:
    """⟨I_C⟩ at f_C by the slope and operator methods."""
    return CouplerModel(params, settings).circulating_current(f_C)


def effective_inductance(params: DeviceParams, f_C: float, settings: Optional[SolverConfig] = None) -> float:
    """1/L_eff at f_C in 1/pH; negative values are allowed."""
    return CouplerModel(params, settings).inverse_inductance(f_C)


@dataclass
class CouplerResponse:
    """Sampled coupler response curves on a flux grid."""
    flux_grid: np.ndarray
    E0: np.ndarray
    I_slope: np.ndarray
    I_operator: np.ndarray
    inv_L_eff: np.ndarray
    region: List[str]
    crossings: List[float] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def max_current(self) -> float:
        return float(np.max(np.abs(self.I_slope)))

    @property
    def method_discrepancy(self) -> float:
        """Largest slope/operator disagreement relative to the peak current."""
        peak = self.max_current
        if peak == 0:
            return 0.0
        return float(np.max(np.abs(self.I_slope - self.I_operator)) / peak)

    def inductance_range(self) -> Tuple[float, float]:
        """L_eff in pH at the AF and FM extremes of 1/L_eff.

        Near a zero crossing L_eff diverges, so the endpoints come from the
        largest and the most negative 1/L_eff, not from the raw L_eff samples.
        """
        positive = self.inv_L_eff[self.inv_L_eff > 0]
        negative = self.inv_L_eff[self.inv_L_eff < 0]
        antiferro = float(1.0 / positive.max()) if positive.size else float("inf")
        ferro = float(1.0 / negative.min()) if negative.size else float("-inf")
        return antiferro, ferro

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "f_C": self.flux_grid,
            "E0_GHz": self.E0,
            "Icirc_slope_nA": self.I_slope,
            "Icirc_op_nA": self.I_operator,
            "invLeff_per_pH": self.inv_L_eff,
            "region": self.region,
        }, columns=COUPLER_RESPONSE_COLUMNS)


def _locate_crossings(model: CouplerModel, grid: np.ndarray, inv_l: np.ndarray) -> List[float]:
    crossings = []
    for left, right, value_left, value_right in zip(grid[:-1], grid[1:], inv_l[:-1], inv_l[1:]):
        if value_left == 0.0:
            crossings.append(float(left))
        elif value_left * value_right < 0:
            try:
                root = brentq(model.inverse_inductance, left, right, xtol=1e-4)
            except ValueError as e:
                raise NumericError(f"Zero-crossing bisection failed in [{left}, {right}]: {e}") from e
            crossings.append(float(root))
    if inv_l.size and inv_l[-1] == 0.0:
        crossings.append(float(grid[-1]))
    return crossings


def coupling_region_map(
    params: DeviceParams,
    grid: Sequence[float],
    settings: Optional[SolverConfig] = None,
    threads: int = 1,
) -> CouplerResponse:
    """Evaluate the coupler response on `grid` and label AF/FM/zero regions."""
    model = CouplerModel(params, settings)
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValidationError("Coupler grid needs at least two points")

    def evaluate(f_C: float) -> Tuple[float, float, float, float]:
        current = model.circulating_current(f_C)
        return model.ground_energy(f_C), current.slope, current.operator, model.inverse_inductance(f_C)

    logger.info(f"Evaluating coupler response on {grid.size} points in [{grid[0]}, {grid[-1]}]")
    rows = np.array(run_sweep(evaluate, list(grid), threads=threads, label="f_C"))
    energies, slope, operator, inv_l = rows.T

    warnings: List[str] = []
    if grid[-1] - grid[0] < 1.0:
        warnings.append("grid covers less than one flux period")
    crossings = _locate_crossings(model, grid, inv_l)
    if not crossings:
        warnings.append("grid too coarse to bracket a sign change of 1/L_eff")

    region = []
    for f_C, value in zip(grid, inv_l):
        if value == 0.0 or any(abs(f_C - c) < 1e-4 for c in crossings):
            region.append(CouplingRegion.ZERO.value)
        elif value > 0:
            region.append(CouplingRegion.AF.value)
        else:
            region.append(CouplingRegion.FM.value)

    for message in warnings:
        logger.warning(f"Coupler region map: {message}")

    response = CouplerResponse(
        flux_grid=grid,
        E0=energies,
        I_slope=slope,
        I_operator=operator,
        inv_L_eff=inv_l,
        region=region,
        crossings=crossings,
        warnings=warnings,
    )
    logger.info(
        f"Coupler response: max |I| = {response.max_current:.1f} nA, "
        f"method discrepancy {100 * response.method_discrepancy:.3f}%, crossings {crossings}"
    )
    return response
