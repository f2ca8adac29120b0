"""
FluxCoupler Commands

One function per command-line verb. Each takes the resolved run config and a
CommandContext and returns the files it wrote.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from .. import __version__
from ..config import Config
from ..constants import ghz_to_rad_s
from ..exceptions import InconsistentDataError
from ..models import DeviceParams, FluxPoint, QubitLabel, RunConfig, load_device
from ..services.circuits import qubit_spectrum
from ..services.coupled import coupling_from_splitting, verify_composite_truncation
from ..services.coupler import coupling_region_map
from ..services.noise import (
    ChannelInputs,
    RAMSEY,
    ECHO,
    amplitude_constraints,
    coherence_vs_coupler,
    coupler_matrix_elements,
    eta_table,
)
from ..services.semiclassical import coupling_vs_coupler, delta_vs_coupler, on_off_ratio
from .writers import read_table, render_svg, write_csv, write_json

logger = logging.getLogger(__name__)


@dataclass
class CommandContext:
    """Per-invocation settings shared by every command."""
    config: Config
    out_dir: Path
    threads: int
    svg: bool
    digest: str
    data: Optional[Path] = None

    def metadata(self, command: str) -> Dict[str, str]:
        return {"tool": f"fluxcoupler {__version__}", "command": command, "config_hash": self.digest}


def load_params(run: RunConfig, context: CommandContext) -> DeviceParams:
    return load_device(context.config.storage.resolve_device(run.device))


def _emit(frame: pd.DataFrame, name: str, command: str, run: RunConfig, context: CommandContext,
          plot: Optional[Callable[[Path], Path]] = None) -> List[Path]:
    path = write_csv(frame, context.out_dir / f"{name}.csv", context.metadata(command),
                     run.output.significant_digits)
    written = [path]
    if context.svg and plot is not None:
        written.append(plot(context.out_dir / f"{name}.svg"))
    return written


def cmd_coupler_response(run: RunConfig, context: CommandContext) -> List[Path]:
    """Coupler ground-state response and AF/FM regions."""
    params = load_params(run, context)
    response = coupling_region_map(params, run.sweep.coupler_flux.values(),
                                   context.config.solver, context.threads)
    frame = response.to_frame()
    antiferro, ferro = response.inductance_range()
    logger.info(
        f"Coupler: max |I| = {response.max_current:.2f} nA, L_eff AF {antiferro:.2f} pH, FM {ferro:.2f} pH"
    )
    return _emit(frame, "coupler_response", "coupler-response", run, context,
                 lambda p: render_svg(frame, "f_C", ["Icirc_slope_nA", "Icirc_op_nA"], p,
                                      title="Coupler circulating current", ylabel="nA"))


def cmd_coupling_sweep(run: RunConfig, context: CommandContext) -> List[Path]:
    """J(f_C) from the semi-classical formula and from composite avoided crossings."""
    params = load_params(run, context)
    settings = context.config.solver
    grid = run.sweep.coupling_flux.values()

    curve = delta_vs_coupler(params, grid, settings=settings, threads=context.threads)
    semiclassical = coupling_vs_coupler(params, grid, settings, context.threads, delta_curve=curve)
    verify_composite_truncation(params, FluxPoint(f_A=0.5, f_B=0.5, f_C=float(grid[0])), settings=settings)
    crossings = coupling_from_splitting(
        params, curve, run.sweep.f_B_offset, run.sweep.crossing_half_width, settings, context.threads,
    )

    frame = pd.DataFrame({
        "f_C": grid,
        "J_semiclassical_MHz": semiclassical.J_over_2pi_mhz,
        "J_splitting_MHz": [c.J_over_2pi_mhz for c in crossings],
        "splitting_MHz": [c.splitting_mhz for c in crossings],
        "projection": [c.projection for c in crossings],
        "resolved": [c.splitting.resolved for c in crossings],
        "M_eff_pH": [r.M_eff for r in semiclassical.results],
    })
    spectra = pd.concat(
        [c.spectrum.to_frame().assign(f_C=c.f_C) for c in crossings if c.spectrum is not None],
        ignore_index=True,
    )
    spectra = spectra[["f_C", "swept_flux", "branch_index", "freq_GHz", "tag"]]

    magnitudes = np.abs(semiclassical.J_over_2pi_mhz)
    logger.info(f"Semi-classical on/off ratio over the grid: {on_off_ratio(magnitudes.max(), magnitudes.min()):.4g}")

    written = _emit(frame, "coupling_sweep", "coupling-sweep", run, context,
                    lambda p: render_svg(frame, "f_C", ["J_semiclassical_MHz", "J_splitting_MHz"], p,
                                         title="Coupling strength", ylabel="J/2π (MHz)"))
    written += _emit(semiclassical.to_frame(), "coupling_semiclassical", "coupling-sweep", run, context)
    written += _emit(spectra, "crossing_spectra", "coupling-sweep", run, context)
    return written


def cmd_coherence(run: RunConfig, context: CommandContext) -> List[Path]:
    """Δ, κ, T1 and T2 of qubit B versus coupler bias."""
    params = load_params(run, context)
    settings = context.config.solver
    grid = run.sweep.coherence_flux.values()
    noise = run.noise

    curve = delta_vs_coupler(params, grid, settings=settings, threads=context.threads)
    report = coherence_vs_coupler(
        params, noise.model(), grid,
        gamma_other={RAMSEY: noise.background_rate(RAMSEY), ECHO: noise.background_rate(ECHO)},
        t1_background=noise.t1_background,
        settings=settings,
        threads=context.threads,
        delta_curve=curve,
        qubit_loop_model=noise.qubit_loop_model(),
        f_A_park=run.sweep.f_A_park,
    )
    frame = report.to_frame()
    written = _emit(frame, "coherence", "coherence", run, context,
                    lambda p: render_svg(frame, "f_C", ["T2_ramsey_s", "T2_echo_s", "T1_total_s"], p,
                                         title="Qubit B coherence", ylabel="s"))
    written += _emit(curve.to_frame(), "delta_vs_coupler", "coherence", run, context)
    if run.sweep.envelope_points:
        envelopes = report.envelopes(run.sweep.envelope_points, run.sweep.envelope_times.values())
        written += _emit(envelopes, "decay_envelopes", "coherence", run, context,
                         lambda p: render_svg(envelopes, "tau_s", ["ramsey", "echo"], p,
                                              title="Decay envelopes", group="f_C"))
    return written


def _load_rates(path: Optional[Path]) -> pd.DataFrame:
    if path is None:
        raise InconsistentDataError("noise-fit needs a measured rate table (--data or the config's `data`)")
    path = Path(path)
    if not path.exists():
        raise InconsistentDataError(f"Rate table does not exist: {path}")
    try:
        return read_table(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise InconsistentDataError(f"Rate table is malformed: {path}: {e}") from e


def cmd_noise_fit(run: RunConfig, context: CommandContext) -> List[Path]:
    """Per-channel A(γ) curves and their intersection bounds from measured rates."""
    rows = _load_rates(context.data or (Path(run.data) if run.data else None))
    if "f_C" not in rows.columns:
        raise InconsistentDataError("Rate table lacks the f_C column")
    params = load_params(run, context)
    settings = context.config.solver

    biases = np.array(sorted(set(float(f) for f in rows["f_C"])))
    curve = delta_vs_coupler(params, biases, qubits=(QubitLabel.A, QubitLabel.B),
                             settings=settings, threads=context.threads)
    elements, frequencies = coupler_matrix_elements(params, curve, run.sweep.f_A_park, settings, context.threads)
    by_bias = {
        float(f): ChannelInputs(kappa=float(k), matrix_element=float(e), omega01=ghz_to_rad_s(float(w)))
        for f, k, e, w in zip(biases, curve[QubitLabel.B].kappa, elements, frequencies)
    }

    model = run.noise.model()
    constraints = amplitude_constraints(rows, run.noise.gamma_grid.values(), lambda f: by_bias[float(f)],
                                        model.window)
    frame = constraints.to_frame()
    triangle = constraints.triangle()
    logger.info(f"Noise-fit bounds: {triangle}")

    columns = [c for c in frame.columns if c.startswith("A_")]
    written = _emit(frame, "noise_fit_curves", "noise-fit", run, context,
                    lambda p: render_svg(frame, "gamma", columns, p, title="Coupler flux-noise amplitude",
                                         ylabel="A (Φ₀/√Hz)"))
    written += _emit(constraints.summary_frame(), "noise_fit_intersections", "noise-fit", run, context)
    written.append(write_json(
        {**context.metadata("noise-fit"), "triangle": triangle},
        context.out_dir / "noise_fit_triangle.json",
    ))
    return written


def cmd_eta_table(run: RunConfig, context: CommandContext) -> List[Path]:
    """η₀, η₁ over the configured exponent grid."""
    frame = eta_table(run.noise.gamma_grid.values(), run.noise.model().window)
    return _emit(frame, "eta_table", "eta-table", run, context,
                 lambda p: render_svg(frame, "gamma", ["sqrt_eta0", "sqrt_eta1"], p,
                                      title="Sequence factors", ylabel="√η"))


def cmd_spectrum(run: RunConfig, context: CommandContext) -> List[Path]:
    """Bare qubit transitions versus its own flux."""
    params = load_params(run, context)
    settings = context.config.solver
    which = run.sweep.spectrum_qubit
    spectrum = qubit_spectrum(params, which, run.sweep.spectrum_flux.values(), run.sweep.spectrum_levels,
                              settings=settings, threads=context.threads)
    frame = spectrum.to_frame()
    return _emit(frame, "spectrum", "spectrum", run, context,
                 lambda p: render_svg(frame, "f_q", ["freq_GHz"], p, title=f"Qubit {which.value} spectrum",
                                      ylabel="GHz", group="level"))


COMMANDS: Dict[str, Callable[[RunConfig, CommandContext], List[Path]]] = {
    "coupler-response": cmd_coupler_response,
    "coupling-sweep": cmd_coupling_sweep,
    "coherence": cmd_coherence,
    "noise-fit": cmd_noise_fit,
    "eta-table": cmd_eta_table,
    "spectrum": cmd_spectrum,
}
