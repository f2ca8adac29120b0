"""
FluxCoupler Run Configuration

JSON run documents with sections `device`, `noise`, `sweep` and `output`.
Every section has defaults, so `{}` is a valid run config using the bundled
semi-classical device parameters.
"""

import hashlib
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError as PydanticValidationError, field_validator, model_validator

from .device import QubitLabel
from .noise_model import NoiseModel
from ..exceptions import ConfigError

logger = logging.getLogger(__name__)


class RangeSpec(BaseModel):
    """Inclusive uniform grid [start, stop] with a positive step."""

    start: float
    stop: float
    step: float

    @field_validator("step")
    @classmethod
    def validate_step(cls, v):
        if not v > 0:
            raise ValueError("Grid step must be positive")
        return v

    @model_validator(mode="after")
    def validate_range(self):
        if not self.stop > self.start:
            raise ValueError("Range must be non-empty (stop > start)")
        return self

    def values(self) -> np.ndarray:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        # rounding keeps grid points byte-stable across platforms
        return np.round(self.start + self.step * np.arange(count), 12)


class NoiseSection(BaseModel):
    """Noise model plus coherence backgrounds."""

    A: float = 15e-6
    gamma: float = 0.91
    omega_low: float = 2 * math.pi * 3e-3
    t_evol: float = 200e-9
    t1_background: float = Field(default=3.5e-6, description="Coupler-independent T1 (s)")
    ramsey_background: Optional[float] = Field(default=None, description="Γ0,other (1/s)")
    echo_background: Optional[float] = Field(default=None, description="Γ1,other (1/s)")
    enable_qubit_loop_channel: bool = False
    qubit_loop_amplitude: float = 1.4e-6
    gamma_grid: RangeSpec = Field(default_factory=lambda: RangeSpec(start=0.8, stop=1.0, step=0.01))

    @field_validator("t1_background")
    @classmethod
    def validate_t1(cls, v):
        if v <= 0:
            raise ValueError("T1 background must be positive")
        return v

    @field_validator("ramsey_background", "echo_background")
    @classmethod
    def validate_background(cls, v):
        if v is not None and v <= 0:
            raise ValueError("Background rates must be positive")
        return v

    @model_validator(mode="after")
    def validate_background_order(self):
        if self.ramsey_background is not None and self.echo_background is not None:
            if self.echo_background > self.ramsey_background:
                raise ValueError("Echo background rate cannot exceed the Ramsey background rate")
        return self

    def background_rate(self, sequence: int) -> float:
        """Γ_N,other; defaults to the T1-limited rate 1/(2 T1_background)."""
        explicit = self.ramsey_background if sequence == 0 else self.echo_background
        return explicit if explicit is not None else 1.0 / (2.0 * self.t1_background)

    def model(self) -> NoiseModel:
        return NoiseModel(A=self.A, gamma=self.gamma, omega_low=self.omega_low, t_evol=self.t_evol)

    def qubit_loop_model(self) -> Optional[NoiseModel]:
        if not self.enable_qubit_loop_channel:
            return None
        return NoiseModel(A=self.qubit_loop_amplitude, gamma=self.gamma,
                          omega_low=self.omega_low, t_evol=self.t_evol)


class SweepConfig(BaseModel):
    """Command-specific sweep grids."""

    coupler_flux: RangeSpec = Field(default_factory=lambda: RangeSpec(start=-0.6, stop=0.6, step=2e-3))
    coupling_flux: RangeSpec = Field(default_factory=lambda: RangeSpec(start=0.40, stop=0.52, step=0.01))
    coherence_flux: RangeSpec = Field(default_factory=lambda: RangeSpec(start=0.44, stop=0.56, step=0.004))
    spectrum_flux: RangeSpec = Field(default_factory=lambda: RangeSpec(start=0.46, stop=0.54, step=0.002))
    spectrum_qubit: QubitLabel = QubitLabel.B
    spectrum_levels: int = Field(default=4, ge=2)
    f_B_offset: float = Field(default=0.010, description="Fixed detuning of qubit B from degeneracy (Φ₀)")
    crossing_half_width: float = Field(default=0.004, gt=0, description="f_A scan half-width around resonance (Φ₀)")
    f_A_park: float = Field(default=0.02, description="Detuning of qubit A from degeneracy while qubit B is characterised (Φ₀)")
    envelope_points: List[float] = Field(default_factory=list, description="f_C values for decay envelopes")
    envelope_times: RangeSpec = Field(default_factory=lambda: RangeSpec(start=0.0, stop=20e-6, step=0.2e-6))


class OutputConfig(BaseModel):
    """Output location and format flags."""

    directory: str = "./output"
    svg: bool = False
    significant_digits: int = Field(default=9, ge=3, le=17)


class RunConfig(BaseModel):
    """Complete run document."""

    device: str = Field(default="reference_semiclassical", description="Bundled device name or path")
    noise: NoiseSection = Field(default_factory=NoiseSection)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    data: Optional[str] = Field(default=None, description="Measured rate table for noise-fit")

    def digest(self) -> str:
        """Stable hash of the resolved document for output provenance."""
        payload = json.dumps(self.model_dump(mode="json"), sort_keys=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def settings_defaults(config) -> Dict[str, Dict[str, Any]]:
    """Run-config defaults taken from the environment settings (NoiseConfig, StorageConfig)."""
    noise = config.noise
    return {
        "noise": {
            "A": noise.coupler_amplitude,
            "gamma": noise.noise_exponent,
            "omega_low": noise.omega_low,
            "t_evol": noise.t_evol,
            "t1_background": noise.t1_background,
            "enable_qubit_loop_channel": noise.enable_qubit_loop_channel,
            "qubit_loop_amplitude": noise.qubit_loop_amplitude,
        },
        "output": {"directory": config.storage.output_dir},
    }


def load_run_config(path: Optional[Union[str, Path]], config=None) -> RunConfig:
    """Load a RunConfig document; None yields all defaults.

    With `config`, keys the document omits fall back to the environment
    settings instead of the built-in defaults.
    """
    document: Dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"Run config does not exist: {path}")
        try:
            with open(path, "r", encoding="utf-8") as f:
                document = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Run config is not valid JSON: {path}: {e}") from e
        if not isinstance(document, dict):
            raise ConfigError(f"Run config must be a JSON object: {path}")

    if config is not None:
        for section, defaults in settings_defaults(config).items():
            given = document.get(section, {})
            if isinstance(given, dict):
                document[section] = {**defaults, **given}

    try:
        run_config = RunConfig.model_validate(document)
    except PydanticValidationError as e:
        raise ConfigError(f"Run config failed validation: {path or 'defaults'}: {e}") from e

    if path is not None:
        logger.info(f"Loaded run config from {path}")
    return run_config
