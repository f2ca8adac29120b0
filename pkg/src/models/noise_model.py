"""
FluxCoupler Noise Model

Parameters of a 1/f^γ flux-noise spectral density and its evaluation window.
"""

import math

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class NoiseModel(BaseModel):
    """Flux-noise amplitude, exponent and dephasing evaluation window."""

    model_config = ConfigDict(frozen=True)

    A: float = Field(default=15e-6, description="Amplitude at the 1 Hz pivot (Φ₀/√Hz)")
    gamma: float = Field(default=0.91, description="Spectral exponent")
    omega_low: float = Field(default=2 * math.pi * 3e-3, description="Lower cutoff (rad/s)")
    t_evol: float = Field(default=200e-9, description="Typical free-evolution time (s)")

    @field_validator("A")
    @classmethod
    def validate_amplitude(cls, v):
        if not math.isfinite(v) or v < 0:
            raise ValueError("Noise amplitude must be non-negative")
        return v

    @field_validator("gamma")
    @classmethod
    def validate_gamma(cls, v):
        if not 0.0 < v < 2.0:
            raise ValueError("Noise exponent must be between 0 and 2")
        return v

    @field_validator("omega_low", "t_evol")
    @classmethod
    def validate_positive(cls, v):
        if v <= 0:
            raise ValueError("Cutoff and evolution time must be positive")
        return v

    @model_validator(mode="after")
    def validate_window(self):
        if self.omega_low * self.t_evol >= 1.0:
            raise ValueError("omega_low * t_evol must be below 1")
        return self

    @property
    def window(self) -> float:
        """Dimensionless ω_low·t."""
        return self.omega_low * self.t_evol
