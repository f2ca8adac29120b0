"""
FluxCoupler Configuration Management

This module provides centralized configuration management for the FluxCoupler
toolkit, including environment variable loading, validation, and logging setup.
Device parameters and sweep definitions live in JSON run configs (see
src/models/run_config.py); the settings here control numerics and plumbing.
"""

import os
import logging
import math
from pathlib import Path
from typing import Optional, Dict, Any
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv

PROJECT_ROOT = Path(__file__).resolve().parent.parent
DEFAULT_DEVICE_DIR = PROJECT_ROOT / "data" / "devices"


class SolverConfig(BaseSettings):
    """Truncation, tolerance and finite-difference settings."""

    model_config = SettingsConfigDict(extra="ignore")

    # Basis truncation
    qubit_levels: int = Field(default=12, description="Harmonic levels per qubit mode")
    coupler_levels: int = Field(default=60, description="Harmonic levels for the coupler mode")
    expm_padding: int = Field(default=3, description="Oversampling factor for operator exponentials")
    max_level_increases: int = Field(default=4, description="Level raises tried before giving up")
    check_convergence: bool = Field(default=False, description="Verify every qubit build against the contract")
    verify_truncation: bool = Field(default=True, description="Resolve qubit levels against the contract once per configuration")

    # Tolerances
    convergence_tolerance_ghz: float = Field(default=1e-6, description="1 kHz truncation contract")
    hermitian_tolerance: float = Field(default=1e-12)
    residual_factor: float = Field(default=1e-9, description="Residual bound relative to spectral range")
    degeneracy_xtol: float = Field(default=1e-7, description="Degeneracy search tolerance in flux quanta")
    degeneracy_half_width: float = Field(default=0.01, description="Half-width of the degeneracy search bracket around f = 1/2")
    interpolation_nodes: int = Field(default=9, description="Chebyshev nodes for gap and persistent current vs loaded inductance")

    # Finite differences
    fd_step_first: float = Field(default=1e-4)
    fd_step_second: float = Field(default=5e-4)

    # Composite model
    composite_levels: int = Field(default=5, description="Bare levels retained per subsystem")
    composite_tolerance_ghz: float = Field(default=1e-5, description="10 kHz composite contract")
    overlap_threshold: float = Field(default=0.5)
    resonance_resolution: float = Field(default=2e-4, description="Sweep step near crossings in flux quanta")

    @field_validator("qubit_levels", "coupler_levels")
    @classmethod
    def validate_levels(cls, v):
        if v < 4:
            raise ValueError("Level counts must be at least 4")
        return v

    @field_validator("composite_levels")
    @classmethod
    def validate_composite_levels(cls, v):
        if v < 2:
            raise ValueError("Composite model needs at least 2 levels per subsystem")
        return v

    @field_validator(
        "convergence_tolerance_ghz", "hermitian_tolerance", "residual_factor",
        "degeneracy_xtol", "degeneracy_half_width", "fd_step_first", "fd_step_second",
        "composite_tolerance_ghz", "resonance_resolution",
    )
    @classmethod
    def validate_positive(cls, v):
        if v <= 0:
            raise ValueError("Tolerances and steps must be positive")
        return v

    @field_validator("overlap_threshold")
    @classmethod
    def validate_overlap_threshold(cls, v):
        if not 0.0 < v <= 1.0:
            raise ValueError("Overlap threshold must be in (0, 1]")
        return v

    @field_validator("interpolation_nodes")
    @classmethod
    def validate_nodes(cls, v):
        if v < 3:
            raise ValueError("Interpolation needs at least 3 nodes")
        return v

    @field_validator("expm_padding")
    @classmethod
    def validate_padding(cls, v):
        if v < 1:
            raise ValueError("Exponential padding factor must be at least 1")
        return v


class NoiseConfig(BaseSettings):
    """Default flux-noise model and coherence backgrounds."""

    model_config = SettingsConfigDict(extra="ignore")

    coupler_amplitude: float = Field(default=15e-6, description="A at 1 Hz in Φ₀/√Hz")
    noise_exponent: float = Field(default=0.91, description="Flux-noise spectral exponent γ")
    omega_low: float = Field(default=2 * math.pi * 3e-3, description="Lower cutoff in rad/s")
    t_evol: float = Field(default=200e-9, description="Typical free evolution time in s")
    t1_background: float = Field(default=3.5e-6, description="Coupler-independent T1 in s")
    enable_qubit_loop_channel: bool = Field(default=False)
    qubit_loop_amplitude: float = Field(default=1.4e-6, description="Qubit loop A in Φ₀/√Hz")

    @field_validator("noise_exponent")
    @classmethod
    def validate_exponent(cls, v):
        if not 0.0 < v < 2.0:
            raise ValueError("Noise exponent must be between 0 and 2")
        return v

    @field_validator("coupler_amplitude", "qubit_loop_amplitude")
    @classmethod
    def validate_amplitude(cls, v):
        if v < 0:
            raise ValueError("Noise amplitude must be non-negative")
        return v

    @field_validator("t_evol", "omega_low", "t1_background")
    @classmethod
    def validate_times(cls, v):
        if v <= 0:
            raise ValueError("Times and cutoffs must be positive")
        return v

    @field_validator("t_evol")
    @classmethod
    def validate_window(cls, v, info):
        if "omega_low" in info.data and info.data["omega_low"] * v >= 1.0:
            raise ValueError("omega_low * t_evol must be below 1")
        return v


class PerformanceConfig(BaseSettings):
    """Worker pool settings."""

    model_config = SettingsConfigDict(extra="ignore")

    threads: int = Field(default_factory=lambda: os.cpu_count() or 1)

    @field_validator("threads")
    @classmethod
    def validate_threads(cls, v):
        if v <= 0:
            raise ValueError("Thread count must be positive")
        return v


class LoggingConfig(BaseSettings):
    """Logging configuration settings."""

    model_config = SettingsConfigDict(env_prefix="LOG_", extra="ignore")

    level: str = Field(default="INFO")
    format: str = Field(default="json")
    file: str = Field(default="", description="Log file path; empty disables the file handler")
    debug: bool = Field(default=False)

    @field_validator("level")
    @classmethod
    def validate_log_level(cls, v):
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Log level must be one of: {valid_levels}")
        return v.upper()

    @field_validator("format")
    @classmethod
    def validate_format(cls, v):
        if v.lower() not in ("json", "text"):
            raise ValueError("Log format must be json or text")
        return v.lower()


class StorageConfig(BaseSettings):
    """Device config and output locations."""

    model_config = SettingsConfigDict(env_prefix="FLUXCOUPLER_", extra="ignore")

    config_dir: str = Field(default=str(DEFAULT_DEVICE_DIR))
    output_dir: str = Field(default="./output")

    def ensure_directories(self, output_dir: Optional[str] = None, log_file_path: Optional[str] = None):
        """Ensure the output directory (default `output_dir`) and the log directory exist."""
        directories = [str(output_dir or self.output_dir)]
        if log_file_path:
            log_dir = os.path.dirname(log_file_path)
            if log_dir:
                directories.append(log_dir)
        for directory in directories:
            Path(directory).mkdir(parents=True, exist_ok=True)

    def resolve_device(self, name_or_path: str) -> Path:
        """Resolve a bundled device name (e.g. reference_full) or a path."""
        candidate = Path(name_or_path)
        if candidate.exists():
            return candidate
        bundled = Path(self.config_dir) / name_or_path
        if bundled.suffix != ".json":
            bundled = bundled.with_suffix(".json")
        return bundled


class Config:
    """Main configuration class that combines all configuration sections."""

    def __init__(self, env_file: Optional[str] = None):
        """Initialize configuration with optional environment file."""
        if env_file:
            load_dotenv(env_file, override=False)

        self.solver = SolverConfig(_env_file=env_file)
        self.noise = NoiseConfig(_env_file=env_file)
        self.performance = PerformanceConfig(_env_file=env_file)
        self.logging = LoggingConfig(_env_file=env_file)
        self.storage = StorageConfig(_env_file=env_file)

        self._setup_logging()

    def _setup_logging(self):
        """Configure logging based on settings."""
        if self.logging.file:
            log_dir = os.path.dirname(self.logging.file)
            if log_dir:
                Path(log_dir).mkdir(parents=True, exist_ok=True)

        if self.logging.format == "json":
            formatter = logging.Formatter(
                '{"timestamp": "%(asctime)s", "level": "%(levelname)s", "module": "%(name)s", "message": "%(message)s"}'
            )
        else:
            formatter = logging.Formatter(
                '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
            )

        root_logger = logging.getLogger()
        root_logger.setLevel(self.logging.level)
        root_logger.handlers.clear()

        # stderr keeps stdout free for command output
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(formatter)
        root_logger.addHandler(console_handler)

        if self.logging.file:
            file_handler = logging.FileHandler(self.logging.file)
            file_handler.setFormatter(formatter)
            root_logger.addHandler(file_handler)

        if self.logging.debug:
            root_logger.setLevel(logging.DEBUG)

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary for serialization."""
        return {
            "solver": self.solver.model_dump(),
            "noise": self.noise.model_dump(),
            "performance": self.performance.model_dump(),
            "logging": self.logging.model_dump(),
            "storage": self.storage.model_dump(),
        }

    def validate(self) -> bool:
        """Validate cross-section settings."""
        try:
            if self.solver.fd_step_second <= self.solver.fd_step_first / 10:
                raise ValueError("Second-derivative step too small relative to first-derivative step")
            return True
        except Exception as e:
            logging.error(f"Configuration validation failed: {e}")
            return False


# Global configuration instance
config: Optional[Config] = None


def get_config(env_file: Optional[str] = None) -> Config:
    """Get or create the global configuration instance."""
    global config
    if config is None:
        config = Config(env_file)
    return config


def reload_config(env_file: Optional[str] = None) -> Config:
    """Reload the configuration from environment file."""
    global config
    config = Config(env_file)
    return config
