"""
FluxCoupler Models

Pydantic data models for device parameters, flux bias points, noise models and
run configuration documents.
"""

from .device import (
    ParameterSet,
    QubitLabel,
    QubitParams,
    CouplerParams,
    DeviceParams,
    FluxPoint,
    load_device,
)
from .noise_model import NoiseModel
from .run_config import (
    RangeSpec,
    SweepConfig,
    OutputConfig,
    RunConfig,
    load_run_config,
)

__all__ = [
    'ParameterSet',
    'QubitLabel',
    'QubitParams',
    'CouplerParams',
    'DeviceParams',
    'FluxPoint',
    'load_device',
    'NoiseModel',
    'RangeSpec',
    'SweepConfig',
    'OutputConfig',
    'RunConfig',
    'load_run_config',
]
