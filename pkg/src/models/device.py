"""
FluxCoupler Device Models

Circuit parameters of the two flux qubits, the rf-SQUID coupler and their
shared inductance, plus the reduced-flux bias point.
"""

import json
import logging
import math
from enum import Enum
from pathlib import Path
from typing import Dict, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError as PydanticValidationError, field_validator, model_validator

from ..constants import beta as _beta
from ..exceptions import ConfigError

logger = logging.getLogger(__name__)


class ParameterSet(str, Enum):
    """Column of the device parameter table."""
    SEMICLASSICAL = "semiclassical"
    FULL = "full"


class QubitLabel(str, Enum):
    """Qubit identifier."""
    A = "A"
    B = "B"


def _require_positive(value: float, name: str) -> float:
    if not math.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be strictly positive and finite")
    return value


class QubitParams(BaseModel):
    """Capacitively shunted three-junction flux qubit."""

    model_config = ConfigDict(frozen=True)

    i0_small: float = Field(description="Small junction critical current (nA)", examples=[78.0])
    i0_large: float = Field(description="Large junction critical current (nA)", examples=[206.0])
    c_shunt: float = Field(description="Shunt capacitance across the small junction (fF)", examples=[53.0])
    l_loop: float = Field(description="Loop inductance (pH)", examples=[115.0])

    @field_validator("i0_small", "i0_large", "c_shunt", "l_loop")
    @classmethod
    def validate_positive(cls, v, info):
        return _require_positive(v, info.field_name)


class CouplerParams(BaseModel):
    """Single-junction rf-SQUID coupler."""

    model_config = ConfigDict(frozen=True)

    i0: float = Field(description="Junction critical current (nA)", examples=[727.0])
    l_loop: float = Field(description="Loop inductance (pH)", examples=[467.0])

    @field_validator("i0", "l_loop")
    @classmethod
    def validate_positive(cls, v, info):
        return _require_positive(v, info.field_name)


class DeviceParams(BaseModel):
    """Complete parameter set for two qubits, one coupler and the shared inductances."""

    model_config = ConfigDict(frozen=True)

    parameter_set: ParameterSet = Field(default=ParameterSet.SEMICLASSICAL)
    j_c: float = Field(description="Critical current density (μA/μm²)", examples=[2.78])
    s_c: float = Field(description="Specific junction capacitance (fF/μm²)", examples=[50.0])
    qubits: Dict[QubitLabel, QubitParams]
    coupler: CouplerParams
    m_shared: float = Field(description="Shared inductance per qubit-coupler pair (pH)", examples=[39.0])

    @field_validator("j_c", "s_c", "m_shared")
    @classmethod
    def validate_positive(cls, v, info):
        return _require_positive(v, info.field_name)

    @model_validator(mode="after")
    def validate_qubits(self):
        missing = [label.value for label in QubitLabel if label not in self.qubits]
        if missing:
            raise ValueError(f"Missing qubit parameters for: {missing}")
        return self

    def qubit(self, which: Union[QubitLabel, str]) -> QubitParams:
        return self.qubits[QubitLabel(which)]

    def junction_area(self, i0: float) -> float:
        """Junction area in μm² implied by its critical current in nA."""
        return i0 / (self.j_c * 1000.0)

    def beta(self) -> float:
        return _beta(self.coupler.l_loop, self.coupler.i0)

    def with_overrides(self, **changes) -> "DeviceParams":
        return self.model_copy(update=changes)


class FluxPoint(BaseModel):
    """Reduced external fluxes f_i = Φ_i/Φ₀."""

    model_config = ConfigDict(frozen=True)

    f_A: float = 0.0
    f_B: float = 0.0
    f_C: float = 0.0

    @field_validator("f_A", "f_B", "f_C")
    @classmethod
    def validate_finite(cls, v):
        if not math.isfinite(v):
            raise ValueError("Reduced flux must be finite")
        return v

    def folded(self) -> "FluxPoint":
        """Canonical representative in [0, 1)."""
        return FluxPoint(f_A=self.f_A % 1.0, f_B=self.f_B % 1.0, f_C=self.f_C % 1.0)

    def reflected(self) -> "FluxPoint":
        """(f_A, f_B, f_C) -> (1 - f_A, 1 - f_B, -f_C)."""
        return FluxPoint(f_A=1.0 - self.f_A, f_B=1.0 - self.f_B, f_C=-self.f_C)


def load_device(path: Union[str, Path]) -> DeviceParams:
    """Load DeviceParams from a JSON document."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Device config does not exist: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            document = json.load(f)
        device = DeviceParams.model_validate(document)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Device config is not valid JSON: {path}: {e}") from e
    except PydanticValidationError as e:
        raise ConfigError(f"Device config failed validation: {path}: {e}") from e

    logger.info(f"Loaded device parameters ({device.parameter_set.value}) from {path}")
    return device
