"""
FluxCoupler Operators

Linear-algebra substrate for the circuit models: mode operators in truncated
bases, tensor-product embedding, operator exponentials and a dense Hermitian
eigensolver with residual and orthonormality contracts.

Mode operators use reduced variables, phase φ = 2πΦ/Φ₀ and Cooper-pair number
n = Q/2e, so that [φ, n] = i.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg as sla

from ..exceptions import SolverError, ValidationError

logger = logging.getLogger(__name__)

MatrixLike = Union[np.ndarray, "HermitianOperator"]


class BasisKind(str, Enum):
    """Single-mode basis type."""
    HARMONIC = "harmonic"
    CHARGE = "charge"


@dataclass(frozen=True)
class HermitianOperator:
    """Dense Hermitian matrix, frozen after construction."""
    matrix: np.ndarray
    tolerance: float = 1e-12

    def __post_init__(self):
        matrix = np.array(self.matrix, copy=True)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValidationError(f"Operator must be square, got shape {matrix.shape}")
        if matrix.shape[0] < 2:
            raise ValidationError("Operator dimension must be at least 2")
        scale = max(1.0, float(np.max(np.abs(matrix))))
        deviation = float(np.max(np.abs(matrix - matrix.conj().T)))
        if deviation > self.tolerance * scale:
            raise ValidationError(
                f"Operator is not Hermitian (deviation {deviation:.3e}, scale {scale:.3e})",
                details={"deviation": deviation, "scale": scale},
            )
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def expectation(self, state: np.ndarray) -> float:
        return float(np.real(np.vdot(state, self.matrix @ state)))

    def matrix_elements(self, states: np.ndarray) -> np.ndarray:
        """⟨ψ_i|O|ψ_j⟩ for the columns of `states`."""
        return states.conj().T @ self.matrix @ states

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        return HermitianOperator(self.matrix + other.matrix, self.tolerance)

    def scaled(self, factor: float) -> "HermitianOperator":
        return HermitianOperator(self.matrix * factor, self.tolerance)


@dataclass(frozen=True)
class EigenSolution:
    """Lowest eigenpairs of a Hermitian operator."""
    energies: np.ndarray
    states: np.ndarray
    residual: float

    @property
    def count(self) -> int:
        return len(self.energies)

    def gap(self, upper: int = 1, lower: int = 0) -> float:
        return float(self.energies[upper] - self.energies[lower])


@dataclass(frozen=True)
class ModeBasis:
    """Truncated single-mode basis.

    Harmonic bases are characterised by the zero-point phase fluctuation
    `phi_zpf`; charge bases span n = -N..N with `levels` = 2N + 1.
    """
    levels: int
    kind: BasisKind = BasisKind.HARMONIC
    phi_zpf: float = 1.0
    label: str = "mode"

    def __post_init__(self):
        if self.levels < 4:
            raise ValidationError(f"Basis for {self.label} needs at least 4 levels, got {self.levels}")
        if self.kind == BasisKind.HARMONIC and not self.phi_zpf > 0:
            raise ValidationError("Harmonic basis needs a positive zero-point phase")
        if self.kind == BasisKind.CHARGE and self.levels % 2 == 0:
            raise ValidationError("Charge basis needs an odd number of levels")

    def enlarged(self, extra: int) -> "ModeBasis":
        step = 2 * extra if self.kind == BasisKind.CHARGE else extra
        return ModeBasis(self.levels + step, self.kind, self.phi_zpf, self.label)


def _lowering(levels: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, levels, dtype=float)), k=1)


def mode_operators(basis: ModeBasis) -> Tuple[np.ndarray, np.ndarray]:
    """Flux-like and charge-like operators of one mode.

    Harmonic basis: (φ, n) with φ = φ_zpf(a + a†) and n = i(a† − a)/(2φ_zpf).
    Charge basis: (e^{iφ}, n), where e^{iφ} raises the charge index by one.
    """
    if basis.kind == BasisKind.HARMONIC:
        a = _lowering(basis.levels)
        phi = basis.phi_zpf * (a + a.T)
        n = 1j * (a.T - a) / (2.0 * basis.phi_zpf)
        return phi, n

    half = basis.levels // 2
    n = np.diag(np.arange(-half, half + 1, dtype=float))
    exp_i_phi = np.eye(basis.levels, k=-1)
    return exp_i_phi, n


def exp_i_flux(basis: ModeBasis, coefficient: float, padding: int = 3) -> np.ndarray:
    """exp(i·c·φ) truncated to the basis.

    Harmonic bases evaluate the exponential in a `padding`-times larger space
    before truncation, so every retained element is exact to machine precision.
    """
    if basis.kind == BasisKind.CHARGE:
        if not float(coefficient).is_integer():
            raise ValidationError("Charge basis supports integer multiples of φ only")
        shift, _ = mode_operators(basis)
        return np.linalg.matrix_power(shift, int(coefficient)) if coefficient >= 0 else \
            np.linalg.matrix_power(shift.T, int(-coefficient))

    big = ModeBasis(basis.levels * padding, basis.kind, basis.phi_zpf, basis.label)
    phi, _ = mode_operators(big)
    values, vectors = np.linalg.eigh(phi)
    full = (vectors * np.exp(1j * coefficient * values)) @ vectors.T
    return full[: basis.levels, : basis.levels]


def tensor_product(ops: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, ops)


def tensor_embed(op: MatrixLike, slot: int, dims: Sequence[int]) -> MatrixLike:
    """Embed a single-mode operator at `slot` of a product space with mode dims `dims`."""
    total_modes = len(dims)
    if not 0 <= slot < total_modes:
        raise ValidationError(f"Slot {slot} out of range for {total_modes} modes")
    matrix = op.matrix if isinstance(op, HermitianOperator) else np.asarray(op)
    if matrix.shape != (dims[slot], dims[slot]):
        raise ValidationError(
            f"Operator shape {matrix.shape} inconsistent with mode dimension {dims[slot]}"
        )
    factors = [np.eye(d) for d in dims]
    factors[slot] = matrix
    embedded = tensor_product(factors)
    if isinstance(op, HermitianOperator):
        return HermitianOperator(embedded, op.tolerance)
    return embedded


def _spectral_scale(matrix: np.ndarray) -> float:
    # 2‖H‖_∞ bounds the full spectral range
    return 2.0 * float(np.max(np.sum(np.abs(matrix), axis=1)))


def eigendecompose(H: HermitianOperator, k: Optional[int] = None, residual_factor: float = 1e-9) -> EigenSolution:
    """Lowest `k` eigenpairs of H, ascending, with residual checks."""
    dim = H.dim
    k = dim if k is None else k
    if not 1 <= k <= dim:
        raise ValidationError(f"Requested {k} eigenpairs from a {dim}-dimensional operator")

    try:
        if k == dim:
            energies, states = sla.eigh(H.matrix, check_finite=True)
        else:
            energies, states = sla.eigh(H.matrix, subset_by_index=[0, k - 1], driver="evr", check_finite=True)
    except (sla.LinAlgError, ValueError) as e:
        raise SolverError(
            f"Eigensolver failed for {dim}x{dim} operator: {e}",
            details={"dim": dim, "k": k, "driver": "evr" if k < dim else "evd"},
        ) from e

    residuals = np.linalg.norm(H.matrix @ states - states * energies, axis=0)
    residual = float(np.max(residuals))
    scale = _spectral_scale(H.matrix)
    if residual > residual_factor * max(scale, 1e-300):
        raise SolverError(
            f"Eigen-residual {residual:.3e} exceeds contract {residual_factor:.1e} x {scale:.3e}",
            details={"dim": dim, "k": k, "residual": residual, "scale": scale},
        )

    overlap = states.conj().T @ states
    deviation = float(np.max(np.abs(overlap - np.eye(k))))
    if deviation > 1e-9:
        raise SolverError(
            f"Eigenvectors not orthonormal (deviation {deviation:.3e})",
            details={"dim": dim, "k": k, "orthonormality": deviation},
        )

    return EigenSolution(energies=energies, states=states, residual=residual)


def max_level_shift(reference: np.ndarray, refined: np.ndarray) -> float:
    """Largest change of the retained eigenvalues between two truncations."""
    count = min(len(reference), len(refined))
    return float(np.max(np.abs(np.asarray(reference[:count]) - np.asarray(refined[:count]))))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def pauli_matrices() -> List[np.ndarray]:
    """σ_x, σ_y, σ_z."""
    return [
        np.array([[0, 1], [1, 0]], dtype=complex),
        np.array([[0, -1j], [1j, 0]], dtype=complex),
        np.array([[1, 0], [0, -1]], dtype=complex),
    ]
