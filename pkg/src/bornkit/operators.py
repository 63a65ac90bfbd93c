"""Density operators, quantum values, and uncertainties on C^d.

States are positive semidefinite Hermitian matrices whose trace (the
intensity) is *not* forced to one; the zero matrix is the legal empty
state of intensity zero.  Normalization is an explicit operation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyStateError,
    NotHermitianError,
    NotPSDError,
    NotSquareError,
)

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10


def as_complex_matrix(matrix, name: str = "matrix") -> np.ndarray:
    """Coerce to a square complex128 array."""
    arr = np.asarray(matrix, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise NotSquareError(f"{name} must be square, got shape {arr.shape}")
    return arr


def as_complex_vector(vector, name: str = "vector") -> np.ndarray:
    arr = np.asarray(vector, dtype=complex)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    return arr


def frozen_array(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, copy=True)
    out.setflags(write=False)
    return out


def hermitian_deviation(matrix: np.ndarray) -> float:
    """Max entrywise deviation |M - M*|."""
    return float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0


def require_hermitian(matrix, tol: float = HERMITIAN_TOL, name: str = "matrix") -> np.ndarray:
    arr = as_complex_matrix(matrix, name)
    dev = hermitian_deviation(arr)
    if dev > tol:
        raise NotHermitianError(f"{name} deviates from Hermitian by {dev:.3e} (tol {tol:.1e})")
    return arr


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def trace_product(a: np.ndarray, b: np.ndarray) -> complex:
    """tr(A B) without forming the product."""
    return complex(np.einsum("ij,ji->", a, b))


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian PSD matrix with cached intensity tr(rho)."""

    matrix: np.ndarray
    intensity: float

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def is_empty(self) -> bool:
        return self.intensity <= 0.0


def make_density(matrix, sanitize: bool = False) -> DensityOperator:
    """Validate a matrix as a density operator.

    Hermiticity is checked entrywise against ``HERMITIAN_TOL`` and the
    smallest eigenvalue against ``-PSD_TOL``.  With ``sanitize=True``,
    eigenvalues in ``[-PSD_TOL, 0)`` are clipped to zero and the matrix
    rebuilt; by default the matrix is stored as given, so rounding dust
    is visible rather than silently repaired.
    """
    arr = as_complex_matrix(matrix, "density matrix")
    dev = hermitian_deviation(arr)
    if dev > HERMITIAN_TOL:
        raise NotHermitianError(f"density matrix deviates from Hermitian by {dev:.3e}")
    eigenvalues = np.linalg.eigvalsh(arr)
    smallest = float(eigenvalues[0]) if eigenvalues.size else 0.0
    if smallest < -PSD_TOL:
        raise NotPSDError(f"density matrix has eigenvalue {smallest:.3e} < -{PSD_TOL:.1e}")
    if sanitize and smallest < 0.0:
        values, vectors = np.linalg.eigh(arr)
        values = np.clip(values, 0.0, None)
        arr = (vectors * values) @ vectors.conj().T
    intensity = float(np.real(np.trace(arr)))
    return DensityOperator(matrix=frozen_array(arr), intensity=intensity)


def pure_state(psi) -> DensityOperator:
    """rho = psi psi*; intensity is the squared norm (no normalization)."""
    vec = as_complex_vector(psi, "state vector")
    matrix = np.outer(vec, vec.conj())
    intensity = float(np.real(np.vdot(vec, vec)))
    return DensityOperator(matrix=frozen_array(matrix), intensity=intensity)


def normalize(rho: DensityOperator) -> DensityOperator:
    """Rescale to intensity one."""
    if rho.is_empty():
        raise EmptyStateError("cannot normalize the empty state")
    return DensityOperator(matrix=frozen_array(rho.matrix / rho.intensity), intensity=1.0)


def _check_dims(rho: DensityOperator, x: np.ndarray) -> None:
    if x.shape[0] != rho.dim:
        raise DimensionMismatchError(
            f"operator dim {x.shape[0]} does not match state dim {rho.dim}"
        )


def quantum_value(rho: DensityOperator, x) -> complex:
    """Unnormalized value tr(rho X); linear in both arguments."""
    arr = as_complex_matrix(x, "operator")
    _check_dims(rho, arr)
    return trace_product(rho.matrix, arr)


def quantum_expectation(rho: DensityOperator, x) -> complex:
    """Intensity-normalized value tr(rho X)/tr(rho)."""
    if rho.is_empty():
        raise EmptyStateError("quantum expectation requires positive intensity")
    return quantum_value(rho, x) / rho.intensity


def uncertainty(rho: DensityOperator, x) -> float:
    """sqrt(<(X - xbar)* (X - xbar)>) with intensity-normalized expectations.

    Non-Hermitian X is supported through the adjoint, so this measures the
    spread of complex values as well as of real ones.
    """
    arr = as_complex_matrix(x, "operator")
    _check_dims(rho, arr)
    if rho.is_empty():
        raise EmptyStateError("uncertainty requires positive intensity")
    xbar = quantum_value(rho, arr) / rho.intensity
    centered = arr - xbar * np.eye(rho.dim)
    # sqrt(tr rho M* M) as ||M L||_F with rho = L L*; summing squares instead
    # of cancelling traces keeps eigenstate uncertainties at machine zero.
    # Eigenvalues below the rank tolerance are construction dust and would
    # be amplified by the square root, so they are dropped.
    values, vectors = np.linalg.eigh(rho.matrix)
    cutoff = rho.dim * np.finfo(float).eps * float(values[-1])
    values = np.where(values > cutoff, values, 0.0)
    factor = vectors * np.sqrt(values)
    return float(np.linalg.norm(centered @ factor) / np.sqrt(rho.intensity))


@dataclass(frozen=True)
class UncertaintyProductReport:
    """Uncertainties of two Hermitian quantities and the commutator bound."""

    sigma_a: float
    sigma_b: float
    commutator_bound: float

    @property
    def margin(self) -> float:
        """sigma_a * sigma_b - bound; nonnegative up to rounding."""
        return self.sigma_a * self.sigma_b - self.commutator_bound


def uncertainty_product_report(rho: DensityOperator, a, b) -> UncertaintyProductReport:
    """Evaluate both sides of the Heisenberg-type relation sigma_A sigma_B >= |<[A,B]>|/2."""
    a_arr = require_hermitian(a, name="A")
    b_arr = require_hermitian(b, name="B")
    if rho.is_empty():
        raise EmptyStateError("uncertainty product requires positive intensity")
    sigma_a = uncertainty(rho, a_arr)
    sigma_b = uncertainty(rho, b_arr)
    comm_value = quantum_value(rho, commutator(a_arr, b_arr)) / rho.intensity
    return UncertaintyProductReport(
        sigma_a=sigma_a,
        sigma_b=sigma_b,
        commutator_bound=0.5 * abs(comm_value),
    )


def von_neumann_entropy(rho: DensityOperator) -> float:
    """-sum w ln w over the eigenvalues of the intensity-normalized state."""
    if rho.is_empty():
        raise EmptyStateError("entropy requires positive intensity")
    w = np.linalg.eigvalsh(rho.matrix / rho.intensity)
    w = w[w > 0.0]
    return float(-np.sum(w * np.log(w)))
