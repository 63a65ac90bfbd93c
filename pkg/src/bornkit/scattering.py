"""Transition probabilities for finite-channel scattering.

Channels are abstract labeled basis vectors; no kinematics is modeled.
The matrix maps in-channels to out-channels and must be unitary for
distribution operations, which is what makes the probabilities sum to
one.  Degenerate channels are handled by projecting onto the eigenspace
and summing over any orthonormal basis of it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    LabelCollisionError,
    NotNormalizedError,
    NotOrthonormalError,
    NotProjectorError,
    NotUnitaryError,
)
from .operators import as_complex_matrix, as_complex_vector, frozen_array

UNITARY_TOL = 1e-10
NORM_TOL = 1e-10


class NonunitaryWarning(UserWarning):
    """Transition amplitudes computed through a non-unitary matrix."""


def unitarity_report(s) -> float:
    """||S* S - identity||_F for any square matrix."""
    matrix = s.matrix if isinstance(s, SMatrix) else as_complex_matrix(s, "S")
    return float(np.linalg.norm(matrix.conj().T @ matrix - np.eye(matrix.shape[0])))


@dataclass(frozen=True)
class SMatrix:
    """Scattering matrix on labeled asymptotic channels."""

    matrix: np.ndarray
    channel_labels: tuple

    def __post_init__(self):
        matrix = as_complex_matrix(self.matrix, "S-matrix")
        if len(self.channel_labels) != matrix.shape[0]:
            raise DimensionMismatchError(
                f"{len(self.channel_labels)} labels for dimension {matrix.shape[0]}"
            )
        if len(set(self.channel_labels)) != len(self.channel_labels):
            raise LabelCollisionError(f"duplicate channel labels in {self.channel_labels}")
        object.__setattr__(self, "matrix", frozen_array(matrix))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def unitarity_deviation(self) -> float:
        return unitarity_report(self.matrix)

    def is_unitary(self, tol: float = UNITARY_TOL) -> bool:
        return self.unitarity_deviation() <= tol


def make_smatrix(matrix, channel_labels=None, require_unitary: bool = True) -> SMatrix:
    """Validate a scattering matrix; channel labels default to indices.

    Non-unitary matrices are accepted with ``require_unitary=False`` so
    that conservation failures can be demonstrated; distribution
    operations still refuse them.
    """
    arr = as_complex_matrix(matrix, "S-matrix")
    if channel_labels is None:
        channel_labels = [str(k) for k in range(arr.shape[0])]
    s = SMatrix(matrix=arr, channel_labels=tuple(str(l) for l in channel_labels))
    if require_unitary and not s.is_unitary():
        raise NotUnitaryError(
            f"S-matrix fails unitarity by {s.unitarity_deviation():.3e} (tol {UNITARY_TOL:.1e})"
        )
    return s


def _check_normalized(vec: np.ndarray, name: str) -> np.ndarray:
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > NORM_TOL:
        raise NotNormalizedError(f"{name} has norm {norm!r}")
    return vec


def transition_probability(s: SMatrix, psi_in, psi_out) -> float:
    """|psi_out* S psi_in|^2 for normalized in/out states."""
    vin = _check_normalized(as_complex_vector(psi_in, "psi_in"), "psi_in")
    vout = _check_normalized(as_complex_vector(psi_out, "psi_out"), "psi_out")
    if vin.shape[0] != s.dim or vout.shape[0] != s.dim:
        raise DimensionMismatchError(
            f"states of dims {vin.shape[0]}, {vout.shape[0]} on channels of dim {s.dim}"
        )
    if not s.is_unitary():
        warnings.warn(
            f"S-matrix fails unitarity by {s.unitarity_deviation():.3e}; "
            "probabilities need not be conserved",
            NonunitaryWarning,
            stacklevel=2,
        )
    amplitude = np.vdot(vout, s.matrix @ vin)
    return float(np.abs(amplitude) ** 2)


def transition_distribution(s: SMatrix, psi_in, out_basis=None) -> np.ndarray:
    """Probabilities over a complete orthonormal family of out-states.

    Defaults to the channel basis.  Unitarity is required; the result
    sums to one.
    """
    if not s.is_unitary():
        raise NotUnitaryError(
            f"distribution needs a unitary S-matrix, deviation {s.unitarity_deviation():.3e}"
        )
    vin = _check_normalized(as_complex_vector(psi_in, "psi_in"), "psi_in")
    if vin.shape[0] != s.dim:
        raise DimensionMismatchError(f"psi_in dim {vin.shape[0]} != channel dim {s.dim}")
    scattered = s.matrix @ vin
    if out_basis is None:
        return np.abs(scattered) ** 2
    rows = np.stack([as_complex_vector(phi, "out state") for phi in out_basis])
    if rows.shape != (s.dim, s.dim):
        raise NotOrthonormalError(
            f"out basis must be complete ({s.dim} vectors of dim {s.dim}), got {rows.shape}"
        )
    gram = rows.conj() @ rows.T
    gap = float(np.max(np.abs(gram - np.eye(s.dim))))
    if gap > NORM_TOL:
        raise NotOrthonormalError(f"out basis fails orthonormality by {gap:.3e}")
    return np.abs(rows.conj() @ scattered) ** 2


def degenerate_channel_probability(s: SMatrix, psi_in, channel_projector) -> float:
    """||Pi S psi_in||^2, the summed probability into an out-eigenspace.

    Equals the sum of |phi_m* S psi_in|^2 over any orthonormal basis of
    the range of the projector, independently of the basis chosen.
    """
    vin = _check_normalized(as_complex_vector(psi_in, "psi_in"), "psi_in")
    projector = as_complex_matrix(channel_projector, "channel projector")
    if projector.shape[0] != s.dim or vin.shape[0] != s.dim:
        raise DimensionMismatchError("projector/state dimensions do not match the channels")
    herm_gap = float(np.max(np.abs(projector - projector.conj().T)))
    idem_gap = float(np.max(np.abs(projector @ projector - projector)))
    if max(herm_gap, idem_gap) > 1e-10:
        raise NotProjectorError(
            f"channel projector fails Hermiticity by {herm_gap:.3e} or idempotence by {idem_gap:.3e}"
        )
    return float(np.linalg.norm(projector @ (s.matrix @ vin)) ** 2)
