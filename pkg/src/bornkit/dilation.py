"""Naimark dilation: realize any quantum measure as a projective one upstairs.

The block construction stacks the Hermitian square roots of the measure
elements into an isometry V : C^d -> C^(K d); the block coordinate
projectors then pull back to the original elements, V* Pi_k V = P_k, so
rates are preserved exactly.  A rank-trimmed variant drops the null
rows of each block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NotPSDError
from .measures import QuantumMeasure, response_rates
from .operators import PSD_TOL, DensityOperator, frozen_array

TRIM_RANK_TOL = 1e-10


@dataclass(frozen=True)
class Dilation:
    """Isometry into the extended space plus the projective lift of the measure."""

    isometry: np.ndarray  # (D, d), V* V = identity
    projective_measure: QuantumMeasure
    source_dim: int

    def __post_init__(self):
        object.__setattr__(self, "isometry", frozen_array(np.asarray(self.isometry, dtype=complex)))

    @property
    def dilated_dim(self) -> int:
        return self.isometry.shape[0]

    def isometry_deviation(self) -> float:
        """||V* V - identity||_F."""
        v = self.isometry
        return float(np.linalg.norm(v.conj().T @ v - np.eye(self.source_dim)))

    def pullback_deviation(self, measure: QuantumMeasure) -> float:
        """Max entrywise |V* Pi_k V - P_k| over the elements of ``measure``."""
        v = self.isometry
        worst = 0.0
        for pi, p in zip(self.projective_measure.elements, measure.elements):
            worst = max(worst, float(np.max(np.abs(v.conj().T @ pi @ v - p))))
        return worst


def _psd_sqrt(p: np.ndarray) -> np.ndarray:
    values, vectors = np.linalg.eigh(p)
    if values[0] < -PSD_TOL:
        raise NotPSDError(f"cannot take the square root at eigenvalue {values[0]:.3e}")
    values = np.clip(values, 0.0, None)
    return (vectors * np.sqrt(values)) @ vectors.conj().T


def naimark_dilate(measure: QuantumMeasure, trim: bool = False) -> Dilation:
    """Block dilation of a quantum measure.

    Block k of V is the Hermitian square root of P_k (for a projective
    measure that root is P_k itself) and Pi_k projects onto block k.
    With ``trim=True`` each block keeps only its rows above the rank
    cutoff, giving the smaller dilation of dimension sum_k rank(P_k).
    """
    d = measure.dim
    blocks = []
    for p in measure.elements:
        root = _psd_sqrt(p)
        if trim:
            values, vectors = np.linalg.eigh(p)
            keep = values > TRIM_RANK_TOL
            root = (np.sqrt(values[keep])[:, np.newaxis]) * vectors[:, keep].conj().T
        blocks.append(root)
    total = sum(b.shape[0] for b in blocks)
    isometry = np.vstack(blocks)
    projectors = []
    offset = 0
    for b in blocks:
        pi = np.zeros((total, total), dtype=complex)
        rows = slice(offset, offset + b.shape[0])
        pi[rows, rows] = np.eye(b.shape[0])
        projectors.append(pi)
        offset += b.shape[0]
    lifted = QuantumMeasure(
        elements=tuple(frozen_array(pi) for pi in projectors),
        labels=measure.labels,
        dim=total,
    )
    return Dilation(isometry=isometry, projective_measure=lifted, source_dim=d)


def lifted_state(dilation: Dilation, rho: DensityOperator) -> DensityOperator:
    """V rho V* on the extended space; the intensity is unchanged."""
    if rho.dim != dilation.source_dim:
        raise DimensionMismatchError(
            f"state dim {rho.dim} != dilation source dim {dilation.source_dim}"
        )
    v = dilation.isometry
    return DensityOperator(matrix=frozen_array(v @ rho.matrix @ v.conj().T), intensity=rho.intensity)


def dilated_rates(dilation: Dilation, rho: DensityOperator) -> np.ndarray:
    """Rates tr((V rho V*) Pi_k) of the projective lift; equal to the direct rates."""
    return response_rates(dilation.projective_measure, lifted_state(dilation, rho))
