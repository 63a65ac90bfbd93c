"""Projective measurements: spectral measures, squared amplitudes, function calculus.

Normal operators decompose into eigenvalue clusters with orthogonal
projectors; eigenvalues within the cluster tolerance merge into one
eigenspace, which keeps degeneracy explicit instead of splitting it
across nearly-equal values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatchError,
    NotNormalError,
    NotNormalizedError,
    NotOrthonormalError,
)
from .measures import QuantumMeasure, response_rates
from .operators import (
    HERMITIAN_TOL,
    DensityOperator,
    as_complex_matrix,
    as_complex_vector,
    frozen_array,
    hermitian_deviation,
    require_hermitian,
)

NORMALITY_TOL = 1e-8
DEFAULT_CLUSTER_TOL = 1e-8
NORM_TOL = 1e-10


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalue clusters of a normal operator with their eigenspace projectors."""

    eigenvalues: np.ndarray
    projectors: QuantumMeasure
    cluster_tol: float

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", frozen_array(np.asarray(self.eigenvalues, dtype=complex)))

    def reconstruct(self) -> np.ndarray:
        """sum_k lambda_k P_k."""
        out = np.zeros((self.projectors.dim,) * 2, dtype=complex)
        for value, projector in zip(self.eigenvalues, self.projectors.elements):
            out = out + value * projector
        return out


def _eigensystem(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and orthonormal eigenvector columns of a normal matrix.

    Hermitian inputs take the eigh fast path (real ascending eigenvalues);
    other normal matrices go through a complex Schur decomposition, whose
    triangular factor is diagonal up to rounding.
    """
    if hermitian_deviation(x) <= HERMITIAN_TOL:
        values, vectors = np.linalg.eigh(x)
        return values.astype(complex), vectors
    t, z = scipy.linalg.schur(x, output="complex")
    return np.diag(t).astype(complex), z


def _cluster_indices(values: np.ndarray, tol: float) -> list[list[int]]:
    """Connected components of the |v_i - v_j| <= tol graph, by first occurrence."""
    n = len(values)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= tol:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda idx: idx[0])


def spectral_measure(x, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> SpectralDecomposition:
    """Spectral decomposition of a normal operator with degeneracy clustering.

    Raises NotNormal when ||X X* - X* X||_F exceeds the normality
    tolerance; defective operators admit no spectral interpretation.
    """
    arr = as_complex_matrix(x, "operator")
    gap = float(np.linalg.norm(arr @ arr.conj().T - arr.conj().T @ arr))
    if gap > NORMALITY_TOL:
        raise NotNormalError(f"operator fails normality by {gap:.3e} (tol {NORMALITY_TOL:.1e})")
    values, vectors = _eigensystem(arr)
    clusters = _cluster_indices(values, cluster_tol)
    cluster_values = []
    projectors = []
    for idx in clusters:
        cluster_values.append(complex(np.mean(values[idx])))
        block = vectors[:, idx]
        projectors.append(block @ block.conj().T)
    measure = QuantumMeasure(
        elements=tuple(frozen_array(p) for p in projectors),
        labels=tuple(f"ev{k}" for k in range(len(projectors))),
        dim=arr.shape[0],
    )
    return SpectralDecomposition(
        eigenvalues=np.asarray(cluster_values),
        projectors=measure,
        cluster_tol=cluster_tol,
    )


def born_probabilities_pure(psi, basis) -> np.ndarray:
    """Squared amplitudes p_k = |phi_k* psi|^2 for a normalized pure state.

    ``basis`` is a sequence of orthonormal vectors; probabilities sum to
    one when it is complete.
    """
    vec = as_complex_vector(psi, "state vector")
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > NORM_TOL:
        raise NotNormalizedError(f"state vector has norm {norm!r}")
    rows = np.stack([as_complex_vector(phi, "basis vector") for phi in basis])
    if rows.shape[1] != vec.shape[0]:
        raise DimensionMismatchError(f"basis dim {rows.shape[1]} != state dim {vec.shape[0]}")
    gram = rows.conj() @ rows.T
    gap = float(np.max(np.abs(gram - np.eye(rows.shape[0]))))
    if gap > NORM_TOL:
        raise NotOrthonormalError(f"basis fails orthonormality by {gap:.3e}")
    amplitudes = rows.conj() @ vec
    return np.abs(amplitudes) ** 2


def function_calculus(decomp: SpectralDecomposition, f) -> np.ndarray:
    """f(X*, X) = sum_k f(conj(lambda_k), lambda_k) P_k on a projective decomposition."""
    out = np.zeros((decomp.projectors.dim,) * 2, dtype=complex)
    for value, projector in zip(decomp.eigenvalues, decomp.projectors.elements):
        out = out + complex(f(np.conj(value), value)) * projector
    return out


@dataclass(frozen=True)
class ProjectiveRatesReport:
    """Eigenspace rates of a Hermitian quantity, with the squared-amplitude cross-check.

    The amplitude route applies only to normalized pure states measured
    against nondegenerate spectra; otherwise those fields are None.
    """

    eigenvalues: np.ndarray
    rates: np.ndarray
    amplitude_probabilities: np.ndarray | None
    max_deviation: float | None


def projective_rates_equal_povm_rates(
    x,
    rho: DensityOperator,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
) -> ProjectiveRatesReport:
    """Compare eigenspace projector rates with squared-amplitude probabilities.

    Rates tr(rho P_k) are always computed.  When rho is a normalized pure
    state and every eigenspace is one-dimensional, p_k = |phi_k* psi|^2 is
    evaluated independently and the max deviation reported.
    """
    arr = require_hermitian(x, name="quantity")
    decomp = spectral_measure(arr, cluster_tol)
    rates = response_rates(decomp.projectors, rho)

    probabilities = None
    deviation = None
    one_dim = all(abs(np.trace(p).real - 1.0) <= 1e-8 for p in decomp.projectors.elements)
    state_values, state_vectors = np.linalg.eigh(rho.matrix)
    pure = state_values[:-1].max() <= 1e-10 if rho.dim > 1 else True
    if one_dim and pure and abs(rho.intensity - 1.0) <= NORM_TOL:
        psi = state_vectors[:, -1]
        values, vectors = _eigensystem(arr)
        order = [idx[0] for idx in _cluster_indices(values, cluster_tol)]
        basis = [vectors[:, i] for i in order]
        probabilities = born_probabilities_pure(psi, basis)
        deviation = float(np.max(np.abs(rates - probabilities)))
    return ProjectiveRatesReport(
        eigenvalues=decomp.eigenvalues,
        rates=rates,
        amplitude_probabilities=probabilities,
        max_deviation=deviation,
    )
