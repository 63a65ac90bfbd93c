"""Quantum measures, scales, detectors, and detector response checks.

A quantum measure is a finite family of Hermitian positive semidefinite
operators summing to the identity.  Pairing a measure with a scale (one
complex vector per detection element) gives a detector; the detector
measures the operator built from the scale-weighted elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyStateError,
    IncompleteSumError,
    LabelCollisionError,
    NegativeRateError,
    NotHermitianError,
    NotPSDError,
    ZeroElementError,
)
from .operators import (
    HERMITIAN_TOL,
    PSD_TOL,
    DensityOperator,
    as_complex_matrix,
    frozen_array,
    hermitian_deviation,
    trace_product,
)

COMPLETENESS_TOL = 1e-10
RATE_CLIP_TOL = 1e-12
PROJECTIVE_TOL = 1e-10


@dataclass(frozen=True)
class QuantumMeasure:
    """Finite family of Hermitian PSD operators summing to the identity."""

    elements: tuple
    labels: tuple
    dim: int

    def __post_init__(self):
        if not self.elements:
            raise IncompleteSumError("a measure needs at least one element")
        if len(self.labels) != len(self.elements):
            raise LabelCollisionError(
                f"{len(self.labels)} labels for {len(self.elements)} elements"
            )
        if len(set(self.labels)) != len(self.labels):
            raise LabelCollisionError(f"duplicate labels in {self.labels}")
        total = np.zeros((self.dim, self.dim), dtype=complex)
        for label, element in zip(self.labels, self.elements):
            if element.shape != (self.dim, self.dim):
                raise DimensionMismatchError(
                    f"element {label!r} has shape {element.shape}, expected {(self.dim, self.dim)}"
                )
            dev = hermitian_deviation(element)
            if dev > HERMITIAN_TOL:
                raise NotHermitianError(f"element {label!r} deviates from Hermitian by {dev:.3e}")
            if not np.any(element):
                raise ZeroElementError(f"element {label!r} is zero and can never respond")
            smallest = float(np.linalg.eigvalsh(element)[0])
            if smallest < -PSD_TOL:
                raise NotPSDError(f"element {label!r} has eigenvalue {smallest:.3e}")
            total += element
        gap = float(np.max(np.abs(total - np.eye(self.dim))))
        if gap > COMPLETENESS_TOL:
            raise IncompleteSumError(
                f"elements sum to identity only within {gap:.3e} (tol {COMPLETENESS_TOL:.1e})"
            )

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def make_measure(elements, labels: Sequence[str] | None = None) -> QuantumMeasure:
    """Validate a family of operators as a quantum measure.

    ``labels`` defaults to the element indices as strings.
    """
    arrays = [as_complex_matrix(e, f"element {k}") for k, e in enumerate(elements)]
    if not arrays:
        raise IncompleteSumError("a measure needs at least one element")
    dim = arrays[0].shape[0]
    if labels is None:
        labels = [str(k) for k in range(len(arrays))]
    return QuantumMeasure(
        elements=tuple(frozen_array(a) for a in arrays),
        labels=tuple(str(l) for l in labels),
        dim=dim,
    )


@dataclass(frozen=True)
class Scale:
    """Assignment of one complex vector (uniform length m >= 1) per detection element."""

    values: np.ndarray  # shape (K, m)
    units: str = ""

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=complex)
        if arr.ndim == 1:
            arr = arr[:, np.newaxis]
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"scale values must have shape (K, m), got {arr.shape}")
        object.__setattr__(self, "values", frozen_array(arr))

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def components(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class Detector:
    """A quantum measure together with the scale read off on each response."""

    measure: QuantumMeasure
    scale: Scale
    name: str = "detector"

    def __post_init__(self):
        if len(self.scale) != len(self.measure):
            raise DimensionMismatchError(
                f"scale has {len(self.scale)} values for {len(self.measure)} elements"
            )


def make_detector(measure: QuantumMeasure, scale_values, units: str = "", name: str = "detector") -> Detector:
    return Detector(measure=measure, scale=Scale(values=scale_values, units=units), name=name)


def response_rates(measure: QuantumMeasure, rho: DensityOperator) -> np.ndarray:
    """Mean response rates p_k = tr(rho P_k).

    Rates in ``[-RATE_CLIP_TOL, 0)`` are rounding dust and are clipped to
    zero; anything more negative signals an invalid input and raises.
    The rates sum to the intensity of the source.
    """
    if rho.dim != measure.dim:
        raise DimensionMismatchError(f"state dim {rho.dim} != measure dim {measure.dim}")
    rates = np.array([trace_product(rho.matrix, p).real for p in measure.elements])
    worst = float(rates.min())
    if worst < -RATE_CLIP_TOL:
        raise NegativeRateError(f"rate {worst:.3e} below -{RATE_CLIP_TOL:.1e}")
    return np.maximum(rates, 0.0)


def response_probabilities(measure: QuantumMeasure, rho: DensityOperator) -> np.ndarray:
    """Rates of the intensity-normalized state; these sum to one."""
    if rho.is_empty():
        raise EmptyStateError("response probabilities require positive intensity")
    return response_rates(measure, rho) / rho.intensity


def is_projective(measure: QuantumMeasure, tol: float = PROJECTIVE_TOL) -> bool:
    """True iff P_j P_k = delta_jk P_k entrywise within tol."""
    for j, pj in enumerate(measure.elements):
        for k, pk in enumerate(measure.elements):
            product = pj @ pk
            target = pk if j == k else 0.0
            if float(np.max(np.abs(product - target))) > tol:
                return False
    return True


def measured_quantity(detector: Detector) -> list[np.ndarray]:
    """Operators X_j = sum_k (x_k)_j P_k, one per scale component."""
    values = detector.scale.values
    out = []
    for j in range(values.shape[1]):
        x = np.zeros((detector.measure.dim,) * 2, dtype=complex)
        for coeff, element in zip(values[:, j], detector.measure.elements):
            x = x + coeff * element
        out.append(x)
    return out


def statistical_expectation(
    detector: Detector,
    rho: DensityOperator,
    f: Callable[[np.ndarray], np.ndarray] | None = None,
) -> np.ndarray:
    """E(f(x_k)) = sum_k q_k f(x_k) with q_k the response probabilities.

    ``f`` receives each scale value as a length-m complex vector and
    defaults to the identity, in which case the result equals the quantum
    expectation of the measured quantity, componentwise.
    """
    q = response_probabilities(detector.measure, rho)
    values = detector.scale.values
    if f is not None:
        values = np.stack([np.atleast_1d(np.asarray(f(x), dtype=complex)) for x in values])
    return values.T @ q.astype(complex)


@dataclass(frozen=True)
class DrpLinearityReport:
    """Deviations from the detector response principle for a convex-cone combination."""

    alpha: float
    beta: float
    max_rate_deviation: float
    intensity_deviation: float


def drp_linearity_report(
    measure: QuantumMeasure,
    rho1: DensityOperator,
    rho2: DensityOperator,
    alpha: float,
    beta: float,
) -> DrpLinearityReport:
    """Check that rates are linear in the state and sum to the intensity.

    Reports max_k |p_k(a rho1 + b rho2) - a p_k(rho1) - b p_k(rho2)| and
    |sum_k p_k - intensity| for the combined state.
    """
    if alpha < 0.0 or beta < 0.0:
        raise ValueError("coefficients must be nonnegative")
    if rho1.dim != rho2.dim:
        raise DimensionMismatchError(f"state dims {rho1.dim} and {rho2.dim} differ")
    combined = DensityOperator(
        matrix=frozen_array(alpha * rho1.matrix + beta * rho2.matrix),
        intensity=alpha * rho1.intensity + beta * rho2.intensity,
    )
    combined_rates = response_rates(measure, combined)
    mixed = alpha * response_rates(measure, rho1) + beta * response_rates(measure, rho2)
    return DrpLinearityReport(
        alpha=alpha,
        beta=beta,
        max_rate_deviation=float(np.max(np.abs(combined_rates - mixed))),
        intensity_deviation=abs(float(combined_rates.sum()) - combined.intensity),
    )
