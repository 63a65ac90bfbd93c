"""Standard qubit fixtures: Pauli operators, basis measures, the trine POVM."""

from __future__ import annotations

import numpy as np

from .measures import Detector, QuantumMeasure, Scale, make_measure
from .operators import DensityOperator, frozen_array, pure_state

PAULI_X = frozen_array(np.array([[0, 1], [1, 0]], dtype=complex))
PAULI_Y = frozen_array(np.array([[0, -1j], [1j, 0]], dtype=complex))
PAULI_Z = frozen_array(np.array([[1, 0], [0, -1]], dtype=complex))
HADAMARD = frozen_array(np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0))


def basis_state(dim: int, index: int) -> np.ndarray:
    vec = np.zeros(dim, dtype=complex)
    vec[index] = 1.0
    return vec


def plus_state() -> np.ndarray:
    return np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)


def maximally_mixed(dim: int) -> DensityOperator:
    return DensityOperator(matrix=frozen_array(np.eye(dim, dtype=complex) / dim), intensity=1.0)


def basis_measure(dim: int, labels=None) -> QuantumMeasure:
    """Projective measure onto the computational basis."""
    elements = []
    for k in range(dim):
        p = np.zeros((dim, dim), dtype=complex)
        p[k, k] = 1.0
        elements.append(p)
    return make_measure(elements, labels)


def z_detector(scale_values=(1.0, -1.0), units: str = "", name: str = "z") -> Detector:
    return Detector(
        measure=basis_measure(2, labels=("up", "down")),
        scale=Scale(values=scale_values, units=units),
        name=name,
    )


def stern_gerlach_detector(hbar: float, name: str = "stern-gerlach") -> Detector:
    """Spin-z detector reading +-hbar/2, the eigenvalue scale of (hbar/2) sigma_z."""
    return z_detector(scale_values=(hbar / 2.0, -hbar / 2.0), units="J*s", name=name)


def trine_angles() -> np.ndarray:
    return np.array([0.0, 2.0 * np.pi / 3.0, 4.0 * np.pi / 3.0])


def trine_states() -> list[np.ndarray]:
    """Real-amplitude qubit states at Bloch angles 0, 2pi/3, 4pi/3 in the x-z plane."""
    return [
        np.array([np.cos(theta / 2.0), np.sin(theta / 2.0)], dtype=complex)
        for theta in trine_angles()
    ]


def trine_measure() -> QuantumMeasure:
    """Nonprojective qubit measure {(2/3) |phi_k><phi_k|}; the elements sum to one."""
    elements = [(2.0 / 3.0) * np.outer(phi, phi.conj()) for phi in trine_states()]
    return make_measure(elements, labels=("t0", "t1", "t2"))


def trine_bloch_scale(units: str = "") -> Scale:
    """Bloch unit vectors (sin t, 0, cos t) of the trine states, as 3-vectors."""
    values = [[np.sin(theta), 0.0, np.cos(theta)] for theta in trine_angles()]
    return Scale(values=values, units=units)


def trine_detector(name: str = "trine") -> Detector:
    return Detector(measure=trine_measure(), scale=trine_bloch_scale(), name=name)


def pauli_calibration_states() -> list[DensityOperator]:
    """Informationally complete qubit set: (I +- sigma_i)/2 for i in x, y, z, plus I/2."""
    eye = np.eye(2, dtype=complex)
    states = []
    for sigma in (PAULI_X, PAULI_Y, PAULI_Z):
        for sign in (1.0, -1.0):
            states.append(DensityOperator(matrix=frozen_array((eye + sign * sigma) / 2.0), intensity=1.0))
    states.append(maximally_mixed(2))
    return states


def ket_density(amplitudes) -> DensityOperator:
    """Shorthand for the pure state of the given amplitudes."""
    return pure_state(np.asarray(amplitudes, dtype=complex))
