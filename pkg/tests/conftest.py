"""Seeded random object generators shared across the test suite."""

from __future__ import annotations

import numpy as np

from bornkit import DensityOperator, QuantumMeasure, make_density, make_measure, pure_state
from bornkit.operators import frozen_array


def random_complex(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = random_complex(rng, (dim, dim))
    return (a + a.conj().T) / 2.0


def random_psd(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = random_complex(rng, (dim, dim))
    return a @ a.conj().T


def random_density(rng: np.random.Generator, dim: int, intensity: float | None = None) -> DensityOperator:
    rho = make_density(random_psd(rng, dim))
    if intensity is None:
        return rho
    return DensityOperator(matrix=frozen_array(rho.matrix * (intensity / rho.intensity)), intensity=intensity)


def random_pure(rng: np.random.Generator, dim: int) -> DensityOperator:
    psi = random_complex(rng, dim)
    return pure_state(psi / np.linalg.norm(psi))


def random_unit_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    psi = random_complex(rng, dim)
    return psi / np.linalg.norm(psi)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    q, r = np.linalg.qr(random_complex(rng, (dim, dim)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_measure(rng: np.random.Generator, dim: int, elements: int) -> QuantumMeasure:
    """Random POVM: PSD draws whitened by the inverse square root of their sum."""
    draws = [random_psd(rng, dim) for _ in range(elements)]
    total = sum(draws)
    values, vectors = np.linalg.eigh(total)
    inv_root = (vectors / np.sqrt(values)) @ vectors.conj().T
    return make_measure([inv_root @ w @ inv_root for w in draws])
