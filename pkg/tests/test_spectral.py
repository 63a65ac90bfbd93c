import numpy as np
import pytest
from conftest import random_hermitian, random_unit_vector, random_unitary

from bornkit import (
    Detector,
    Scale,
    born_probabilities_pure,
    function_calculus,
    is_projective,
    make_density,
    measured_quantity,
    projective_rates_equal_povm_rates,
    pure_state,
    spectral_measure,
)
from bornkit.errors import NotNormalError, NotNormalizedError, NotOrthonormalError
from bornkit.standard import PAULI_X, PAULI_Z, ket_density, maximally_mixed


class TestSpectralMeasure:
    def test_sigma_z(self):
        decomp = spectral_measure(PAULI_Z)
        np.testing.assert_allclose(sorted(decomp.eigenvalues.real), [-1.0, 1.0])
        for value, projector in zip(decomp.eigenvalues, decomp.projectors.elements):
            expected = np.diag([1.0, 0.0]) if value.real > 0 else np.diag([0.0, 1.0])
            np.testing.assert_allclose(projector, expected, atol=1e-14)

    def test_identity_is_one_degenerate_cluster(self):
        decomp = spectral_measure(np.eye(3))
        assert len(decomp.eigenvalues) == 1
        assert decomp.eigenvalues[0] == pytest.approx(1.0)
        np.testing.assert_allclose(decomp.projectors.elements[0], np.eye(3), atol=1e-14)

    def test_sigma_x_projectors_are_hadamard_rotated(self):
        decomp = spectral_measure(PAULI_X)
        targets = {1.0: (np.eye(2) + PAULI_X) / 2.0, -1.0: (np.eye(2) - PAULI_X) / 2.0}
        for value, projector in zip(decomp.eigenvalues, decomp.projectors.elements):
            np.testing.assert_allclose(projector, targets[round(value.real)], atol=1e-12)

    def test_degenerate_pair_clusters(self):
        decomp = spectral_measure(np.diag([2.0, 2.0, 5.0]))
        assert len(decomp.eigenvalues) == 2
        multiplicities = sorted(round(np.trace(p).real) for p in decomp.projectors.elements)
        assert multiplicities == [1, 2]

    def test_defective_operator_rejected(self):
        with pytest.raises(NotNormalError):
            spectral_measure(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_normal_non_hermitian(self):
        decomp = spectral_measure(np.diag([1j, -1j]))
        assert sorted(v.imag for v in decomp.eigenvalues) == [-1.0, 1.0]

    def test_complex_plane_clustering(self):
        decomp = spectral_measure(np.diag([1j, 1j + 5e-9, -1j]), cluster_tol=1e-8)
        assert len(decomp.eigenvalues) == 2

    def test_invariants_on_random_hermitian(self):
        rng = np.random.default_rng(41)
        for _ in range(50):
            dim = int(rng.integers(2, 9))
            x = random_hermitian(rng, dim)
            decomp = spectral_measure(x)
            assert np.linalg.norm(decomp.reconstruct() - x) <= 1e-9
            assert is_projective(decomp.projectors, tol=1e-8)
            for value, projector in zip(decomp.eigenvalues, decomp.projectors.elements):
                assert np.max(np.abs(x @ projector - value * projector)) <= 1e-8

    def test_unitary_spectrum(self):
        rng = np.random.default_rng(42)
        u = random_unitary(rng, 4)
        decomp = spectral_measure(u)
        np.testing.assert_allclose(np.abs(decomp.eigenvalues), 1.0, atol=1e-10)
        assert np.linalg.norm(decomp.reconstruct() - u) <= 1e-9


class TestBornProbabilitiesPure:
    def test_basis_state(self):
        p = born_probabilities_pure([1.0, 0.0], [[1.0, 0.0], [0.0, 1.0]])
        np.testing.assert_allclose(p, [1.0, 0.0])

    def test_squared_cosine(self):
        psi = [np.cos(np.pi / 6.0), np.sin(np.pi / 6.0)]
        p = born_probabilities_pure(psi, [[1.0, 0.0], [0.0, 1.0]])
        np.testing.assert_allclose(p, [0.75, 0.25])

    def test_plus_basis_eigenstate(self):
        plus = np.array([1.0, 1.0]) / np.sqrt(2.0)
        minus = np.array([1.0, -1.0]) / np.sqrt(2.0)
        p = born_probabilities_pure(plus, [plus, minus])
        np.testing.assert_allclose(p, [1.0, 0.0], atol=1e-15)

    def test_complete_basis_sums_to_one(self):
        rng = np.random.default_rng(43)
        basis = random_unitary(rng, 5).T
        psi = random_unit_vector(rng, 5)
        p = born_probabilities_pure(psi, basis)
        assert p.sum() == pytest.approx(1.0, abs=1e-10)

    def test_unnormalized_state_rejected(self):
        with pytest.raises(NotNormalizedError):
            born_probabilities_pure([1.0, 1.0], [[1.0, 0.0], [0.0, 1.0]])

    def test_skewed_basis_rejected(self):
        with pytest.raises(NotOrthonormalError):
            born_probabilities_pure([1.0, 0.0], [[1.0, 0.0], [0.6, 0.8]])


class TestFunctionCalculus:
    def test_identity_function(self):
        decomp = spectral_measure(PAULI_Z)
        np.testing.assert_allclose(function_calculus(decomp, lambda xb, x: x), PAULI_Z, atol=1e-14)

    def test_square_of_involution(self):
        decomp = spectral_measure(PAULI_Z)
        np.testing.assert_allclose(function_calculus(decomp, lambda xb, x: x**2), np.eye(2), atol=1e-14)

    def test_modulus_squared_on_complex_spectrum(self):
        decomp = spectral_measure(np.diag([1j, -1j]))
        np.testing.assert_allclose(function_calculus(decomp, lambda xb, x: xb * x), np.eye(2), atol=1e-14)


class TestProjectiveVsPovmRates:
    def test_sigma_z_on_basis_state(self):
        report = projective_rates_equal_povm_rates(PAULI_Z, ket_density([1, 0]))
        np.testing.assert_allclose(sorted(report.rates), [0.0, 1.0], atol=1e-14)
        assert report.max_deviation is not None and report.max_deviation <= 1e-10

    def test_sigma_x_on_basis_state(self):
        report = projective_rates_equal_povm_rates(PAULI_X, ket_density([1, 0]))
        np.testing.assert_allclose(report.rates, [0.5, 0.5], atol=1e-12)
        np.testing.assert_allclose(report.amplitude_probabilities, [0.5, 0.5], atol=1e-12)
        assert report.max_deviation <= 1e-10

    def test_degenerate_mixed_case_skips_amplitudes(self):
        report = projective_rates_equal_povm_rates(np.diag([2.0, 2.0, 5.0]), maximally_mixed(3))
        np.testing.assert_allclose(sorted(report.rates), [1.0 / 3.0, 2.0 / 3.0], atol=1e-12)
        assert report.amplitude_probabilities is None
        assert report.max_deviation is None

    def test_random_pure_states_agree(self):
        rng = np.random.default_rng(44)
        for _ in range(25):
            dim = int(rng.integers(2, 6))
            x = random_hermitian(rng, dim)
            rho = pure_state(random_unit_vector(rng, dim))
            report = projective_rates_equal_povm_rates(x, rho)
            if report.max_deviation is not None:
                assert report.max_deviation <= 1e-10


def test_eigenvalue_scale_detector_round_trip():
    # measured_quantity(projectors, eigenvalue scale) rebuilds the operator
    rng = np.random.default_rng(45)
    for _ in range(25):
        dim = int(rng.integers(2, 9))
        x = random_hermitian(rng, dim)
        decomp = spectral_measure(x)
        detector = Detector(
            measure=decomp.projectors,
            scale=Scale(values=decomp.eigenvalues),
            name="eigen",
        )
        [rebuilt] = measured_quantity(detector)
        assert np.linalg.norm(rebuilt - x) <= 1e-9


def test_degenerate_probabilities_match_eigenspace_rates():
    # per-eigenvalue probabilities from the decomposition equal projector rates
    x = np.diag([2.0, 2.0, 5.0])
    rho = make_density(np.diag([0.2, 0.3, 0.5]))
    decomp = spectral_measure(x)
    rates = projective_rates_equal_povm_rates(x, rho).rates
    by_hand = {2.0: 0.5, 5.0: 0.5}
    for value, rate in zip(decomp.eigenvalues, rates):
        assert rate == pytest.approx(by_hand[round(value.real, 6)])
