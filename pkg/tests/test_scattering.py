import numpy as np
import pytest
from conftest import random_unit_vector, random_unitary

from bornkit import (
    born_probabilities_pure,
    degenerate_channel_probability,
    make_smatrix,
    transition_distribution,
    transition_probability,
    unitarity_report,
)
from bornkit.errors import (
    DimensionMismatchError,
    NotNormalizedError,
    NotOrthonormalError,
    NotProjectorError,
    NotUnitaryError,
)
from bornkit.scattering import NonunitaryWarning
from bornkit.standard import HADAMARD, basis_state


class TestTransitionProbability:
    def test_identity_scattering(self):
        s = make_smatrix(np.eye(2))
        e1 = basis_state(2, 0)
        assert transition_probability(s, e1, e1) == pytest.approx(1.0)

    def test_orthogonal_out_state(self):
        s = make_smatrix(np.eye(2))
        assert transition_probability(s, basis_state(2, 0), basis_state(2, 1)) == pytest.approx(0.0)

    def test_hadamard_half(self):
        s = make_smatrix(HADAMARD)
        e1 = basis_state(2, 0)
        assert transition_probability(s, e1, e1) == pytest.approx(0.5)

    def test_unnormalized_states_rejected(self):
        s = make_smatrix(np.eye(2))
        with pytest.raises(NotNormalizedError):
            transition_probability(s, [1.0, 1.0], basis_state(2, 0))

    def test_dimension_mismatch(self):
        s = make_smatrix(np.eye(2))
        with pytest.raises(DimensionMismatchError):
            transition_probability(s, basis_state(3, 0), basis_state(3, 1))

    def test_symmetry_under_adjoint(self):
        # Pr(out|in) under S equals Pr(in|out) under S*
        rng = np.random.default_rng(71)
        for _ in range(25):
            dim = int(rng.integers(2, 7))
            s = make_smatrix(random_unitary(rng, dim))
            s_adj = make_smatrix(s.matrix.conj().T)
            vin, vout = random_unit_vector(rng, dim), random_unit_vector(rng, dim)
            forward = transition_probability(s, vin, vout)
            backward = transition_probability(s_adj, vout, vin)
            assert abs(forward - backward) <= 1e-12

    def test_nonunitary_accepted_with_warning(self):
        s = make_smatrix(0.9 * np.eye(2), require_unitary=False)
        with pytest.warns(NonunitaryWarning):
            p = transition_probability(s, basis_state(2, 0), basis_state(2, 0))
        assert p == pytest.approx(0.81)


class TestTransitionDistribution:
    def test_identity_gives_indicator(self):
        s = make_smatrix(np.eye(3))
        dist = transition_distribution(s, basis_state(3, 1))
        np.testing.assert_allclose(dist, [0.0, 1.0, 0.0])

    def test_hadamard_row(self):
        s = make_smatrix(HADAMARD)
        np.testing.assert_allclose(transition_distribution(s, basis_state(2, 0)), [0.5, 0.5])

    def test_random_unitary_conserves_probability(self):
        rng = np.random.default_rng(72)
        for _ in range(50):
            dim = int(rng.integers(2, 9))
            s = make_smatrix(random_unitary(rng, dim))
            dist = transition_distribution(s, random_unit_vector(rng, dim))
            assert abs(dist.sum() - 1.0) <= 1e-10

    def test_custom_out_basis(self):
        rng = np.random.default_rng(73)
        s = make_smatrix(random_unitary(rng, 4))
        basis = random_unitary(rng, 4).T
        dist = transition_distribution(s, basis_state(4, 0), out_basis=basis)
        assert abs(dist.sum() - 1.0) <= 1e-10

    def test_incomplete_basis_rejected(self):
        s = make_smatrix(np.eye(3))
        with pytest.raises(NotOrthonormalError):
            transition_distribution(s, basis_state(3, 0), out_basis=[basis_state(3, 0)])

    def test_nonunitary_rejected(self):
        s = make_smatrix(0.9 * np.eye(2), require_unitary=False)
        with pytest.raises(NotUnitaryError):
            transition_distribution(s, basis_state(2, 0))


class TestDegenerateChannel:
    def test_full_projector_is_certain(self):
        rng = np.random.default_rng(74)
        s = make_smatrix(random_unitary(rng, 4))
        p = degenerate_channel_probability(s, random_unit_vector(rng, 4), np.eye(4))
        assert p == pytest.approx(1.0)

    def test_rank_one_identity_channel(self):
        s = make_smatrix(np.eye(2))
        pi = np.diag([1.0, 0.0])
        assert degenerate_channel_probability(s, basis_state(2, 0), pi) == pytest.approx(1.0)

    def test_column_sum_oracle(self):
        # probability into span{e1, e2} is |S11|^2 + |S21|^2 for psi_in = e1
        rng = np.random.default_rng(75)
        s = make_smatrix(random_unitary(rng, 3))
        pi = np.diag([1.0, 1.0, 0.0])
        expected = abs(s.matrix[0, 0]) ** 2 + abs(s.matrix[1, 0]) ** 2
        assert degenerate_channel_probability(s, basis_state(3, 0), pi) == pytest.approx(expected)

    def test_basis_independence(self):
        rng = np.random.default_rng(76)
        for _ in range(25):
            dim = int(rng.integers(3, 7))
            rank = int(rng.integers(1, dim))
            frame = random_unitary(rng, dim)[:, :rank]
            pi = frame @ frame.conj().T
            s = make_smatrix(random_unitary(rng, dim))
            vin = random_unit_vector(rng, dim)
            direct = degenerate_channel_probability(s, vin, pi)
            # sum over two different orthonormal bases of the range
            mixer = random_unitary(rng, rank)
            for basis in (frame, frame @ mixer):
                summed = sum(
                    abs(np.vdot(basis[:, m], s.matrix @ vin)) ** 2 for m in range(rank)
                )
                assert abs(direct - summed) <= 1e-10

    def test_rejects_non_projector(self):
        s = make_smatrix(np.eye(2))
        with pytest.raises(NotProjectorError):
            degenerate_channel_probability(s, basis_state(2, 0), 0.5 * np.eye(2))


class TestUnitarityReport:
    def test_identity(self):
        assert unitarity_report(np.eye(4)) == 0.0

    def test_contraction_is_flagged(self):
        deviation = unitarity_report(0.9 * np.eye(3))
        assert deviation == pytest.approx(0.19 * np.sqrt(3.0))
        with pytest.raises(NotUnitaryError):
            make_smatrix(0.9 * np.eye(3))

    def test_hadamard_is_exactly_unitary(self):
        assert unitarity_report(HADAMARD) <= 1e-15


def test_finite_spectral_form_implies_scattering_form():
    # with psi = S psi_in and rank-1 projectors, squared amplitudes equal
    # the transition probabilities channel by channel
    rng = np.random.default_rng(77)
    for _ in range(20):
        dim = int(rng.integers(2, 6))
        s = make_smatrix(random_unitary(rng, dim))
        vin = random_unit_vector(rng, dim)
        psi = s.matrix @ vin
        channels = [basis_state(dim, k) for k in range(dim)]
        amplitudes = born_probabilities_pure(psi, channels)
        transitions = [transition_probability(s, vin, phi) for phi in channels]
        np.testing.assert_allclose(amplitudes, transitions, atol=1e-12)


def test_channel_labels():
    s = make_smatrix(np.eye(2), channel_labels=("n=1,l=0", "n=2,l=1"))
    assert s.channel_labels == ("n=1,l=0", "n=2,l=1")
    from bornkit.errors import LabelCollisionError

    with pytest.raises(LabelCollisionError):
        make_smatrix(np.eye(2), channel_labels=("a", "a"))
