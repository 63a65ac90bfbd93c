import numpy as np
import pytest
from conftest import random_density, random_measure, random_unitary

from bornkit import (
    CalibrationSet,
    MaxEntProblem,
    Scale,
    make_smatrix,
    naimark_dilate,
    response_rates,
    sample_events,
    spectral_measure,
    verify_born_povm,
)
from bornkit import serialize
from bornkit.errors import ParseError
from bornkit.standard import PAULI_Z, maximally_mixed, trine_detector, trine_measure


def test_complex_pairs():
    assert serialize.complex_to_pair(1.5 - 2.0j) == [1.5, -2.0]
    assert serialize.pair_to_complex([1.5, -2.0]) == 1.5 - 2.0j
    with pytest.raises(ParseError):
        serialize.pair_to_complex([1.0])
    with pytest.raises(ParseError):
        serialize.pair_to_complex("nope")


def test_matrix_row_major_round_trip():
    rng = np.random.default_rng(81)
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    data = serialize.matrix_to_json(m)
    assert data[0][1] == [m[0, 1].real, m[0, 1].imag]
    np.testing.assert_array_equal(serialize.json_to_matrix(data), m)


def _double_write(to_json, from_json, obj):
    first = serialize.dumps_canonical(to_json(obj))
    second = serialize.dumps_canonical(to_json(from_json(to_json(obj))))
    return first, second


def test_density_round_trip_is_byte_identical():
    rng = np.random.default_rng(82)
    first, second = _double_write(
        serialize.density_to_json, serialize.json_to_density, random_density(rng, 3)
    )
    assert first == second


def test_measure_round_trip_is_byte_identical():
    rng = np.random.default_rng(83)
    for measure in (trine_measure(), random_measure(rng, 3, 4)):
        first, second = _double_write(
            serialize.measure_to_json, serialize.json_to_measure, measure
        )
        assert first == second


def test_scale_round_trip():
    scale = Scale(values=np.array([[1.0 + 2.0j, 0.5], [0.0, -1.0j]]), units="arb")
    first, second = _double_write(serialize.scale_to_json, serialize.json_to_scale, scale)
    assert first == second
    rebuilt = serialize.json_to_scale(serialize.scale_to_json(scale))
    assert rebuilt.units == "arb"
    np.testing.assert_array_equal(rebuilt.values, scale.values)


def test_eventlog_round_trip():
    log = sample_events(trine_detector(), maximally_mixed(2), 1000, seed=3)
    data = serialize.eventlog_to_json(log)
    assert set(data) == {"detector_id", "seed", "total", "counts"}
    rebuilt = serialize.json_to_eventlog(data)
    assert (rebuilt.detector_id, rebuilt.seed, rebuilt.total) == (log.detector_id, log.seed, log.total)
    np.testing.assert_array_equal(rebuilt.counts, log.counts)
    first, second = _double_write(serialize.eventlog_to_json, serialize.json_to_eventlog, log)
    assert first == second


def test_smatrix_round_trip():
    rng = np.random.default_rng(84)
    s = make_smatrix(random_unitary(rng, 4), channel_labels=("a", "b", "c", "d"))
    first, second = _double_write(serialize.smatrix_to_json, serialize.json_to_smatrix, s)
    assert first == second


def test_calibration_round_trip():
    states = (maximally_mixed(2), maximally_mixed(2))
    rates = np.stack([response_rates(trine_measure(), s) for s in states])
    cal = CalibrationSet(states=states, rates=rates)
    first, second = _double_write(
        serialize.calibration_to_json, serialize.json_to_calibration, cal
    )
    assert first == second


def test_maxent_round_trip():
    problem = MaxEntProblem(operators=(PAULI_Z,), targets=(0.25,))
    first, second = _double_write(serialize.maxent_to_json, serialize.json_to_maxent, problem)
    assert first == second


def test_decomposition_and_dilation_serialize():
    decomp = spectral_measure(PAULI_Z)
    data = serialize.decomposition_to_json(decomp)
    assert set(data) == {"eigenvalues", "projectors", "cluster_tol"}
    dil = naimark_dilate(trine_measure())
    data = serialize.dilation_to_json(dil)
    assert set(data) == {"V", "projective_measure"}
    np.testing.assert_array_equal(serialize.json_to_matrix(data["V"]), dil.isometry)


def test_verification_report_fields():
    report = verify_born_povm(trine_detector(), maximally_mixed(2), 1000, seed=5)
    data = serialize.verification_to_json(report)
    assert data["passed"] is True
    assert len(data["expected"]) == 3
