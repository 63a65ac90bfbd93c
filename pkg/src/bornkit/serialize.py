"""JSON wire format: complex numbers as [re, im] pairs, matrices row-major.

Every object round-trips write -> read -> write to byte-identical JSON,
which keeps fixtures diff-friendly and reports deterministic.
"""

from __future__ import annotations

import json

import numpy as np

from .dilation import Dilation
from .errors import ParseError
from .measures import Detector, QuantumMeasure, Scale
from .operators import DensityOperator, make_density
from .sampling import EventLog, VerificationReport
from .scattering import SMatrix, make_smatrix
from .spectral import SpectralDecomposition
from .tomography import CalibrationSet, MaxEntProblem


def complex_to_pair(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def pair_to_complex(pair) -> complex:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise ParseError(f"complex scalar must be a [re, im] pair, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def vector_to_json(vec) -> list:
    return [complex_to_pair(z) for z in np.asarray(vec, dtype=complex)]


def json_to_vector(data) -> np.ndarray:
    return np.array([pair_to_complex(p) for p in data], dtype=complex)


def matrix_to_json(matrix) -> list:
    return [vector_to_json(row) for row in np.asarray(matrix, dtype=complex)]


def json_to_matrix(data) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise ParseError(f"matrix must be a nonempty nested list, got {type(data).__name__}")
    return np.stack([json_to_vector(row) for row in data])


def real_vector_to_json(vec) -> list[float]:
    return [float(v) for v in np.asarray(vec, dtype=float)]


def density_to_json(rho: DensityOperator) -> dict:
    return {"matrix": matrix_to_json(rho.matrix)}


def json_to_density(data) -> DensityOperator:
    return make_density(json_to_matrix(data["matrix"]))


def measure_to_json(measure: QuantumMeasure) -> dict:
    return {
        "dim": measure.dim,
        "labels": list(measure.labels),
        "elements": [matrix_to_json(p) for p in measure.elements],
    }


def json_to_measure(data) -> QuantumMeasure:
    from .measures import make_measure

    return make_measure(
        [json_to_matrix(e) for e in data["elements"]],
        labels=data.get("labels"),
    )


def scale_to_json(scale: Scale) -> dict:
    return {
        "values": [vector_to_json(v) for v in scale.values],
        "units": scale.units,
    }


def json_to_scale(data) -> Scale:
    return Scale(
        values=np.stack([json_to_vector(v) for v in data["values"]]),
        units=data.get("units", ""),
    )


def detector_to_json(detector: Detector) -> dict:
    return {
        "name": detector.name,
        "measure": measure_to_json(detector.measure),
        "scale": scale_to_json(detector.scale),
    }


def eventlog_to_json(log: EventLog) -> dict:
    return {
        "detector_id": log.detector_id,
        "seed": log.seed,
        "total": log.total,
        "counts": [int(c) for c in log.counts],
    }


def json_to_eventlog(data) -> EventLog:
    return EventLog(
        detector_id=data["detector_id"],
        seed=int(data["seed"]),
        total=int(data["total"]),
        counts=np.asarray(data["counts"], dtype=np.int64),
    )


def verification_to_json(report: VerificationReport) -> dict:
    return {
        "kind": report.kind,
        "detector_id": report.detector_id,
        "n": report.n,
        "seed": report.seed,
        "expected": vector_to_json(report.expected),
        "observed": vector_to_json(report.observed),
        "deviations": real_vector_to_json(report.deviations),
        "bounds": real_vector_to_json(report.bounds),
        "passed": report.passed,
    }


def decomposition_to_json(decomp: SpectralDecomposition) -> dict:
    return {
        "eigenvalues": vector_to_json(decomp.eigenvalues),
        "projectors": measure_to_json(decomp.projectors),
        "cluster_tol": decomp.cluster_tol,
    }


def dilation_to_json(dilation: Dilation) -> dict:
    return {
        "V": matrix_to_json(dilation.isometry),
        "projective_measure": measure_to_json(dilation.projective_measure),
    }


def calibration_to_json(cal: CalibrationSet) -> dict:
    return {
        "states": [density_to_json(s) for s in cal.states],
        "rates": [real_vector_to_json(row) for row in cal.rates],
    }


def json_to_calibration(data) -> CalibrationSet:
    return CalibrationSet(
        states=tuple(json_to_density(s) for s in data["states"]),
        rates=np.asarray(data["rates"], dtype=float),
    )


def maxent_to_json(problem: MaxEntProblem) -> dict:
    return {
        "operators": [matrix_to_json(x) for x in problem.operators],
        "targets": [float(v) for v in problem.targets],
        "dim": problem.dim,
        "tolerance": problem.tolerance,
        "max_iterations": problem.max_iterations,
    }


def json_to_maxent(data) -> MaxEntProblem:
    return MaxEntProblem(
        operators=tuple(json_to_matrix(x) for x in data["operators"]),
        targets=tuple(float(v) for v in data["targets"]),
        dim=data.get("dim"),
        tolerance=float(data.get("tolerance", 1e-8)),
        max_iterations=int(data.get("max_iterations", 200)),
    )


def smatrix_to_json(s: SMatrix) -> dict:
    return {
        "dim": s.dim,
        "channel_labels": list(s.channel_labels),
        "matrix": matrix_to_json(s.matrix),
    }


def json_to_smatrix(data, require_unitary: bool = True) -> SMatrix:
    return make_smatrix(
        json_to_matrix(data["matrix"]),
        channel_labels=data.get("channel_labels"),
        require_unitary=require_unitary,
    )


def dumps_canonical(obj) -> str:
    """Stable JSON rendering used for all files the toolkit writes."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
