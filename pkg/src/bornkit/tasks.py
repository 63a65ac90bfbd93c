"""Task execution: run configured tasks and collect a machine-readable report.

Each task yields exactly one result or one structured error; errors stop
the task, never the run.  Tasks run sequentially in config order unless
concurrency is requested, and the report always lists them in config
order.  Verification-style results carry a pass flag so the caller can
tell falsified physics apart from broken input.
"""

from __future__ import annotations

import hashlib
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__, serialize
from .config import ConfigState, ExperimentConfig, Task
from .dilation import dilated_rates, naimark_dilate
from .errors import BornkitError, ParseError
from .measures import is_projective, response_rates
from .sampling import sample_events, verify_born_c, verify_born_povm
from .scattering import (
    degenerate_channel_probability,
    transition_distribution,
    transition_probability,
    unitarity_report,
)
from .spectral import spectral_measure
from .tomography import maxent_state, reconstruct_measure

ENV_SEED = "BORNKIT_SEED"
DEFAULT_SEED = 0


@dataclass
class Overrides:
    """Command-line overrides; seed and n beat config values, env seed is the fallback."""

    seed: int | None = None
    n: int | None = None
    tol: float | None = None


def resolve_seed(params: dict, overrides: Overrides) -> int:
    if overrides.seed is not None:
        return overrides.seed
    if "seed" in params:
        return int(params["seed"])
    env = os.environ.get(ENV_SEED)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ParseError(f"{ENV_SEED} must be an integer, got {env!r}") from exc
    return DEFAULT_SEED


def _resolve_n(params: dict, overrides: Overrides, default: int = 100000) -> int:
    if overrides.n is not None:
        return overrides.n
    return int(params.get("n", default))


def _resolve_tol(params: dict, overrides: Overrides, key: str, default: float) -> float:
    if overrides.tol is not None:
        return overrides.tol
    return float(params.get(key, default))


def _run_validate(config: ExperimentConfig, params: dict, overrides: Overrides) -> dict:
    kinds = [k for k in ("state", "measure", "detector", "smatrix") if k in params]
    if len(kinds) != 1:
        raise ParseError("validate takes exactly one of state/measure/detector/smatrix")
    kind = kinds[0]
    target = params[kind]
    try:
        obj = getattr(config, kind)(target)
    except BornkitError as exc:
        return {
            "target": target,
            "valid": False,
            "passed": False,
            "error_type": type(exc).__name__,
            "message": str(exc),
        }
    result = {"target": target, "valid": True, "passed": True}
    if kind == "measure":
        result["projective"] = is_projective(obj)
    if kind == "smatrix":
        result["unitarity_deviation"] = obj.unitarity_deviation()
    if kind == "state":
        result["intensity"] = obj.density.intensity
    return result


def _run_rates(config: ExperimentConfig, params: dict, overrides: Overrides) -> dict:
    measure = config.measure(params["measure"])
    rho = config.state(params["state"]).density
    rates = response_rates(measure, rho)
    return {
        "labels": list(measure.labels),
        "rates": serialize.real_vector_to_json(rates),
        "intensity": rho.intensity,
        "rate_sum": float(rates.sum()),
    }


def _run_sample(config: ExperimentConfig, params: dict, overrides: Overrides) -> dict:
    detector = config.detector(params["detector"])
    rho = config.state(params["state"]).density
    log = sample_events(
        detector,
        rho,
        _resolve_n(params, overrides),
        resolve_seed(params, overrides),
        shards=int(params.get("shards", 1)),
    )
    return {"event_log": serialize.eventlog_to_json(log)}


def _run_verify_povm(config: ExperimentConfig, params: dict, overrides: Overrides) -> dict:
    detector = config.detector(params["detector"])
    rho = config.state(params["state"]).density
    expected = params.get("expected")
    report = verify_born_povm(
        detector,
        rho,
        _resolve_n(params, overrides),
        resolve_seed(params, overrides),
        k_sigma=float(params.get("k_sigma", 5.0)),
        expected=None if expected is None else np.asarray(expected, dtype=float),
    )
    out = serialize.verification_to_json(report)
    out["passed"] = report.passed
    return out


def _run_verify_c(config: ExperimentConfig, params: dict, overrides: Overrides) -> dict:
    detector = config.detector(params["detector"])
    rho = config.state(params["state"]).density
    report = verify_born_c(
        detector,
        rho,
        _resolve_n(params, overrides),
        resolve_seed(params, overrides),
        k_sigma=float(params.get("k_sigma", 5.0)),
    )
    out = serialize.verification_to_json(report)
    out["passed"] = report.passed
    return out


def _run_spectral(config: ExperimentConfig, params: dict, overrides: Overrides) -> dict:
    operator = config.operator(params["operator"])
    cluster_tol = _resolve_tol(params, overrides, "cluster_tol", 1e-8)
    decomp = spectral_measure(operator, cluster_tol=cluster_tol)
    reconstruction = float(np.linalg.norm(decomp.reconstruct() - operator))
    out = serialize.decomposition_to_json(decomp)
    out["clusters"] = len(decomp.eigenvalues)
    out["reconstruction_deviation"] = reconstruction
    return out


def _run_dilate(config: ExperimentConfig, params: dict, overrides: Overrides) -> dict:
    measure = config.measure(params["measure"])
    dilation = naimark_dilate(measure, trim=bool(params.get("trim", False)))
    result = {
        "dilated_dim": dilation.dilated_dim,
        "isometry_deviation": dilation.isometry_deviation(),
        "pullback_deviation": dilation.pullback_deviation(measure),
        "lift_projective": is_projective(dilation.projective_measure),
        "dilation": serialize.dilation_to_json(dilation),
    }
    if "state" in params:
        rho = config.state(params["state"]).density
        direct = response_rates(measure, rho)
        lifted = dilated_rates(dilation, rho)
        result["rate_deviation"] = float(np.max(np.abs(direct - lifted)))
        result["rates"] = serialize.real_vector_to_json(direct)
    return result


def _run_tomo(config: ExperimentConfig, params: dict, overrides: Overrides) -> dict:
    cal = config.calibration(params["calibration"])
    measure, diagnostics = reconstruct_measure(
        cal,
        max_iterations=int(params.get("max_iterations", 500)),
        exit_tol=_resolve_tol(params, overrides, "exit_tol", 1e-10),
    )
    return {
        "measure": serialize.measure_to_json(measure),
        "lstsq_residual": diagnostics.lstsq_residual,
        "fit_residual": diagnostics.fit_residual,
        "projection_distance": diagnostics.projection_distance,
        "iterations": diagnostics.iterations,
    }


def _run_maxent(config: ExperimentConfig, params: dict, overrides: Overrides) -> dict:
    problem = config.maxent_problem(params["problem"])
    if overrides.tol is not None:
        problem = type(problem)(
            operators=problem.operators,
            targets=problem.targets,
            dim=problem.dim,
            tolerance=overrides.tol,
            max_iterations=problem.max_iterations,
        )
    rho = maxent_state(problem)
    achieved = [
        float(np.real(np.trace(rho.matrix @ np.asarray(x)))) for x in problem.operators
    ]
    return {
        "state": serialize.density_to_json(rho),
        "targets": [float(v) for v in problem.targets],
        "achieved": achieved,
    }


def _run_scatter(config: ExperimentConfig, params: dict, overrides: Overrides) -> dict:
    s = config.smatrix(params["smatrix"])
    psi_in = _state_vector(config.state(params["psi_in"]), params["psi_in"])
    result = {"unitarity_deviation": unitarity_report(s)}
    if "psi_out" in params:
        psi_out = _state_vector(config.state(params["psi_out"]), params["psi_out"])
        result["probability"] = transition_probability(s, psi_in, psi_out)
    elif "projector" in params:
        projector = config.operator(params["projector"])
        result["probability"] = degenerate_channel_probability(s, psi_in, projector)
    else:
        dist = transition_distribution(s, psi_in)
        result["labels"] = list(s.channel_labels)
        result["distribution"] = serialize.real_vector_to_json(dist)
        result["distribution_sum"] = float(dist.sum())
    return result


def _state_vector(state: ConfigState, name: str) -> np.ndarray:
    if state.vector is None:
        raise ParseError(f"state {name!r} must be given as a vector for scattering")
    return state.vector


_RUNNERS = {
    "validate": _run_validate,
    "rates": _run_rates,
    "sample": _run_sample,
    "verify-born-povm": _run_verify_povm,
    "verify-born-c": _run_verify_c,
    "spectral": _run_spectral,
    "dilate": _run_dilate,
    "tomo": _run_tomo,
    "maxent": _run_maxent,
    "scatter": _run_scatter,
}


def run_task(config: ExperimentConfig, task: Task, overrides: Overrides) -> dict:
    entry = {"name": task.name, "kind": task.kind}
    try:
        result = _RUNNERS[task.kind](config, task.params, overrides)
    except BornkitError as exc:
        entry["status"] = "error"
        entry["error"] = {"type": type(exc).__name__, "message": str(exc)}
        return entry
    entry["status"] = "ok"
    entry["result"] = result
    if "passed" in result:
        entry["passed"] = bool(result["passed"])
    return entry


def run_tasks(
    config: ExperimentConfig,
    overrides: Overrides | None = None,
    tasks: list[Task] | None = None,
    parallel: bool = False,
) -> dict:
    """Execute tasks and assemble the report (in config order regardless of scheduling)."""
    overrides = overrides or Overrides()
    chosen = config.tasks if tasks is None else tasks
    started = time.monotonic()
    if parallel and len(chosen) > 1:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(lambda t: run_task(config, t, overrides), chosen))
    else:
        results = [run_task(config, task, overrides) for task in chosen]
    return {
        "toolkit_version": __version__,
        "config_hash": "sha256:" + hashlib.sha256(config.source_text.encode("utf-8")).hexdigest(),
        "wall_time_seconds": time.monotonic() - started,
        "tasks": results,
    }


def report_exit_code(report: dict) -> int:
    """0 all ok and verified, 1 any task error, 2 any verification failure."""
    if any(entry["status"] == "error" for entry in report["tasks"]):
        return 1
    if any(entry.get("passed") is False for entry in report["tasks"]):
        return 2
    return 0
