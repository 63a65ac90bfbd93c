"""Experiment configuration: named objects plus an ordered task list.

The file is UTF-8 JSON with a mandatory schema version.  References are
checked for existence at load time; the referenced objects themselves
are constructed lazily so that a ``validate`` task can report an invalid
object instead of aborting the whole run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import serialize
from .errors import ParseError, UnresolvedReferenceError
from .measures import Detector, Scale
from .operators import pure_state
from .tomography import CalibrationSet, MaxEntProblem

SCHEMA_VERSIONS = ("1",)

TASK_KINDS = (
    "validate",
    "rates",
    "sample",
    "verify-born-povm",
    "verify-born-c",
    "spectral",
    "dilate",
    "tomo",
    "maxent",
    "scatter",
)

# Object map consulted for each reference parameter a task may carry.
TASK_REFS = {
    "validate": {"state": "states", "measure": "measures", "detector": "detectors", "smatrix": "smatrices"},
    "rates": {"measure": "measures", "state": "states"},
    "sample": {"detector": "detectors", "state": "states"},
    "verify-born-povm": {"detector": "detectors", "state": "states"},
    "verify-born-c": {"detector": "detectors", "state": "states"},
    "spectral": {"operator": "operators"},
    "dilate": {"measure": "measures", "state": "states"},
    "tomo": {"calibration": "calibrations"},
    "maxent": {"problem": "maxent_problems"},
    "scatter": {"smatrix": "smatrices", "psi_in": "states", "psi_out": "states", "projector": "operators"},
}

OBJECT_MAPS = (
    "states",
    "operators",
    "measures",
    "scales",
    "detectors",
    "smatrices",
    "calibrations",
    "maxent_problems",
)


@dataclass(frozen=True)
class ConfigState:
    """A state as configured: always a density operator, a vector when given as one."""

    density: object
    vector: np.ndarray | None = None


@dataclass
class Task:
    kind: str
    name: str
    params: dict


@dataclass
class ExperimentConfig:
    version: str
    objects: dict
    tasks: list[Task]
    source_text: str
    path: str = "<memory>"
    _cache: dict = field(default_factory=dict)

    def _raw(self, map_name: str, name: str):
        table = self.objects.get(map_name, {})
        if name not in table:
            raise UnresolvedReferenceError(f"{map_name[:-1]} {name!r} is not defined")
        return table[name]

    def state(self, name: str) -> ConfigState:
        key = ("states", name)
        if key not in self._cache:
            raw = self._raw("states", name)
            if "vector" in raw:
                vec = serialize.json_to_vector(raw["vector"])
                self._cache[key] = ConfigState(density=pure_state(vec), vector=vec)
            elif "matrix" in raw:
                self._cache[key] = ConfigState(density=serialize.json_to_density(raw))
            else:
                raise ParseError(f"state {name!r} needs a 'matrix' or a 'vector'")
        return self._cache[key]

    def operator(self, name: str) -> np.ndarray:
        key = ("operators", name)
        if key not in self._cache:
            self._cache[key] = serialize.json_to_matrix(self._raw("operators", name))
        return self._cache[key]

    def measure(self, name: str):
        key = ("measures", name)
        if key not in self._cache:
            self._cache[key] = serialize.json_to_measure(self._raw("measures", name))
        return self._cache[key]

    def scale(self, name: str) -> Scale:
        key = ("scales", name)
        if key not in self._cache:
            self._cache[key] = serialize.json_to_scale(self._raw("scales", name))
        return self._cache[key]

    def detector(self, name: str) -> Detector:
        key = ("detectors", name)
        if key not in self._cache:
            raw = self._raw("detectors", name)
            self._cache[key] = Detector(
                measure=self.measure(raw["measure"]),
                scale=self.scale(raw["scale"]),
                name=name,
            )
        return self._cache[key]

    def smatrix(self, name: str):
        key = ("smatrices", name)
        if key not in self._cache:
            raw = self._raw("smatrices", name)
            self._cache[key] = serialize.json_to_smatrix(
                raw, require_unitary=bool(raw.get("require_unitary", True))
            )
        return self._cache[key]

    def calibration(self, name: str) -> CalibrationSet:
        key = ("calibrations", name)
        if key not in self._cache:
            raw = self._raw("calibrations", name)
            states = tuple(
                self.state(entry).density if isinstance(entry, str) else serialize.json_to_density(entry)
                for entry in raw["states"]
            )
            self._cache[key] = CalibrationSet(
                states=states,
                rates=np.asarray(raw["rates"], dtype=float),
                data_tol=float(raw.get("data_tol", 1e-6)),
            )
        return self._cache[key]

    def maxent_problem(self, name: str) -> MaxEntProblem:
        key = ("maxent_problems", name)
        if key not in self._cache:
            raw = self._raw("maxent_problems", name)
            operators = tuple(
                self.operator(entry) if isinstance(entry, str) else serialize.json_to_matrix(entry)
                for entry in raw["operators"]
            )
            self._cache[key] = MaxEntProblem(
                operators=operators,
                targets=tuple(float(v) for v in raw["targets"]),
                dim=raw.get("dim"),
                tolerance=float(raw.get("tolerance", 1e-8)),
                max_iterations=int(raw.get("max_iterations", 200)),
            )
        return self._cache[key]


def _check_references(objects: dict, tasks: list[Task]) -> None:
    """Every name a task or composite object mentions must be defined."""

    def require(map_name: str, name: str, owner: str) -> None:
        if not isinstance(name, str) or name not in objects.get(map_name, {}):
            raise UnresolvedReferenceError(
                f"{owner} references undefined {map_name[:-1]} {name!r}"
            )

    for det_name, raw in objects.get("detectors", {}).items():
        for field_name, map_name in (("measure", "measures"), ("scale", "scales")):
            if field_name not in raw:
                raise ParseError(f"detector {det_name!r} needs a {field_name!r} reference")
            require(map_name, raw[field_name], f"detector {det_name!r}")
    for cal_name, raw in objects.get("calibrations", {}).items():
        for entry in raw.get("states", []):
            if isinstance(entry, str):
                require("states", entry, f"calibration {cal_name!r}")
    for mp_name, raw in objects.get("maxent_problems", {}).items():
        for entry in raw.get("operators", []):
            if isinstance(entry, str):
                require("operators", entry, f"maxent problem {mp_name!r}")

    for task in tasks:
        ref_map = TASK_REFS[task.kind]
        for param, map_name in ref_map.items():
            if param in task.params:
                require(map_name, task.params[param], f"task {task.name!r}")


def parse_config(text: str, path: str = "<memory>") -> ExperimentConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top level must be an object")
    version = data.get("version")
    if version not in SCHEMA_VERSIONS:
        raise ParseError(f"{path}: unrecognized schema version {version!r}")
    objects = data.get("objects", {})
    if not isinstance(objects, dict):
        raise ParseError(f"{path}: 'objects' must be an object")
    for map_name in objects:
        if map_name not in OBJECT_MAPS:
            raise ParseError(f"{path}: unknown object map {map_name!r}")
        if not isinstance(objects[map_name], dict):
            raise ParseError(f"{path}: object map {map_name!r} must be an object")

    raw_tasks = data.get("tasks", [])
    if not isinstance(raw_tasks, list):
        raise ParseError(f"{path}: 'tasks' must be a list")
    tasks = []
    for index, raw in enumerate(raw_tasks):
        if not isinstance(raw, dict) or "kind" not in raw:
            raise ParseError(f"{path}: task {index} needs a 'kind'")
        kind = raw["kind"]
        if kind not in TASK_KINDS:
            raise ParseError(f"{path}: task {index} has unknown kind {kind!r}")
        params = {k: v for k, v in raw.items() if k not in ("kind", "name")}
        tasks.append(Task(kind=kind, name=raw.get("name", f"{kind}-{index}"), params=params))
    names = [t.name for t in tasks]
    if len(set(names)) != len(names):
        raise ParseError(f"{path}: task names must be unique")

    config = ExperimentConfig(
        version=version, objects=objects, tasks=tasks, source_text=text, path=path
    )
    _check_references(objects, tasks)
    return config


def load_config(path) -> ExperimentConfig:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, path=str(path))
