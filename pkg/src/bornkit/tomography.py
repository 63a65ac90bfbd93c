"""Measurement tomography and maximum-entropy state estimation.

Tomography solves tr(rho_j P_k) = p_jk for the measure elements in the
real d^2-dimensional coordinates of Hermitian matrices, then projects the
least-squares solution onto the feasible set (PSD elements summing to the
identity) with Dykstra's alternating projections.

Maximum entropy finds exp(-sum_j lambda_j X_j)/Z matching expectation
targets by damped Newton on the smooth concave dual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CalibrationDataError,
    DimensionMismatchError,
    InfeasibleError,
    NoConvergenceError,
    RankDeficientError,
)
from .measures import QuantumMeasure, make_measure
from .operators import (
    DensityOperator,
    as_complex_matrix,
    frozen_array,
    require_hermitian,
    trace_product,
)

LSTSQ_EXIT_TOL = 1e-10
DYKSTRA_MAX_ITERATIONS = 500
MAXENT_TOL = 1e-8
MAXENT_MAX_ITERATIONS = 200
ARMIJO_FACTOR = 0.5
ARMIJO_MAX_HALVINGS = 40


def hermitian_coords(matrix: np.ndarray) -> np.ndarray:
    """Real coordinates of a Hermitian matrix: diagonal, then sqrt(2) Re/Im above it.

    The map is an isometry for the Frobenius inner product, so
    tr(A B) = coords(A) . coords(B) for Hermitian A, B.
    """
    d = matrix.shape[0]
    out = np.empty(d * d)
    out[:d] = np.real(np.diag(matrix))
    pos = d
    for i in range(d):
        for j in range(i + 1, d):
            out[pos] = np.sqrt(2.0) * matrix[i, j].real
            out[pos + 1] = np.sqrt(2.0) * matrix[i, j].imag
            pos += 2
    return out


def coords_to_hermitian(coords: np.ndarray, dim: int) -> np.ndarray:
    out = np.zeros((dim, dim), dtype=complex)
    out[np.diag_indices(dim)] = coords[:dim]
    pos = dim
    for i in range(dim):
        for j in range(i + 1, dim):
            value = (coords[pos] + 1j * coords[pos + 1]) / np.sqrt(2.0)
            out[i, j] = value
            out[j, i] = np.conj(value)
            pos += 2
    return out


@dataclass(frozen=True)
class CalibrationSet:
    """Known states and the mean rates each one produced on each element."""

    states: tuple
    rates: np.ndarray  # (J, K)
    data_tol: float = 1e-6

    def __post_init__(self):
        if not self.states:
            raise CalibrationDataError("calibration needs at least one state")
        dim = self.states[0].dim
        if any(s.dim != dim for s in self.states):
            raise DimensionMismatchError("calibration states have mixed dimensions")
        rates = np.asarray(self.rates, dtype=float)
        if rates.ndim != 2 or rates.shape[0] != len(self.states):
            raise CalibrationDataError(
                f"rates must have one row per state, got shape {rates.shape}"
            )
        if float(rates.min()) < -1e-12:
            raise CalibrationDataError(f"negative rate {float(rates.min()):.3e} in calibration data")
        rates = np.maximum(rates, 0.0)
        for j, state in enumerate(self.states):
            gap = abs(float(rates[j].sum()) - state.intensity)
            if gap > self.data_tol:
                raise CalibrationDataError(
                    f"row {j} sums to {float(rates[j].sum())!r}, intensity is {state.intensity!r}"
                )
        object.__setattr__(self, "rates", frozen_array(rates))

    @property
    def dim(self) -> int:
        return self.states[0].dim


@dataclass(frozen=True)
class CompletenessReport:
    """Rank of the calibration states in the real space of Hermitian matrices."""

    rank: int
    required: int
    complete: bool


def informational_completeness(states) -> CompletenessReport:
    """Rank of {rho_j} as vectors in the d^2-dimensional Hermitian space."""
    states = tuple(states)
    if not states:
        raise CalibrationDataError("no states given")
    coords = np.stack([hermitian_coords(s.matrix) for s in states])
    rank = int(np.linalg.matrix_rank(coords))
    required = states[0].dim ** 2
    return CompletenessReport(rank=rank, required=required, complete=rank == required)


@dataclass(frozen=True)
class TomographyDiagnostics:
    """Fit quality of a reconstructed measure; the residual is never hidden."""

    lstsq_residual: float
    fit_residual: float
    projection_distance: float
    iterations: int


def _project_psd(elements: np.ndarray) -> np.ndarray:
    out = np.empty_like(elements)
    for k, p in enumerate(elements):
        values, vectors = np.linalg.eigh(p)
        out[k] = (vectors * np.clip(values, 0.0, None)) @ vectors.conj().T
    return out


def _project_complete(elements: np.ndarray) -> np.ndarray:
    excess = (elements.sum(axis=0) - np.eye(elements.shape[1])) / elements.shape[0]
    return elements - excess[np.newaxis, :, :]


def reconstruct_measure(
    cal: CalibrationSet,
    max_iterations: int = DYKSTRA_MAX_ITERATIONS,
    exit_tol: float = LSTSQ_EXIT_TOL,
) -> tuple[QuantumMeasure, TomographyDiagnostics]:
    """Recover a quantum measure from calibration rates.

    Requires an informationally complete calibration set.  Per element,
    tr(rho_j P_k) = p_jk is solved by least squares over Hermitian P_k;
    the stacked estimate is then projected onto {P_k PSD, sum_k P_k = 1}
    by Dykstra's algorithm, stopping when successive iterates move less
    than ``exit_tol`` in Frobenius norm (NoConvergence past the cap).
    A final feasibility sweep guarantees the returned measure satisfies
    the QuantumMeasure invariants; the data residual is reported.
    """
    report = informational_completeness(cal.states)
    if not report.complete:
        raise RankDeficientError(
            f"calibration rank {report.rank} < {report.required}; states do not pin the measure"
        )
    d = cal.dim
    k_count = cal.rates.shape[1]
    design = np.stack([hermitian_coords(s.matrix) for s in cal.states])  # (J, d^2)
    solution, _, _, _ = np.linalg.lstsq(design, cal.rates, rcond=None)  # (d^2, K)
    estimate = np.stack([coords_to_hermitian(solution[:, k], d) for k in range(k_count)])
    lstsq_residual = float(np.linalg.norm(design @ solution - cal.rates))

    # Dykstra with increments for both sets; the PSD cone is the non-affine one.
    current = estimate.copy()
    psd_increment = np.zeros_like(current)
    affine_increment = np.zeros_like(current)
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        previous = current
        cone_point = _project_psd(current + psd_increment)
        psd_increment = current + psd_increment - cone_point
        current = _project_complete(cone_point + affine_increment)
        affine_increment = cone_point + affine_increment - current
        if float(np.linalg.norm(current - previous)) < exit_tol:
            break
    else:
        raise NoConvergenceError(
            f"Dykstra projection did not settle within {max_iterations} iterations"
        )

    # Feasibility sweep: plain alternating projections converge to the
    # (nonempty) intersection, so a few extra rounds push the invariant
    # violations below construction tolerance.
    for _ in range(50):
        current = _project_complete(_project_psd(current))
        worst = min(float(np.linalg.eigvalsh(p)[0]) for p in current)
        if worst >= -1e-12:
            break

    measure = make_measure(list(current), labels=None)
    fitted = np.stack([hermitian_coords(p) for p in current]).T  # (d^2, K)
    fit_residual = float(np.linalg.norm(design @ fitted - cal.rates))
    diagnostics = TomographyDiagnostics(
        lstsq_residual=lstsq_residual,
        fit_residual=fit_residual,
        projection_distance=float(np.linalg.norm(current - estimate)),
        iterations=iterations,
    )
    return measure, diagnostics


@dataclass(frozen=True)
class MaxEntProblem:
    """Hermitian constraint operators with expectation targets for a unit-intensity state.

    ``dim`` may be omitted when at least one operator fixes it; the
    unconstrained problem needs it spelled out.
    """

    operators: tuple
    targets: tuple
    dim: int | None = None
    tolerance: float = MAXENT_TOL
    max_iterations: int = MAXENT_MAX_ITERATIONS

    def __post_init__(self):
        operators = tuple(
            frozen_array(require_hermitian(x, name=f"constraint {j}"))
            for j, x in enumerate(self.operators)
        )
        targets = tuple(float(v) for v in self.targets)
        if len(targets) != len(operators):
            raise DimensionMismatchError(
                f"{len(targets)} targets for {len(operators)} operators"
            )
        dims = {x.shape[0] for x in operators}
        if self.dim is not None:
            dims.add(int(self.dim))
        if len(dims) > 1:
            raise DimensionMismatchError("constraint operators have mixed dimensions")
        if not dims:
            raise ValueError("an unconstrained problem must state the dimension")
        object.__setattr__(self, "operators", operators)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "dim", dims.pop())


def _gibbs_state(exponent: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Eigen data of exp(-H)/Z: (weights, vectors, energies, log Z)."""
    energies, vectors = np.linalg.eigh(exponent)
    shifted = np.exp(-(energies - energies[0]))
    z = float(shifted.sum())
    log_z = float(np.log(z) - energies[0])
    return shifted / z, vectors, energies, log_z


def _dual_value(lam: np.ndarray, operators: list[np.ndarray], targets: np.ndarray, dim: int) -> float:
    exponent = np.zeros((dim, dim), dtype=complex)
    for coeff, x in zip(lam, operators):
        exponent = exponent + coeff * x
    _, _, _, log_z = _gibbs_state(exponent)
    return log_z + float(lam @ targets)


def maxent_state(problem: MaxEntProblem) -> DensityOperator:
    """Maximum-entropy state exp(-sum lambda_j X_j)/Z matching the targets.

    Targets outside the spectral range of their operator are rejected a
    priori as infeasible.  The dual is minimized by Newton steps with
    Armijo backtracking from lambda = 0; convergence is declared when
    every constraint is met within the problem tolerance.
    """
    operators = [np.asarray(x) for x in problem.operators]
    targets = np.asarray(problem.targets, dtype=float)
    dim = problem.dim
    if not operators:
        uniform = np.eye(dim, dtype=complex) / dim
        return DensityOperator(matrix=frozen_array(uniform), intensity=1.0)
    for j, (x, v) in enumerate(zip(operators, targets)):
        spectrum = np.linalg.eigvalsh(x)
        if v < spectrum[0] or v > spectrum[-1]:
            raise InfeasibleError(
                f"target {v!r} for constraint {j} is outside the spectral range "
                f"[{spectrum[0]!r}, {spectrum[-1]!r}]"
            )

    lam = np.zeros(len(operators))
    for _ in range(problem.max_iterations):
        exponent = np.zeros((dim, dim), dtype=complex)
        for coeff, x in zip(lam, operators):
            exponent = exponent + coeff * x
        weights, vectors, energies, log_z = _gibbs_state(exponent)
        rotated = [vectors.conj().T @ x @ vectors for x in operators]
        means = np.array([float(np.real(np.sum(weights * np.diag(xt)))) for xt in rotated])
        gradient = targets - means
        if float(np.max(np.abs(gradient))) <= problem.tolerance:
            rho = (vectors * weights) @ vectors.conj().T
            return DensityOperator(matrix=frozen_array(rho), intensity=1.0)

        # Kubo-Mori covariance: the exact Hessian of log Z in lambda.
        kernel = _divided_exp_kernel(weights, energies)
        hessian = np.empty((len(operators),) * 2)
        for a, xa in enumerate(rotated):
            for b in range(a, len(operators)):
                value = float(np.real(np.sum(xa * rotated[b].T * kernel))) - means[a] * means[b]
                hessian[a, b] = value
                hessian[b, a] = value
        ridge = 1e-12 * max(float(np.trace(hessian)), 1.0)
        step = np.linalg.solve(hessian + ridge * np.eye(len(operators)), -gradient)

        value = log_z + float(lam @ targets)
        slope = float(gradient @ step)
        scale = 1.0
        for _ in range(ARMIJO_MAX_HALVINGS):
            if _dual_value(lam + scale * step, operators, targets, dim) <= value + 1e-4 * scale * slope:
                break
            scale *= ARMIJO_FACTOR
        lam = lam + scale * step
    raise NoConvergenceError(
        f"maxent Newton did not meet tolerance {problem.tolerance!r} "
        f"within {problem.max_iterations} iterations"
    )


def _divided_exp_kernel(weights: np.ndarray, energies: np.ndarray) -> np.ndarray:
    """phi(w_a, w_b) = (w_a - w_b)/(e_b - e_a) with diagonal limit w_a.

    Since ln w = -e - ln Z, the energy gap is the exact log-weight gap and
    stays finite when a weight underflows to zero.
    """
    w = np.asarray(weights, dtype=float)
    e = np.asarray(energies, dtype=float)
    diff_w = w[:, np.newaxis] - w[np.newaxis, :]
    diff_e = e[np.newaxis, :] - e[:, np.newaxis]
    near = np.abs(diff_e) < 1e-12
    return np.where(near, (w[:, np.newaxis] + w[np.newaxis, :]) / 2.0, diff_w / np.where(near, 1.0, diff_e))


def maxent_from_state(operators, rho: DensityOperator, **kwargs) -> MaxEntProblem:
    """Problem whose targets are the normalized expectations of ``rho``."""
    arrays = [as_complex_matrix(x) for x in operators]
    targets = [float(np.real(trace_product(rho.matrix / rho.intensity, x))) for x in arrays]
    return MaxEntProblem(operators=tuple(arrays), targets=tuple(targets), **kwargs)
