"""Seeded Monte Carlo detection events and statistical verification.

Draws are i.i.d. from the categorical distribution q_k = p_k / intensity
by inverse CDF over the cumulative rates in element order.  Randomness is
counter-based (see :mod:`bornkit.rng`), so the event log is a pure
function of (detector, state, n, seed) and merged shard counts cannot
depend on how the draws were split across workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyLogError, EmptyStateError, ValidationError
from .measures import Detector, measured_quantity, response_probabilities
from .operators import DensityOperator, frozen_array, quantum_expectation
from .rng import float64_block

DEFAULT_K_SIGMA = 5.0


@dataclass(frozen=True)
class EventLog:
    """Counts per detection element from one seeded run."""

    detector_id: str
    seed: int
    total: int
    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 1 or np.any(counts < 0):
            raise ValidationError("counts must be a vector of nonnegative integers")
        if int(counts.sum()) != self.total:
            raise ValidationError(f"counts sum to {int(counts.sum())}, total says {self.total}")
        object.__setattr__(self, "counts", frozen_array(counts))


@dataclass(frozen=True)
class VerificationReport:
    """Per-component deviations against their statistical bounds.

    For Born-rule frequency checks the components are detection elements;
    for expectation checks they are scale components.  The pass flag is
    true iff every deviation is within its bound.
    """

    kind: str
    detector_id: str
    n: int
    seed: int
    expected: np.ndarray
    observed: np.ndarray
    deviations: np.ndarray
    bounds: np.ndarray
    passed: bool

    def __post_init__(self):
        for name in ("expected", "observed", "deviations", "bounds"):
            object.__setattr__(self, name, frozen_array(np.asarray(getattr(self, name))))
        consistent = bool(np.all(self.deviations <= self.bounds))
        if self.passed != consistent:
            raise ValidationError("pass flag contradicts the deviation/bound comparison")


def sample_events(
    detector: Detector,
    rho: DensityOperator,
    n: int,
    seed: int,
    shards: int = 1,
) -> EventLog:
    """Draw n detection events; deterministic in (detector, rho, n, seed).

    ``shards`` splits the counter range into contiguous chunks (e.g. for
    bounding memory or farming chunks out to workers); the merged counts
    are identical for every shard count.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    if shards <= 0:
        raise ValueError("shards must be positive")
    if rho.is_empty():
        raise EmptyStateError("sampling requires positive intensity")
    q = response_probabilities(detector.measure, rho)
    cumulative = np.cumsum(q)
    k = len(q)
    counts = np.zeros(k, dtype=np.int64)
    bounds = np.linspace(0, n, shards + 1, dtype=np.int64)
    for start, stop in zip(bounds[:-1], bounds[1:]):
        if stop == start:
            continue
        u = float64_block(seed, int(start), int(stop - start))
        idx = np.searchsorted(cumulative, u, side="right")
        np.clip(idx, 0, k - 1, out=idx)
        counts += np.bincount(idx, minlength=k)
    return EventLog(detector_id=detector.name, seed=seed, total=n, counts=counts)


def empirical_rates(log: EventLog) -> np.ndarray:
    """Relative frequencies counts/total."""
    if log.total <= 0:
        raise EmptyLogError("event log is empty")
    return log.counts / float(log.total)


def verify_born_povm(
    detector: Detector,
    rho: DensityOperator,
    n: int,
    seed: int,
    k_sigma: float = DEFAULT_K_SIGMA,
    expected: np.ndarray | None = None,
) -> VerificationReport:
    """Check sampled frequencies against the rates tr(rho P_k)/intensity.

    Each |freq_k - q_k| must stay within k_sigma binomial standard
    deviations plus a 1/n slack.  ``expected`` substitutes a reference
    distribution, which lets tests prove that wrong rates fail.
    """
    if n < 100:
        raise ValueError("n must be at least 100 for a meaningful bound")
    q = response_probabilities(detector.measure, rho) if expected is None else np.asarray(expected, dtype=float)
    if len(q) != len(detector.measure):
        raise ValidationError(f"expected distribution has {len(q)} entries for {len(detector.measure)} elements")
    log = sample_events(detector, rho, n, seed)
    freq = empirical_rates(log)
    deviations = np.abs(freq - q)
    bounds = k_sigma * np.sqrt(np.clip(q * (1.0 - q), 0.0, None) / n) + 1.0 / n
    return VerificationReport(
        kind="born-povm",
        detector_id=detector.name,
        n=n,
        seed=seed,
        expected=q,
        observed=freq,
        deviations=deviations,
        bounds=bounds,
        passed=bool(np.all(deviations <= bounds)),
    )


def verify_born_c(
    detector: Detector,
    rho: DensityOperator,
    n: int,
    seed: int,
    k_sigma: float = DEFAULT_K_SIGMA,
) -> VerificationReport:
    """Check the sample mean of scale values against the quantum expectation.

    The measured quantity is X_j = sum_k (x_k)_j P_k per scale component;
    the sample mean over draws must match tr(rho X_j)/intensity within
    k_sigma * std/sqrt(n), componentwise (std is the population standard
    deviation of the sampled values).
    """
    log = sample_events(detector, rho, n, seed)
    freq = empirical_rates(log)
    values = detector.scale.values  # (K, m)
    mean = values.T @ freq.astype(complex)
    variance = np.abs(values - mean[np.newaxis, :]) ** 2
    std = np.sqrt(variance.T @ freq)
    theory = np.array([quantum_expectation(rho, x) for x in measured_quantity(detector)])
    deviations = np.abs(mean - theory)
    bounds = k_sigma * std / np.sqrt(n)
    return VerificationReport(
        kind="born-c",
        detector_id=detector.name,
        n=n,
        seed=seed,
        expected=theory,
        observed=mean,
        deviations=deviations,
        bounds=bounds,
        passed=bool(np.all(deviations <= bounds)),
    )
