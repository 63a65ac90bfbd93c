"""Finite-dimensional quantum measures, detectors, and verified detection statistics."""

__version__ = "0.1.0"

from .dilation import Dilation, dilated_rates, lifted_state, naimark_dilate
from .measures import (
    Detector,
    DrpLinearityReport,
    QuantumMeasure,
    Scale,
    drp_linearity_report,
    is_projective,
    make_detector,
    make_measure,
    measured_quantity,
    response_probabilities,
    response_rates,
    statistical_expectation,
)
from .operators import (
    DensityOperator,
    UncertaintyProductReport,
    make_density,
    normalize,
    pure_state,
    quantum_expectation,
    quantum_value,
    uncertainty,
    uncertainty_product_report,
    von_neumann_entropy,
)
from .sampling import (
    EventLog,
    VerificationReport,
    empirical_rates,
    sample_events,
    verify_born_c,
    verify_born_povm,
)
from .scattering import (
    SMatrix,
    degenerate_channel_probability,
    make_smatrix,
    transition_distribution,
    transition_probability,
    unitarity_report,
)
from .spectral import (
    SpectralDecomposition,
    born_probabilities_pure,
    function_calculus,
    projective_rates_equal_povm_rates,
    spectral_measure,
)
from .tomography import (
    CalibrationSet,
    MaxEntProblem,
    informational_completeness,
    maxent_state,
    reconstruct_measure,
)

__all__ = [
    "__version__",
    "CalibrationSet",
    "DensityOperator",
    "Detector",
    "Dilation",
    "DrpLinearityReport",
    "EventLog",
    "MaxEntProblem",
    "QuantumMeasure",
    "SMatrix",
    "Scale",
    "SpectralDecomposition",
    "UncertaintyProductReport",
    "VerificationReport",
    "born_probabilities_pure",
    "degenerate_channel_probability",
    "dilated_rates",
    "drp_linearity_report",
    "empirical_rates",
    "function_calculus",
    "informational_completeness",
    "is_projective",
    "lifted_state",
    "make_density",
    "make_detector",
    "make_measure",
    "make_smatrix",
    "maxent_state",
    "measured_quantity",
    "naimark_dilate",
    "normalize",
    "projective_rates_equal_povm_rates",
    "pure_state",
    "quantum_expectation",
    "quantum_value",
    "reconstruct_measure",
    "response_probabilities",
    "response_rates",
    "sample_events",
    "spectral_measure",
    "statistical_expectation",
    "transition_distribution",
    "transition_probability",
    "uncertainty",
    "uncertainty_product_report",
    "unitarity_report",
    "verify_born_c",
    "verify_born_povm",
    "von_neumann_entropy",
]
