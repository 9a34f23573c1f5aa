"""Brier score decompositions for binary forecast verification.

The library computes the Brier score of forecast-outcome data together
with five ways of splitting it into diagnostic terms:

* bias-variance and the Yates covariance form (moment-based),
* the rearranged covariance form with three non-negative terms
  (variance mismatch, covariance deficit, calibration-in-the-large),
* Sanders sharpness/reliability and uncertainty/resolution/reliability
  (conditioning on forecast values),
* excess/correctness and refinement/discrimination/correctness
  (conditioning on outcomes),

plus binned reliability-curve estimation with an explicit residual, and
seeded synthetic generators for exercising each term. Every exact
scheme reconstructs the Brier score to the library tolerance; reports
carry the reconstruction residual so the identities stay checkable.
"""

from .binning import (
    BinKind,
    BinningScheme,
    ReliabilityBin,
    ReliabilityCurve,
    binned_urr,
    make_bins,
    reliability_curve,
)
from .conditional import (
    Conditioning,
    Partition,
    PartitionGroup,
    excess_correctness,
    partition_by_forecast,
    partition_by_outcome,
    rdc,
    sanders,
    urr,
)
from .core import (
    DEFAULT_TOLERANCE,
    Dataset,
    ForecastRecord,
    MomentSummary,
    accumulate_moments,
    brier_score,
    make_dataset,
    merge_moments,
)
from .decomp import (
    DecompositionReport,
    OptimalityDiagnosis,
    alt_yates,
    bias_variance,
    brier_from_moments,
    check_optimality,
    covariance_deficit_correlation_form,
    yates,
)
from .errors import (
    BrierDecompError,
    DomainError,
    EmptyInputError,
    InputError,
    InternalConsistencyError,
    InvalidBinCount,
    InvalidTolerance,
    ParseError,
    UnsupportedSpec,
)
from .synthetic import (
    GenerationStats,
    GeneratorKind,
    GeneratorSpec,
    SplitMix64,
    TermTargets,
    empirical_term_targets,
    generate,
    generate_with_stats,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "DEFAULT_TOLERANCE",
    "ForecastRecord",
    "Dataset",
    "MomentSummary",
    "make_dataset",
    "accumulate_moments",
    "merge_moments",
    "brier_score",
    "DecompositionReport",
    "OptimalityDiagnosis",
    "bias_variance",
    "yates",
    "alt_yates",
    "brier_from_moments",
    "covariance_deficit_correlation_form",
    "check_optimality",
    "Conditioning",
    "PartitionGroup",
    "Partition",
    "partition_by_forecast",
    "partition_by_outcome",
    "sanders",
    "urr",
    "excess_correctness",
    "rdc",
    "BinKind",
    "BinningScheme",
    "ReliabilityBin",
    "ReliabilityCurve",
    "make_bins",
    "reliability_curve",
    "binned_urr",
    "GeneratorKind",
    "GeneratorSpec",
    "GenerationStats",
    "TermTargets",
    "SplitMix64",
    "generate",
    "generate_with_stats",
    "empirical_term_targets",
    "BrierDecompError",
    "InputError",
    "DomainError",
    "EmptyInputError",
    "ParseError",
    "InvalidTolerance",
    "InvalidBinCount",
    "UnsupportedSpec",
    "InternalConsistencyError",
]
