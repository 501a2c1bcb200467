"""Exact Goldbach partition counts, analytic estimators and comet envelopes."""

from .analysis import (
    Envelope,
    EnvelopeInterpolant,
    FitResult,
    PowerLaw,
    RecordPoint,
    bounding_violations,
    calibrate,
    extract_envelope,
    fit_exponential,
    functional_residual,
)
from .errors import (
    CapacityError,
    DomainError,
    GoldbachError,
    InsufficientDataError,
    OutOfRangeError,
)
from .estimators import (
    EstimateBreakdown,
    chebyshev_scan,
    error_sums,
    estimate_breakdown,
    first_order_sum,
    hardy_littlewood_constant,
    hl_estimate,
    li2_integral,
    prime_density,
    singular_series,
    strong_form_check,
)
from .partition import (
    PartitionSeries,
    goldbach_count,
    goldbach_scan,
    goldbach_witness,
    verify_positive,
)
from .sieve import PrimeTable, build_prime_table, is_prime, prime_count, smallest_prime_factor

__version__ = "0.1.0"
