"""Survival-curve comparison of ordinal qualitative data."""

from .errors import DataError, OrdSurvError, StatisticalError
from .curves import (
    Crossing,
    CrossingReport,
    Observation,
    StepCurve,
    detect_crossings,
    km_estimate,
    prop_at_least,
    survival_at,
)
from .special import chi_square_sf
from .ranktests import (
    CalibrationResult,
    PermutationResult,
    RankTestResult,
    RiskTableRow,
    WeightScheme,
    build_risk_table,
    permutation_pvalue,
    simulate_null_calibration,
    weighted_rank_test,
)
from .agreement import (
    GroupedRecord,
    PairRecord,
    PairedSample,
    Scale,
    SignedSplit,
    TiePolicy,
    absolute_agreement_curve,
    ordinal_to_observations,
    signed_agreement_groups,
)

__version__ = "0.1.0"
