"""Exact counts and exponential growth bounds for RNA structure families."""

__version__ = "0.1.0"

from .coeffs import (
    CountSequence,
    implicit_series,
    oracle_count,
    recurrence_counts,
    unrestricted_primary,
    wc_primary_counts,
)
from .models import ModelSpec, eliminate_auxiliary, get_model, lambda_phi, model_names
from .polynomial import (
    MultiPoly,
    UniPoly,
    discriminant,
    exact_divides,
    poly_arith,
    poly_eval,
    resultant,
    squarefree_part,
)
from .series import PowerSeries, series_linear_combine, series_mul
from .singularity import (
    GrowthReport,
    RootSet,
    dominant_singularity,
    find_roots,
    growth_report,
    root_test,
)
