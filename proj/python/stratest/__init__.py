"""Stratified mean estimation with two auxiliary variables."""

from ._core import (
    PUBLISHED_PRE,
    InputError,
    MomentSet,
    NumericalError,
    ValidationError,
    bias_tp,
    kk2009_moments,
    mse,
    optimal_m,
    pre_table,
    run,
    simulate,
    summary_moments,
)

__all__ = [
    "PUBLISHED_PRE",
    "InputError",
    "MomentSet",
    "NumericalError",
    "ValidationError",
    "bias_tp",
    "kk2009_moments",
    "mse",
    "optimal_m",
    "pre_table",
    "run",
    "simulate",
    "summary_moments",
]
