"""Coefficient bounds for analytic functions with f' + alpha z f'' subordinate to phi."""
from .bounds import (
    HankelMethod,
    Interval,
    NoRegionMatched,
    Variant,
    distortion_bounds,
    eval_H,
    fekete_szego_inverse_bound,
    growth_bounds,
    hankel_second_bound,
    inverse_coeff_bounds,
    log_coeff_bounds,
    taylor_coeff_bound,
)
from .oracle import BoundViolated, SearchConfig, campaign, h_oracle, verify_class_bounds
from .phi import ClassParams, PhiSpec
from .series import TruncatedSeries
from .witness import extremal, profile, schur_to_schwarz

__version__ = "0.1.0"

__all__ = [
    "BoundViolated", "ClassParams", "HankelMethod", "Interval", "NoRegionMatched", "PhiSpec",
    "SearchConfig", "TruncatedSeries", "Variant", "campaign", "distortion_bounds", "eval_H",
    "extremal", "fekete_szego_inverse_bound", "growth_bounds", "h_oracle", "hankel_second_bound",
    "inverse_coeff_bounds", "log_coeff_bounds", "profile", "schur_to_schwarz",
    "taylor_coeff_bound", "verify_class_bounds",
]
