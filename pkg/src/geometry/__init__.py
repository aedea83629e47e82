"""Computable metrics on G and X: group, quotient and Bowen distances, injectivity."""

from geometry.metric import MetricConfig, group_dist, group_dist_pre
from geometry.quotient import (
    QuotientDistance,
    RadiusCertificate,
    bowen_dist,
    certify_delta,
    gamma_candidates,
    injectivity_check,
    min_displacement,
    quotient_dist,
    quotient_distance,
    validity_radius,
)

__all__ = [
    "MetricConfig",
    "QuotientDistance",
    "RadiusCertificate",
    "bowen_dist",
    "certify_delta",
    "gamma_candidates",
    "group_dist",
    "group_dist_pre",
    "injectivity_check",
    "min_displacement",
    "quotient_dist",
    "quotient_distance",
    "validity_radius",
]
