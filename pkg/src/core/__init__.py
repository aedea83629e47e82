"""Precision-configurable scalars and SL(d+1, R) matrix algebra."""

from core.errors import LabError
from core.matrix import (
    GroupElement,
    det_check,
    determinant,
    diagonal,
    elementary,
    identity,
    mat_inverse,
    multiply,
    renormalize,
    sup_dev,
)
from core.precision import PrecisionConfig, activate, active, mpf, working_precision
from core.report import Report, plain

__all__ = [
    "GroupElement",
    "LabError",
    "PrecisionConfig",
    "Report",
    "activate",
    "active",
    "det_check",
    "determinant",
    "diagonal",
    "elementary",
    "identity",
    "mat_inverse",
    "mpf",
    "multiply",
    "plain",
    "renormalize",
    "sup_dev",
    "working_precision",
]
