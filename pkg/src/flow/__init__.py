"""The transformation T(x) = x·a, conjugation scalings and orbit height profiles."""

from flow.orbit import OrbitRecord, OrbitStep, orbit_heights
from flow.transform import (
    FlowParams,
    apply_flow,
    check_guard,
    conjugate_by_flow,
    flow_diagonal,
    scale_columns,
    tracked_vector_norm,
)

__all__ = [
    "FlowParams",
    "OrbitRecord",
    "OrbitStep",
    "apply_flow",
    "check_guard",
    "conjugate_by_flow",
    "flow_diagonal",
    "orbit_heights",
    "scale_columns",
    "tracked_vector_norm",
]
