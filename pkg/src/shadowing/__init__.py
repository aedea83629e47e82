"""Shadowing: glue the past of one point to the future of a nearby one."""

from shadowing.decompose import (
    reconstruction_error,
    shadow_decompose,
    split_left,
    stable_element,
    unstable_coordinates,
    unstable_element,
)
from shadowing.shadow import (
    ShadowResult,
    decomposition_tol,
    random_displacement,
    shadow_batch,
    shadow_point,
    verify_shadow,
)

__all__ = [
    "ShadowResult",
    "decomposition_tol",
    "random_displacement",
    "reconstruction_error",
    "shadow_batch",
    "shadow_decompose",
    "shadow_point",
    "split_left",
    "stable_element",
    "unstable_coordinates",
    "unstable_element",
    "verify_shadow",
]
