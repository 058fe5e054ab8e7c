"""Discrete extremal length on triangulated surfaces under refinement."""

from .complex import SurfaceComplex, build, validate
from .elsolver import ELResult, area, extremal_length, family_length, path_length
from .families import Connecting, Explicit, is_regular, membership, refine_family
from .orientation import CutSystem, Orientation, orient_planar, orient_surface, outdegree_profile
from .refinement import RefinementMap, compose, refine, refine_levels, strong_c
from .transfer import lift_metric, pushdown_metric, shadow_down, shadow_up, verify_theorem3
from .eel import edge_extremal_length, verify_theorem4

__all__ = [
    "SurfaceComplex", "build", "validate",
    "ELResult", "area", "extremal_length", "family_length", "path_length",
    "Connecting", "Explicit", "is_regular", "membership", "refine_family",
    "CutSystem", "Orientation", "orient_planar", "orient_surface", "outdegree_profile",
    "RefinementMap", "compose", "refine", "refine_levels", "strong_c",
    "lift_metric", "pushdown_metric", "shadow_down", "shadow_up", "verify_theorem3",
    "edge_extremal_length", "verify_theorem4",
]
