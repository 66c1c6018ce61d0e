"""
Quaternionic geometry kernel for Dupin cyclidic cubes
"""

from app.geometry.quat import (
    INFINITY,
    MobiusMap,
    MPoint,
    MSphere,
    Quaternion,
)
from app.geometry.qb import (
    DCCube,
    DCPatch,
    HomogeneousPoint,
    eval_cube,
    slice_patch,
    spherical_polys,
)
from app.geometry.construct import (
    complete_cube,
    offset_cube,
    patch_weights_finite,
    patch_weights_infinite,
)

__all__ = [
    "INFINITY",
    "MobiusMap",
    "MPoint",
    "MSphere",
    "Quaternion",
    "DCCube",
    "DCPatch",
    "HomogeneousPoint",
    "eval_cube",
    "slice_patch",
    "spherical_polys",
    "complete_cube",
    "offset_cube",
    "patch_weights_finite",
    "patch_weights_infinite",
]
