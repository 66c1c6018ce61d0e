"""
Cube files, meshes, polylines and reports
"""

from app.io.cube_file import (
    dumps_cube,
    load_cube,
    load_patch,
    loads_cube,
    save_cube,
    save_patch,
)
from app.io.curves import export_singular_curves, read_singular_curves
from app.io.mesh import SurfaceMesh, export_surface_mesh
from app.io.report import build_report, locus_report, write_report

__all__ = [
    "dumps_cube",
    "load_cube",
    "load_patch",
    "loads_cube",
    "save_cube",
    "save_patch",
    "export_singular_curves",
    "read_singular_curves",
    "SurfaceMesh",
    "export_surface_mesh",
    "build_report",
    "locus_report",
    "write_report",
]
