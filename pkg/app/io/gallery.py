"""
Gallery of named configurations

Each entry builds a catalog cube and writes its cube file, the singular curves
and one sample surface per parameter direction.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from app.core.errors import DegenerateError, DupinCubeError, InvalidParameter
from app.core.tolerance import Tolerance, resolve
from app.geometry.analysis.singular import singular_locus
from app.geometry.canonical import build_family
from app.geometry.qb import DIRECTIONS
from app.io.cube_file import save_cube
from app.io.curves import export_singular_curves
from app.io.mesh import export_surface_mesh

logger = logging.getLogger(__name__)

GALLERY: Dict[str, Tuple[str, Tuple[float, ...]]] = {
    "A1": ("A", (1.0, 2.0, 3.0)),
    "A2": ("A", (3.0, 1.0, -2.0)),
    "A3": ("A", (0.0, 0.5, -1.0)),
    "A4": ("A4", (0.5,)),
    "O1": ("O1", (0.5,)),
    "O2": ("O2", ()),
    "B": ("B", (2.0, 1.5)),
    "S1": ("S1", (0.5,)),
}

# Tried in order until a slice is a genuine surface
_SURFACE_VALUES = (0.5, 0.25, 0.75, 2.0)


@dataclass
class GalleryEntry:
    label: str
    cube: Path
    curves: Optional[Path] = None
    surfaces: List[Path] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)


def gallery_labels() -> List[str]:
    return list(GALLERY)


def export_gallery(label: str, directory: Union[str, Path], resolution: Optional[int] = None,
                   tol: Optional[Tolerance] = None) -> GalleryEntry:
    if label not in GALLERY:
        raise InvalidParameter(f"unknown gallery configuration {label!r}", {"gallery": gallery_labels()})
    tol = resolve(tol)
    family, params = GALLERY[label]
    built = build_family(family, params)
    directory = Path(directory) / label
    entry = GalleryEntry(label, save_cube(built.cube, directory / "cube.json", family, built.params))

    try:
        locus = singular_locus(built.cube, tol)
        path = directory / "singular.csv"
        export_singular_curves(locus, path)
        entry.curves = path
    except DupinCubeError as e:
        logger.warning("gallery %s: no singular curves (%s)", label, e.message)
        entry.notes.append(f"singular curves skipped: {e.message}")

    for direction in range(3):
        for value in _SURFACE_VALUES:
            path = directory / f"surface_{DIRECTIONS[direction]}.obj"
            try:
                export_surface_mesh(built.cube, direction, value, resolution, path, tol=tol)
            except DegenerateError:
                continue
            entry.surfaces.append(path)
            break
        else:
            entry.notes.append(f"no surface found in direction {DIRECTIONS[direction]}")
    logger.info("gallery %s: %d surfaces written to %s", label, len(entry.surfaces), directory)
    return entry


def export_galleries(labels: Sequence[str], directory: Union[str, Path],
                     resolution: Optional[int] = None,
                     tol: Optional[Tolerance] = None) -> List[GalleryEntry]:
    return [export_gallery(label, directory, resolution, tol) for label in labels]
