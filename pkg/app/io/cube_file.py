"""
Cube files

Reals are written with Python's shortest round-trip repr (at most 17
significant digits), so save/load reproduces every binary64 value exactly.
"""

import json
import logging
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple, Type, TypeVar, Union

import numpy as np
from pydantic import ValidationError

from app.core.config import settings
from app.core.errors import ParseError
from app.core.tolerance import Tolerance
from app.geometry.qb import DCCube, DCPatch
from app.geometry.quat import Quaternion
from app.schemas.cube import CubeFile, CubeMetadata, PatchFile

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
Model = TypeVar("Model", CubeFile, PatchFile)


def cube_to_file(D: DCCube, family: Optional[str] = None,
                 params: Optional[Dict[str, float]] = None,
                 notes: Sequence[str] = ()) -> CubeFile:
    entries = [
        [float(v) for v in np.concatenate([D.u[i], D.w[i]])]
        for i in range(8)
    ]
    return CubeFile(
        schema_version=settings.CUBE_SCHEMA_VERSION,
        entries=entries,
        metadata=CubeMetadata(
            family=family,
            params=dict(params or {}),
            app_version=settings.APP_VERSION,
            notes=list(notes),
        ),
    )


def cube_from_file(data: CubeFile, tol: Optional[Tolerance] = None) -> DCCube:
    """DCCube of a parsed file; raises InvariantViolation for nets off the Study quadric."""
    if data.schema_version > settings.CUBE_SCHEMA_VERSION:
        raise ParseError(
            f"cube file schema {data.schema_version} is newer than supported",
            {"supported": settings.CUBE_SCHEMA_VERSION},
        )
    rows = np.array(data.entries, dtype=float)
    cube = DCCube(rows[:, :4], rows[:, 4:])
    cube.check(tol)
    return cube


def parse_cube_file(text: Union[str, bytes]) -> CubeFile:
    return _parse(text, CubeFile)


def _parse(text: Union[str, bytes], model: Type[Model]) -> Model:
    try:
        raw = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ParseError(f"file is not valid JSON: {e}")
    if not isinstance(raw, dict):
        raise ParseError("file must contain a JSON object")
    try:
        return model.model_validate(raw)
    except ValidationError as e:
        raise ParseError(
            f"file does not match the {model.__name__} schema",
            {"errors": [f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()]},
        )


def dumps_cube(D: DCCube, family: Optional[str] = None,
               params: Optional[Dict[str, float]] = None,
               notes: Sequence[str] = ()) -> str:
    return json.dumps(cube_to_file(D, family, params, notes).model_dump(), indent=2) + "\n"


def loads_cube(text: Union[str, bytes], tol: Optional[Tolerance] = None) -> Tuple[DCCube, CubeFile]:
    data = parse_cube_file(text)
    return cube_from_file(data, tol), data


def save_cube(D: DCCube, path: PathLike, family: Optional[str] = None,
              params: Optional[Dict[str, float]] = None,
              notes: Sequence[str] = ()) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_cube(D, family, params, notes), encoding="utf-8")
    logger.info("wrote cube file %s", path)
    return path


def _read(path: PathLike) -> str:
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}", {"path": str(path)})


def read_cube_file(path: PathLike) -> CubeFile:
    return parse_cube_file(_read(path))


def load_cube(path: PathLike, tol: Optional[Tolerance] = None) -> DCCube:
    return cube_from_file(read_cube_file(path), tol)


# Patches

def patch_to_file(P: DCPatch, notes: Sequence[str] = ()) -> PatchFile:
    tangents = None
    if P.tangents is not None:
        tangents = [[float(v) for v in t.as_array()] for t in P.tangents]
    return PatchFile(
        schema_version=settings.CUBE_SCHEMA_VERSION,
        entries=[[float(v) for v in np.concatenate([P.u[i], P.w[i]])] for i in range(4)],
        tangents=tangents,
        metadata=CubeMetadata(app_version=settings.APP_VERSION, notes=list(notes)),
    )


def patch_from_file(data: PatchFile, tol: Optional[Tolerance] = None) -> DCPatch:
    rows = np.array(data.entries, dtype=float)
    tangents = None
    if data.tangents is not None:
        tangents = tuple(Quaternion.from_array(np.array(t, dtype=float)) for t in data.tangents)
    patch = DCPatch(rows[:, :4], rows[:, 4:], tangents)
    patch.check(tol)
    return patch


def save_patch(P: DCPatch, path: PathLike, notes: Sequence[str] = ()) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(patch_to_file(P, notes).model_dump(), indent=2) + "\n", encoding="utf-8")
    logger.info("wrote patch file %s", path)
    return path


def load_patch(path: PathLike, tol: Optional[Tolerance] = None) -> DCPatch:
    return patch_from_file(_parse(_read(path), PatchFile), tol)
