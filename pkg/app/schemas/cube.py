"""
Cube file schema

A cube file is JSON text. ``entries`` holds the eight control points in flat
index order i + 2j + 4k, each as eight reals: u (r, x, y, z) then w (r, x, y, z).
Patch files use the same layout with four entries.
"""

from typing import Dict, List, Optional
from pydantic import BaseModel, Field, FiniteFloat, field_validator

from app.core.config import settings


class CubeMetadata(BaseModel):
    """Where a cube came from"""
    family: Optional[str] = None
    params: Dict[str, float] = Field(default_factory=dict)
    app_version: Optional[str] = None
    notes: List[str] = Field(default_factory=list)


def _check_rows(value: List[List[float]], count: int) -> List[List[float]]:
    if len(value) != count:
        raise ValueError(f"expected {count} control points, got {len(value)}")
    for index, row in enumerate(value):
        if len(row) != 8:
            raise ValueError(f"control point {index} has {len(row)} reals, expected 8")
    return value


class CubeFile(BaseModel):
    """Serialized DC cube"""
    schema_version: int = Field(default=settings.CUBE_SCHEMA_VERSION, ge=1)
    entries: List[List[FiniteFloat]]
    metadata: CubeMetadata = Field(default_factory=CubeMetadata)

    @field_validator("entries")
    @classmethod
    def check_shape(cls, value: List[List[float]]) -> List[List[float]]:
        return _check_rows(value, 8)


class PatchFile(BaseModel):
    """Serialized DC patch (four control points in order i + 2j)

    ``tangents`` optionally fixes the unit tangents at the first corner, as
    used by the offset construction.
    """
    schema_version: int = Field(default=settings.CUBE_SCHEMA_VERSION, ge=1)
    entries: List[List[FiniteFloat]]
    tangents: Optional[List[List[FiniteFloat]]] = None
    metadata: CubeMetadata = Field(default_factory=CubeMetadata)

    @field_validator("entries")
    @classmethod
    def check_shape(cls, value: List[List[float]]) -> List[List[float]]:
        return _check_rows(value, 4)

    @field_validator("tangents")
    @classmethod
    def check_tangents(cls, value: Optional[List[List[float]]]) -> Optional[List[List[float]]]:
        if value is not None and (len(value) != 2 or any(len(row) != 4 for row in value)):
            raise ValueError("tangents must be two quaternions of 4 reals")
        return value


class BuildRequest(BaseModel):
    """Build a cube from a catalog family"""
    family: str = Field(..., min_length=1)
    params: Optional[List[float]] = None


class BuildResponse(BaseModel):
    """Built cube with its control points and spherical polynomials"""
    cube: CubeFile
    control_points: List[str]
    sigma: Dict[str, List[float]]
    expected: Optional[str] = None
    notes: List[str] = Field(default_factory=list)
