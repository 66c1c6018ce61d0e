"""
Pydantic schemas for request/response validation
"""

from app.schemas.cube import (
    BuildRequest,
    BuildResponse,
    CubeFile,
    CubeMetadata,
    PatchFile
)
from app.schemas.report import (
    ClassificationReport,
    CurveDescriptorSchema,
    SingularCurveSchema,
    SingularLocusReport
)
from app.schemas.common import (
    ErrorResponse,
    FamilyInfo
)

__all__ = [
    "BuildRequest",
    "BuildResponse",
    "CubeFile",
    "CubeMetadata",
    "PatchFile",
    "ClassificationReport",
    "CurveDescriptorSchema",
    "SingularCurveSchema",
    "SingularLocusReport",
    "ErrorResponse",
    "FamilyInfo"
]
