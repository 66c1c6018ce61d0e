"""
Report schemas: classification results and exported singular curves
"""

from typing import Dict, List, Optional
from pydantic import BaseModel, Field

from app.core.config import settings


class CurveDescriptorSchema(BaseModel):
    """One singular curve as reported"""
    kind: str
    direction: Optional[str] = None
    multiplicity: int = 1
    components: Optional[int] = None
    coefficients: Dict[str, float] = Field(default_factory=dict)
    confidence: float = 1.0
    description: str = ""


class ClassificationReport(BaseModel):
    """Machine-readable result of classify"""
    app_name: str = settings.APP_NAME
    app_version: str = settings.APP_VERSION
    source: Optional[str] = None
    coarse: str
    subtype: Optional[str] = None
    label: str
    summary: str
    parameters: Dict[str, float] = Field(default_factory=dict)
    sigma: Dict[str, List[float]] = Field(default_factory=dict)
    singular: List[CurveDescriptorSchema] = Field(default_factory=list)
    degree: Optional[int] = None
    notes: List[str] = Field(default_factory=list)
    tolerance: Dict[str, float] = Field(default_factory=dict)
    seed: Optional[int] = None


class SingularCurveSchema(BaseModel):
    """A traced singular curve with its carrier and sampled polyline"""
    direction: str
    kind: str
    closed: bool
    carrier: Optional[List[float]] = None
    carrier_plane: Optional[str] = None
    coefficients: Dict[str, float] = Field(default_factory=dict)
    max_jacobian: float
    polyline: List[List[float]] = Field(default_factory=list)


class SingularLocusReport(BaseModel):
    """All singular curves of a cube plus collapsed slice points"""
    curves: List[SingularCurveSchema] = Field(default_factory=list)
    points: List[str] = Field(default_factory=list)
