"""
Common schemas used across the application
"""

from typing import Any, Dict, List
from pydantic import BaseModel, Field


class ErrorResponse(BaseModel):
    """Body of every domain error returned by the service"""
    detail: str
    error: str
    context: Dict[str, Any] = Field(default_factory=dict)


class FamilyInfo(BaseModel):
    """One entry of the canonical family catalog"""
    label: str
    parameters: List[str]
    defaults: List[float]
    description: str = ""