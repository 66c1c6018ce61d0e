"""
Canonical family catalog endpoints
"""

from typing import List
from fastapi import APIRouter

from app.geometry.canonical import catalog
from app.schemas.common import FamilyInfo

router = APIRouter()


@router.get("", response_model=List[FamilyInfo])
async def list_families():
    """List every catalog family with its parameter names and defaults"""
    return [
        FamilyInfo(
            label=spec.label,
            parameters=list(spec.parameters),
            defaults=list(spec.defaults),
            description=spec.description,
        )
        for spec in catalog()
    ]
