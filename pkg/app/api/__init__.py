"""
API router aggregation
"""

from fastapi import APIRouter
from app.api.endpoints import cubes, families, system

api_router = APIRouter()

api_router.include_router(
    system.router,
    prefix="/system",
    tags=["System"]
)

api_router.include_router(
    families.router,
    prefix="/families",
    tags=["Families"]
)

api_router.include_router(
    cubes.router,
    prefix="/cubes",
    tags=["Cubes"]
)
