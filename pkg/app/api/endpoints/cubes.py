"""
Cube endpoints: build from the catalog, classify, trace singular curves
"""

import logging
from typing import Optional
from fastapi import APIRouter, File, HTTPException, Query, UploadFile
from starlette.concurrency import run_in_threadpool

from app.core.config import settings
from app.core.tolerance import Tolerance
from app.geometry.analysis.classify import classify
from app.geometry.analysis.singular import singular_locus
from app.geometry.canonical import CATALOG, build_family
from app.geometry.qb import DCCube
from app.io.cube_file import cube_from_file, cube_to_file, parse_cube_file
from app.io.report import build_report, locus_report, sigma_table
from app.schemas.common import ErrorResponse
from app.schemas.cube import BuildRequest, BuildResponse, CubeFile
from app.schemas.report import ClassificationReport, SingularLocusReport

logger = logging.getLogger(__name__)

router = APIRouter()

ERRORS = {400: {"model": ErrorResponse}, 422: {"model": ErrorResponse}}


def _tolerance(tol_abs: Optional[float], tol_rel: Optional[float]) -> Tolerance:
    return Tolerance(
        abs_tol=settings.TOL_ABS if tol_abs is None else tol_abs,
        rel_tol=settings.TOL_REL if tol_rel is None else tol_rel,
    )


async def _classify(cube: DCCube, source: Optional[str], degree: bool, tol: Tolerance,
                    seed: Optional[int]) -> ClassificationReport:
    result = await run_in_threadpool(classify, cube, tol, degree, None, seed)
    return build_report(result, cube, source=source, tol=tol, seed=seed)


@router.post("/build", response_model=BuildResponse, responses=ERRORS)
async def build_cube(request: BuildRequest):
    """Build a cube of a catalog family"""
    if request.family not in CATALOG:
        raise HTTPException(
            status_code=404,
            detail=f"Unknown family '{request.family}'. Known families: {sorted(CATALOG)}"
        )
    built = build_family(request.family, request.params)
    return BuildResponse(
        cube=cube_to_file(built.cube, built.label, built.params, built.notes),
        control_points=[str(p) for p in built.cube.control_points()],
        sigma=sigma_table(built.cube),
        expected=built.expected.summary() if built.expected else None,
        notes=built.notes,
    )


@router.post("/classify", response_model=ClassificationReport, responses=ERRORS)
async def classify_cube(
    cube: CubeFile,
    degree: bool = Query(default=False),
    tol_abs: Optional[float] = Query(default=None, gt=0),
    tol_rel: Optional[float] = Query(default=None, ge=0),
    seed: Optional[int] = Query(default=None)
):
    """Classify the DC system of a cube given as cube file JSON"""
    tol = _tolerance(tol_abs, tol_rel)
    D = cube_from_file(cube, tol)
    return await _classify(D, cube.metadata.family, degree, tol, seed)


@router.post("/upload", response_model=ClassificationReport, responses=ERRORS)
async def upload_cube(
    file: UploadFile = File(...),
    degree: bool = Query(default=False),
    seed: Optional[int] = Query(default=None)
):
    """Classify an uploaded cube file"""
    content = await file.read()
    if len(content) > settings.MAX_UPLOAD_SIZE:
        raise HTTPException(
            status_code=413,
            detail=f"File exceeds {settings.MAX_UPLOAD_SIZE} bytes"
        )
    tol = _tolerance(None, None)
    D = cube_from_file(parse_cube_file(content), tol)
    logger.info("classifying uploaded cube %s", file.filename)
    return await _classify(D, file.filename, degree, tol, seed)


@router.post("/singular", response_model=SingularLocusReport, responses=ERRORS)
async def singular_curves(
    cube: CubeFile,
    resolution: Optional[int] = Query(default=None, ge=16, le=1024)
):
    """Trace the singular curves of a cube"""
    tol = _tolerance(None, None)
    D = cube_from_file(cube, tol)
    locus = await run_in_threadpool(singular_locus, D, tol, resolution)
    return locus_report(locus)
