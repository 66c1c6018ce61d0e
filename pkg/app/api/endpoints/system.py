"""
System information endpoints
"""

from datetime import datetime, timezone
from fastapi import APIRouter
from app.core.config import settings

router = APIRouter()

# Store server start time
server_start_time = datetime.now(timezone.utc)


def format_uptime(seconds: float) -> str:
    days, rest = divmod(int(seconds), 24 * 3600)
    hours, rest = divmod(rest, 3600)
    minutes, secs = divmod(rest, 60)
    parts = [f"{v}{unit}" for v, unit in ((days, "d"), (hours, "h"), (minutes, "m")) if v > 0]
    parts.append(f"{secs}s")
    return " ".join(parts)


@router.get("/info")
async def get_system_info():
    """Name, version, uptime and the numeric defaults in effect"""
    current_time = datetime.now(timezone.utc)
    uptime_seconds = (current_time - server_start_time).total_seconds()
    return {
        "app_name": settings.APP_NAME,
        "version": settings.APP_VERSION,
        "uptime": format_uptime(uptime_seconds),
        "uptime_seconds": int(uptime_seconds),
        "server_start_time": server_start_time.isoformat(),
        "tolerance": {"abs_tol": settings.TOL_ABS, "rel_tol": settings.TOL_REL},
        "trace_resolution": settings.TRACE_RESOLUTION,
        "cube_schema_version": settings.CUBE_SCHEMA_VERSION
    }
