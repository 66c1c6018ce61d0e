#!/usr/bin/env python3
"""Uvicorn entry point for the DupinCube HTTP service.

Run as ``python main.py`` or ``uvicorn main:app``; the command line tool
lives in ``app.cli``.
"""

import uvicorn

from app import create_app
from app.core.config import settings

app = create_app()


def run() -> None:
    uvicorn.run(
        "main:app",
        host=settings.HOST,
        port=settings.PORT,
        reload=settings.DEBUG,
        log_level=settings.LOG_LEVEL.lower(),
    )


if __name__ == "__main__":
    run()
