"""
Application configuration
"""

from typing import List
from pydantic_settings import BaseSettings
from pydantic import Field


class Settings(BaseSettings):
    """Application settings"""

    # Application
    APP_NAME: str = "DupinCube"
    APP_VERSION: str = "0.3.0"
    DEBUG: bool = Field(default=False, env="DEBUG")
    HOST: str = Field(default="0.0.0.0", env="HOST")
    PORT: int = Field(default=10001, env="PORT")
    LOG_LEVEL: str = Field(default="INFO", env="LOG_LEVEL")

    # CORS
    CORS_ORIGINS: List[str] = Field(
        default=["*"],
        env="CORS_ORIGINS"
    )

    # File Upload
    MAX_UPLOAD_SIZE: int = Field(default=5 * 1024 * 1024, env="MAX_UPLOAD_SIZE")  # 5MB
    EXPORT_PATH: str = Field(default="exports", env="EXPORT_PATH")
    CUBE_SCHEMA_VERSION: int = 1

    # Numerics
    TOL_ABS: float = Field(default=1e-9, env="TOL_ABS")
    TOL_REL: float = Field(default=1e-9, env="TOL_REL")
    SEED: int = Field(default=0, env="SEED")

    # Sampling
    CLIP_RADIUS_FACTOR: float = Field(default=10.0, env="CLIP_RADIUS_FACTOR")
    MESH_RESOLUTION: int = Field(default=24, env="MESH_RESOLUTION")
    TRACE_RESOLUTION: int = Field(default=160, env="TRACE_RESOLUTION")
    DEGREE_POINTS: int = Field(default=3, env="DEGREE_POINTS")

    class Config:
        env_file = ".env"
        case_sensitive = True
        extra = "allow"


# Create settings instance
settings = Settings()
