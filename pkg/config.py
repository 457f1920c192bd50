# ABOUTME: Configuration management for the operator verification harness
# ABOUTME: Handles environment variables, validation, and numerical defaults (quadrature, differencing)

import sys
from typing import Literal
from pydantic import field_validator, ValidationError
from pydantic_settings import BaseSettings

class Settings(BaseSettings):
    # Environment
    ENVIRONMENT: Literal["development", "production"] = "development"

    # Logging
    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "INFO"

    # Check suite
    TOL_PROFILE: Literal["strict", "default", "fast"] = "default"
    SEED: int = 20240101
    WORKERS: int = 4
    OUTPUT_DIR: str = "reports"

    # Finite differences
    FD_STEP: float = 1e-2
    AXIS_TUBE: float = 1e-6

    # Ray quadrature
    QUAD_U_MAX: float = 200.0
    QUAD_PANELS: int = 512
    QUAD_TAIL_TERMS: int = 3
    QUAD_PV_GAP: float = 1e-4
    QUAD_TOLERANCE: float = 1e-7
    QUAD_MAX_DOUBLINGS: int = 4

    @field_validator("WORKERS")
    @classmethod
    def validate_workers(cls, v: int) -> int:
        if v < 1:
            raise ValueError("WORKERS must be at least 1")
        return v

    @field_validator("FD_STEP")
    @classmethod
    def validate_fd_step(cls, v: float) -> float:
        if not 0.0 < v <= 0.1:
            raise ValueError("FD_STEP must lie in (0, 0.1]")
        return v

    @field_validator("AXIS_TUBE")
    @classmethod
    def validate_axis_tube(cls, v: float) -> float:
        if not 0.0 < v < 1e-2:
            raise ValueError("AXIS_TUBE must lie in (0, 1e-2)")
        return v

    @field_validator("QUAD_U_MAX")
    @classmethod
    def validate_u_max(cls, v: float) -> float:
        if v < 50.0:
            raise ValueError("QUAD_U_MAX must be at least 50")
        return v

    @field_validator("QUAD_PANELS")
    @classmethod
    def validate_panels(cls, v: int) -> int:
        if v < 64:
            raise ValueError("QUAD_PANELS must be at least 64")
        return v

    @field_validator("QUAD_TAIL_TERMS", "QUAD_MAX_DOUBLINGS")
    @classmethod
    def validate_counts(cls, v: int, info) -> int:
        minimum = 1 if info.field_name == "QUAD_TAIL_TERMS" else 0
        if v < minimum:
            raise ValueError(f"{info.field_name} must be at least {minimum}")
        return v

    @field_validator("QUAD_PV_GAP")
    @classmethod
    def validate_pv_gap(cls, v: float) -> float:
        if not 0.0 < v <= 1e-3:
            raise ValueError("QUAD_PV_GAP must lie in (0, 1e-3]")
        return v

    @field_validator("QUAD_TOLERANCE")
    @classmethod
    def validate_tolerance(cls, v: float) -> float:
        if v <= 0.0:
            raise ValueError("QUAD_TOLERANCE must be positive")
        return v

    class Config:
        env_file = ".env"
        case_sensitive = True

def get_settings() -> Settings:
    try:
        return Settings()
    except ValidationError as e:
        print(f"Configuration validation error: {e}")
        sys.exit(1)

settings = get_settings()
