# ABOUTME: Initialize services package and export service instances
# ABOUTME: Makes services directory a Python package and provides access to the operator services

from .diffops_service import diffops_service
from .eigenmode_service import eigenmode_service
from .grid_service import grid_service
from .position_service import position_service
from .ray_transform_service import ray_transform_service
from .report_service import report_service

__all__ = [
    "diffops_service",
    "eigenmode_service",
    "grid_service",
    "position_service",
    "ray_transform_service",
    "report_service",
]
