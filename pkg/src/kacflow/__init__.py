"""Finite-speed Kac-flow generative modeling at desk scale."""

__version__ = "0.1.0"

from .kac_core import KacParams, Schedule, SeedSpec, linear_schedule, quadratic_schedule

__all__ = [
    "KacParams",
    "Schedule",
    "SeedSpec",
    "linear_schedule",
    "quadratic_schedule",
    "__version__",
]
