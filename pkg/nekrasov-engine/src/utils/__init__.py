"""Shared utilities: errors, settings and worker pools."""

from .errors import (
    AlgebraError,
    CharacterError,
    ClassEvaluationError,
    EngineError,
    FitError,
    PartitionError,
    PerturbativeDomainError,
    QuadratureError,
    ResonantDirectionError,
    SeriesError,
    SurfaceError,
    SurfaceValidationError,
    SWCurveError,
    TheoryError,
)
from .parallel import parallel_map
from .settings import EngineSettings, find_and_load_env_file, get_settings

__all__ = [
    "AlgebraError",
    "CharacterError",
    "ClassEvaluationError",
    "EngineError",
    "FitError",
    "PartitionError",
    "PerturbativeDomainError",
    "QuadratureError",
    "ResonantDirectionError",
    "SeriesError",
    "SurfaceError",
    "SurfaceValidationError",
    "SWCurveError",
    "TheoryError",
    "parallel_map",
    "EngineSettings",
    "find_and_load_env_file",
    "get_settings",
]
