"""Environment-driven settings for the engine."""

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv


def find_and_load_env_file() -> Optional[Path]:
    """Find and load the nearest .env file."""
    env_paths = [
        Path(".env"),  # Current directory
        Path("../.env"),  # Parent directory
        Path("../../.env"),  # Grandparent directory
        Path("../nekrasov-engine/.env"),  # engine directory
    ]

    for env_path in env_paths:
        if env_path.exists():
            load_dotenv(dotenv_path=str(env_path.absolute()))
            return env_path.absolute()

    return None


@dataclass(frozen=True)
class EngineSettings:
    dps: int = 40
    threads: int = 1
    seed: int = 20240601
    elliptic_terms: int = 8
    sw_tolerance: float = 1e-6
    sw_tolerance_order2: float = 1e-5
    pert_tolerance: float = 1e-5


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        return default


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        return default


def get_settings() -> EngineSettings:
    """Build settings from NEKRASOV_* environment variables"""
    find_and_load_env_file()
    defaults = EngineSettings()
    return EngineSettings(
        dps=_env_int("NEKRASOV_DPS", defaults.dps),
        threads=max(1, _env_int("NEKRASOV_THREADS", defaults.threads)),
        seed=_env_int("NEKRASOV_SEED", defaults.seed),
        elliptic_terms=_env_int("NEKRASOV_ELLIPTIC_TERMS", defaults.elliptic_terms),
        sw_tolerance=_env_float("NEKRASOV_SW_TOL", defaults.sw_tolerance),
        sw_tolerance_order2=_env_float("NEKRASOV_SW_TOL2", defaults.sw_tolerance_order2),
        pert_tolerance=_env_float("NEKRASOV_PERT_TOL", defaults.pert_tolerance),
    )
