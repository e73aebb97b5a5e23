# -*- coding: utf-8 -*-
"""Configuration module for the engine.

Contains all constants, file-format settings and the pipeline configuration
loaded from a small ``KEY=VALUE`` file. The process environment is never read.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, Optional

from dotenv import dotenv_values

from ptree.utils.errors import ConfigError
from ptree.utils.validators import validate_fraction, validate_positive

logger = logging.getLogger(__name__)

# File formats
BSQ_MAGIC: bytes = b"BSQ1"
PTREE_MAGIC: bytes = b"PTR1"
MAX_SIDE: int = 32768  # side is stored as u16 and must be a power of two
BITS_PER_BAND: int = 8

# Gene calling defaults
DEFAULT_RHO: float = 0.5
DEFAULT_Z: float = 2.0
DEFAULT_PSEUDOCOUNT: float = 1.0
MIN_REFERENCE_SPOTS: int = 2

# Mining defaults
DEFAULT_MINSUP: float = 0.5
DEFAULT_MINCONF: float = 0.7
DEFAULT_MODE: str = "any"
MINING_MODES = ("any", "xy")

# Runtime
DEFAULT_WORKERS: int = 1
DEFAULT_LOG_LEVEL: str = "WARNING"


def _get_float(values: Dict[str, Optional[str]], name: str, default: float) -> float:
    """Return a float setting with a safe fallback."""
    raw_value = values.get(name)
    if raw_value is None or raw_value == "":
        return default

    try:
        return float(raw_value)
    except ValueError:
        logger.warning("Invalid number for %s: %s. Using default %s.", name, raw_value, default)
        return default


def _get_int(values: Dict[str, Optional[str]], name: str, default: Optional[int]) -> Optional[int]:
    """Return an integer setting with a safe fallback."""
    raw_value = values.get(name)
    if raw_value is None or raw_value == "":
        return default

    try:
        return int(raw_value)
    except ValueError:
        logger.warning("Invalid integer for %s: %s. Using default %s.", name, raw_value, default)
        return default


def _get_path(values: Dict[str, Optional[str]], name: str, base: Path) -> Optional[Path]:
    raw_value = values.get(name)
    if not raw_value:
        return None
    path = Path(raw_value)
    return path if path.is_absolute() else base / path


@dataclass(frozen=True)
class PipelineConfig:
    """Parameters shared by the ``call`` and ``mine`` stages."""

    spots: Optional[Path] = None
    manifest: Optional[Path] = None
    output_dir: Optional[Path] = None
    rho: float = DEFAULT_RHO
    z: float = DEFAULT_Z
    pseudocount: float = DEFAULT_PSEUDOCOUNT
    minsup: float = DEFAULT_MINSUP
    minconf: float = DEFAULT_MINCONF
    mode: str = DEFAULT_MODE
    workers: int = DEFAULT_WORKERS
    max_itemset_size: Optional[int] = None
    log_level: str = DEFAULT_LOG_LEVEL

    def __post_init__(self) -> None:
        try:
            validate_fraction(self.rho, "rho")
            validate_positive(self.z, "z")
            validate_positive(self.pseudocount, "pseudocount")
            validate_fraction(self.minsup, "minsup")
            validate_fraction(self.minconf, "minconf")
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.mode not in MINING_MODES:
            raise ConfigError(f"mode must be one of {', '.join(MINING_MODES)}, got {self.mode!r}.")
        if self.workers < 1:
            raise ConfigError(f"workers must be at least 1, got {self.workers}.")
        if self.max_itemset_size is not None and self.max_itemset_size < 2:
            raise ConfigError(f"max itemset size must be at least 2, got {self.max_itemset_size}.")
        if logging.getLevelName(self.log_level.upper()) not in (
            logging.DEBUG, logging.INFO, logging.WARNING, logging.ERROR, logging.CRITICAL
        ):
            raise ConfigError(f"Unknown log level {self.log_level!r}.")

    def override(self, **changes: object) -> "PipelineConfig":
        """Return a copy with every non-None keyword applied."""
        applied = {key: value for key, value in changes.items() if value is not None}
        return replace(self, **applied) if applied else self


def load_pipeline_config(path: Optional[Path | str] = None) -> PipelineConfig:
    """Load a pipeline configuration file.

    Args:
        path: ``KEY=VALUE`` file; relative paths inside it resolve against its
            directory. ``None`` yields the defaults.

    Returns:
        PipelineConfig: Validated configuration.

    Raises:
        ConfigError: If a parsed value lies outside its documented range.
        FileNotFoundError: If the file does not exist.
    """
    if path is None:
        return PipelineConfig()

    config_path = Path(path)
    if not config_path.is_file():
        raise FileNotFoundError(f"Configuration file not found: {config_path}")

    values = dotenv_values(config_path)
    base = config_path.parent
    logger.info("Loaded configuration from %s", config_path)

    return PipelineConfig(
        spots=_get_path(values, "SPOTS", base),
        manifest=_get_path(values, "MANIFEST", base),
        output_dir=_get_path(values, "OUTPUT_DIR", base),
        rho=_get_float(values, "RHO", DEFAULT_RHO),
        z=_get_float(values, "Z", DEFAULT_Z),
        pseudocount=_get_float(values, "PSEUDOCOUNT", DEFAULT_PSEUDOCOUNT),
        minsup=_get_float(values, "MINSUP", DEFAULT_MINSUP),
        minconf=_get_float(values, "MINCONF", DEFAULT_MINCONF),
        mode=(values.get("MODE") or DEFAULT_MODE).strip().lower(),
        workers=_get_int(values, "WORKERS", DEFAULT_WORKERS),
        max_itemset_size=_get_int(values, "MAX_ITEMSET_SIZE", None),
        log_level=(values.get("LOG_LEVEL") or DEFAULT_LOG_LEVEL).strip().upper(),
    )
