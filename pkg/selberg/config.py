"""Configuration module - numeric defaults, overridable from a settings file."""

import logging
from pathlib import Path

from dotenv import dotenv_values

from selberg.utils.helpers import ConfigError

logger = logging.getLogger(__name__)


class Config:
    """Toolkit configuration.

    Values are class attributes so every module reads the same settings.
    Overrides come only from an explicit settings file (``KEY=VALUE`` lines),
    never from the process environment.
    """

    # Plancherel normalization
    PLANCHEREL_CN: float = 1.0

    # Default expansion orders
    IDENTITY_ORDER: int = 6
    PARABOLIC_T_ORDER: int = 6
    TPRIME_ORDER: int = 4
    DEGREE_BUDGET_FACTOR: int = 3   # series degree D must be >= factor * order

    # Geometry
    ARCOSH_SERIES_SWITCH: float = 1e-4  # v = w - 1 below which the series is used

    # Quadrature oracle
    ORACLE_CUTOFF: float = 0.5          # radius of the C^2 bump
    ORACLE_GAUSS_NODES: int = 20        # Gauss-Legendre nodes per radial panel
    ORACLE_RADIAL_DEPTH: int = 40       # graded panels toward r = 0
    ORACLE_ANGULAR_NODES: int = 8       # Gauss-Legendre nodes per angle
    ORACLE_TOLERANCE: float = 1e-12
    ORACLE_PANEL_BUDGET: int = 320      # refinement stops past this many panels

    # Heat kernel quadrature
    KERNEL_DECAY_EXPONENT: float = 60.0  # integrate until r^2 / 4t reaches this
    AMPLITUDE_CUTOFF: float = 1.0        # cutoff radius for series amplitudes

    # Zeta regularization
    ZETA_T_MAX: float = 50.0
    ZETA_SMALL_T: float = 1e-4          # below this the remainder uses expansion terms
    ZETA_TOLERANCE: float = 1e-10
    HOLOMORPHY_TOLERANCE: float = 1e-10
    SPECTRAL_GRID_TOLERANCE: float = 1e-12

    # Runtime
    WORKERS: int = 4
    OUTPUT_DIGITS: int = 17
    LOG_LEVEL: str = "INFO"
    LOG_FILE: str = ""

    @classmethod
    def load_file(cls, path: str | Path) -> None:
        """Apply overrides from a settings file.

        Args:
            path: File with ``KEY=VALUE`` lines; keys are attribute names

        Raises:
            ConfigError: Unreadable file, unknown key or unparsable value
        """
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"Settings file not found: {path}")

        for key, raw in dotenv_values(path).items():
            if not key.isupper() or not hasattr(cls, key):
                raise ConfigError(f"Unknown setting: {key}")
            if raw is None:
                raise ConfigError(f"Setting {key} has no value")
            current = getattr(cls, key)
            try:
                value = type(current)(raw)
            except ValueError as e:
                raise ConfigError(f"Invalid value for {key}: {raw!r}") from e
            setattr(cls, key, value)
            logger.debug(f"Setting {key} = {value!r} (from {path})")

    @classmethod
    def validate(cls) -> None:
        """Validate numeric settings."""
        if cls.PLANCHEREL_CN <= 0:
            raise ConfigError("PLANCHEREL_CN must be positive")
        for key in ("IDENTITY_ORDER", "PARABOLIC_T_ORDER", "TPRIME_ORDER"):
            if getattr(cls, key) < 0:
                raise ConfigError(f"{key} must be nonnegative")
        if cls.DEGREE_BUDGET_FACTOR < 2:
            raise ConfigError("DEGREE_BUDGET_FACTOR must be at least 2")
        for key in (
            "ARCOSH_SERIES_SWITCH",
            "ORACLE_CUTOFF",
            "ORACLE_TOLERANCE",
            "KERNEL_DECAY_EXPONENT",
            "AMPLITUDE_CUTOFF",
            "ZETA_SMALL_T",
            "ZETA_TOLERANCE",
            "HOLOMORPHY_TOLERANCE",
            "SPECTRAL_GRID_TOLERANCE",
        ):
            if getattr(cls, key) <= 0:
                raise ConfigError(f"{key} must be positive")
        if cls.ZETA_SMALL_T >= 1:
            raise ConfigError("ZETA_SMALL_T must be below 1")
        if cls.ZETA_T_MAX <= 1:
            raise ConfigError("ZETA_T_MAX must exceed 1")
        if min(cls.ORACLE_GAUSS_NODES, cls.ORACLE_RADIAL_DEPTH, cls.ORACLE_ANGULAR_NODES) < 1:
            raise ConfigError("Oracle node counts must be positive")
        if cls.ORACLE_PANEL_BUDGET < 2 * cls.ORACLE_RADIAL_DEPTH:
            raise ConfigError("ORACLE_PANEL_BUDGET must be at least twice ORACLE_RADIAL_DEPTH")
        if cls.WORKERS < 1:
            raise ConfigError("WORKERS must be at least 1")
        if cls.LOG_LEVEL.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR"):
            raise ConfigError(f"Unknown LOG_LEVEL: {cls.LOG_LEVEL}")


config = Config()
