"""Record types and JSON input/output."""

from selberg.data.models import (
    LengthSpectrumEntry,
    LogExpansion,
    ManifoldData,
    SmallTimeExpansion,
    SpectralData,
)

__all__ = [
    "LengthSpectrumEntry",
    "LogExpansion",
    "ManifoldData",
    "SmallTimeExpansion",
    "SpectralData",
]
