"""Reading and writing the JSON inputs and reports."""

import json
import logging
from pathlib import Path
from typing import Dict, Optional

from selberg.data.models import (
    ContinuousSpectrum,
    LengthSpectrumEntry,
    ManifoldData,
    SmallTimeExpansion,
    SpectralData,
)
from selberg.utils.helpers import (
    InputFormatError,
    ManifestReadError,
    PreconditionError,
    SelbergError,
    parse_rational,
    weight_key,
)
from selberg.utils.rep_theory import Dimension, GroupKind, KWeight
from selberg.utils.series import TruncatedSeries
from selberg.utils.trace_formula import HeatAmplitude

logger = logging.getLogger(__name__)


def read_json(path, kind: str = "manifest"):
    """Parse a JSON file, mapping I/O and syntax failures to toolkit errors."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ManifestReadError(str(path), e.strerror or str(e), kind) from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputFormatError(e.msg, str(path), e.lineno, e.colno) from e


def dump_json(data) -> str:
    """Serialize a report; floats keep their shortest round-trip form."""
    try:
        return json.dumps(data, indent=2, allow_nan=False)
    except ValueError as e:
        raise PreconditionError(f"Report contains a non-finite number: {e}") from e


def _require_mapping(data, what: str, path: Optional[str]) -> dict:
    if not isinstance(data, dict):
        raise InputFormatError(f"{what} must be a JSON object", path)
    return data


# ============================================================================
# Manifold data
# ============================================================================

def _character_value(value) -> complex:
    if isinstance(value, (list, tuple)):
        re, im = value
        return complex(float(re), float(im))
    return complex(float(value))


def manifold_from_json(data, path: Optional[str] = None) -> ManifoldData:
    """Build ManifoldData from its JSON object."""
    data = _require_mapping(data, "Manifold data", path)
    try:
        kind = GroupKind(data.get("group", GroupKind.SO0.value))
        dim = Dimension.from_d(int(data["dim"]), kind)
        spectrum = []
        for item in data.get("spectrum", []):
            characters = None
            if "characters" in item:
                characters = {
                    weight_key(parse_rational(part) for part in key.split(",")): _character_value(v)
                    for key, v in item["characters"].items()
                }
            spectrum.append(
                LengthSpectrumEntry(
                    float(item["ell"]),
                    float(item.get("ell0", item["ell"])),
                    tuple(float(a) for a in item.get("angles", [])),
                    characters,
                )
            )
        manifold = ManifoldData(
            dim=dim,
            volume=float(data["volume"]),
            kappa=int(data.get("kappa", 0)),
            C1=float(data.get("C1", 0.0)),
            C2=float(data.get("C2", 0.0)),
            spectrum=tuple(spectrum),
            c_n=float(data.get("cn", 1.0)),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise InputFormatError(f"Malformed manifold data: {e!r}", path) from e
    logger.debug(f"Manifold: d={dim.d}, volume={manifold.volume}, {len(spectrum)} geodesics")
    return manifold


def load_manifold(path) -> ManifoldData:
    return manifold_from_json(read_json(path, "manifest"), str(path))


# ============================================================================
# Spectral data and expansions
# ============================================================================

def spectral_from_json(data, path: Optional[str] = None) -> SpectralData:
    """Build SpectralData from its JSON object."""
    data = _require_mapping(data, "Spectral data", path)
    try:
        eigenvalues = tuple(
            (float(item["lam"]), int(item.get("mult", 1))) for item in data.get("eigenvalues", [])
        )
        continuous = None
        if data.get("continuous") is not None:
            part = data["continuous"]
            continuous = ContinuousSpectrum(
                grid=part["grid"],
                values=part["values"],
                shifts=tuple(float(s) for s in part.get("shifts", [0.0])),
                c_zero=tuple(float(c) for c in part.get("c_zero", [])),
            )
        return SpectralData(eigenvalues, int(data.get("h", 0)), continuous)
    except (KeyError, TypeError, ValueError) as e:
        raise InputFormatError(f"Malformed spectral data: {e!r}", path) from e


def _per_degree(data, d: int, path: Optional[str], single_key: str) -> Dict[int, object]:
    """Split a per-degree file: a list, {"degrees": {...}}, or one object for every p."""
    if isinstance(data, list):
        if len(data) != d:
            raise InputFormatError(f"Expected {d} per-degree entries, got {len(data)}", path)
        return {p: item for p, item in enumerate(data, start=1)}
    data = _require_mapping(data, "Per-degree data", path)
    if "degrees" in data:
        try:
            items = {int(p): item for p, item in data["degrees"].items()}
        except (AttributeError, ValueError) as e:
            raise InputFormatError(f"Malformed degree table: {e!r}", path) from e
        missing = [p for p in range(1, d + 1) if p not in items]
        if missing:
            raise InputFormatError(f"Missing degrees {missing}", path)
        return items
    if single_key in data:
        logger.info(f"One model in {path} is used for every degree p = 1..{d}")
        return {p: data for p in range(1, d + 1)}
    raise InputFormatError("Unrecognized per-degree layout", path)


def load_spectral(path, d: int) -> Dict[int, SpectralData]:
    """Spectral models per degree p = 1..d."""
    raw = read_json(path, "spectral data")
    items = _per_degree(raw, d, str(path), "eigenvalues")
    return {p: spectral_from_json(item, str(path)) for p, item in items.items()}


def load_expansions(path, d: int) -> Dict[int, SmallTimeExpansion]:
    """Small-time expansions per degree p = 1..d."""
    dim = Dimension.from_d(d)
    raw = read_json(path, "expansions")
    items = _per_degree(raw, d, str(path), "terms")
    out = {}
    for p, item in items.items():
        try:
            out[p] = SmallTimeExpansion.from_json(item)
            out[p].check_dimension(dim)
        except SelbergError as e:
            raise InputFormatError(str(e), str(path)) from e
    return out


def load_series(path) -> TruncatedSeries:
    raw = _require_mapping(read_json(path, "series"), "Series", str(path))
    try:
        return TruncatedSeries.from_json(raw)
    except SelbergError as e:
        raise InputFormatError(str(e), str(path)) from e


def load_amplitude(path, nu: KWeight, dim: Dimension) -> HeatAmplitude:
    """Heat amplitudes {"radial": [series in u, ...], "normalization": optional}."""
    raw = _require_mapping(read_json(path, "amplitude"), "Amplitude", str(path))
    try:
        radial = tuple(TruncatedSeries.from_json(item) for item in raw["radial"])
        normalization = float(raw.get("normalization", 0.0))
        exact_kernel = bool(raw.get("exact_kernel", False))
    except (KeyError, TypeError, ValueError) as e:
        raise InputFormatError(f"Malformed amplitude: {e!r}", str(path)) from e
    return HeatAmplitude(nu, dim, radial, normalization, exact_kernel)
