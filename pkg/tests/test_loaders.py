from __future__ import annotations

import json
import math
from pathlib import Path

import pytest

from selberg.data.loaders import (
    dump_json,
    load_amplitude,
    load_expansions,
    load_manifold,
    load_series,
    load_spectral,
    read_json,
)
from selberg.data.models import SmallTimeExpansion
from selberg.utils.helpers import InputFormatError, ManifestReadError, PreconditionError, SelbergError
from selberg.utils.rep_theory import Dimension, KWeight

D3 = Dimension.from_d(3)

MANIFOLD = {
    "dim": 3,
    "volume": 2.0298832,
    "kappa": 1,
    "C1": 0.3,
    "C2": -0.1,
    "spectrum": [
        {"ell": 1.0877, "angles": [1.5]},
        {"ell": 2.1754, "ell0": 1.0877, "angles": [3.0], "characters": {"1": [0.5, -0.25]}},
    ],
}


def _write(tmp_path: Path, name: str, data) -> Path:
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data), encoding="utf-8")
    return path


def test_load_manifold(tmp_path: Path) -> None:
    manifold = load_manifold(_write(tmp_path, "m.json", MANIFOLD))
    assert manifold.dim == D3
    assert manifold.kappa == 1 and manifold.C2 == -0.1
    first, second = manifold.spectrum
    assert first.ell0 == first.ell
    assert second.characters == {"1": complex(0.5, -0.25)}


def test_missing_manifest(tmp_path: Path) -> None:
    with pytest.raises(ManifestReadError, match="cannot read manifest"):
        load_manifold(tmp_path / "missing.json")


def test_malformed_json_reports_position(tmp_path: Path) -> None:
    with pytest.raises(InputFormatError) as info:
        read_json(_write(tmp_path, "bad.json", '{\n  "dim": 3,\n  "volume": }'))
    assert info.value.line == 3


def test_manifold_validation(tmp_path: Path) -> None:
    broken = dict(MANIFOLD, volume="large")
    with pytest.raises(InputFormatError):
        load_manifold(_write(tmp_path, "m.json", broken))
    compact_with_cusp_data = dict(MANIFOLD, kappa=0)
    with pytest.raises(SelbergError):
        load_manifold(_write(tmp_path, "c.json", compact_with_cusp_data))
    missing_angles = dict(MANIFOLD, spectrum=[{"ell": 1.0, "angles": []}])
    with pytest.raises(SelbergError):
        load_manifold(_write(tmp_path, "a.json", missing_angles))


def test_load_spectral_layouts(tmp_path: Path) -> None:
    single = {"eigenvalues": [{"lam": 2.0, "mult": 3}], "h": 1}
    spectral = load_spectral(_write(tmp_path, "one.json", single), 3)
    assert sorted(spectral) == [1, 2, 3]
    assert spectral[2].eigenvalues == ((2.0, 3),)
    assert spectral[3].h == 1

    per_degree = [{"eigenvalues": [{"lam": float(p)}]} for p in (1, 2, 3)]
    spectral = load_spectral(_write(tmp_path, "list.json", per_degree), 3)
    assert spectral[3].eigenvalues == ((3.0, 1),)

    table = {"degrees": {"1": single, "2": single}}
    with pytest.raises(InputFormatError, match="Missing degrees"):
        load_spectral(_write(tmp_path, "table.json", table), 3)


def test_load_spectral_continuous(tmp_path: Path) -> None:
    data = {
        "eigenvalues": [],
        "continuous": {"grid": [-1.0, 0.0, 1.0], "values": [1.0, 2.0, 1.0], "c_zero": [0.4]},
    }
    spectral = load_spectral(_write(tmp_path, "c.json", data), 3)
    assert spectral[1].constant_term() == pytest.approx(0.1 - 3.0 / (4 * math.pi))


def test_load_expansions(tmp_path: Path) -> None:
    data = {"degrees": {str(p): {"terms": [{"beta": "-3/2", "coeff": p}, {"beta": 0, "coeff": 1.0}]} for p in (1, 2, 3)}}
    expansions = load_expansions(_write(tmp_path, "e.json", data), 3)
    assert float(expansions[2].coefficient(-1.5)) == 2.0
    assert expansions[1].min_beta == -1.5


def test_load_series(tmp_path: Path) -> None:
    data = {"m": 2, "D": 4, "terms": [{"alpha": [2, 0], "c": 1}, {"alpha": [0, 2], "c": "1/2"}]}
    series = load_series(_write(tmp_path, "s.json", data))
    assert series.m == 2 and series.degree == 4
    assert series.coefficient((0, 2)) == 0.5
    with pytest.raises(InputFormatError):
        load_series(_write(tmp_path, "bad.json", {"m": 2}))


def test_load_amplitude(tmp_path: Path) -> None:
    data = {"radial": [{"m": 1, "D": 2, "terms": [{"alpha": [0], "c": 1}, {"alpha": [1], "c": "-1/6"}]}]}
    amplitude = load_amplitude(_write(tmp_path, "a.json", data), KWeight((0,)), D3)
    assert amplitude.i_max == 0
    assert amplitude.normalization == pytest.approx((4 * math.pi) ** -1.5)
    assert not amplitude.exact_kernel


def test_dump_json() -> None:
    text = dump_json(SmallTimeExpansion.single(0, 0.1).to_json())
    assert json.loads(text)["terms"][0]["coeff"] == 0.1
    with pytest.raises(PreconditionError):
        dump_json({"value": float("nan")})


def test_load_expansions_rejects_exponents_below_dimension(tmp_path: Path) -> None:
    data = {"terms": [{"beta": -2, "coeff": 1.0}]}
    with pytest.raises(InputFormatError, match="below -d/2"):
        load_expansions(_write(tmp_path, "e.json", data), 3)
    assert load_expansions(_write(tmp_path, "e5.json", data), 5)[1].min_beta == -2


def test_load_amplitude_limits_exact_kernel(tmp_path: Path) -> None:
    data = {
        "radial": [{"m": 1, "D": 2, "terms": [{"alpha": [0], "c": 1}, {"alpha": [1], "c": "-1/6"}]}],
        "exact_kernel": True,
    }
    path = _write(tmp_path, "a.json", data)
    assert load_amplitude(path, KWeight((0,)), D3).exact_kernel
    with pytest.raises(PreconditionError, match="closed-form kernel"):
        load_amplitude(path, KWeight((1,)), D3)
    with pytest.raises(PreconditionError, match="closed-form kernel"):
        load_amplitude(path, KWeight((1, 0)), Dimension.from_d(5))


def test_load_spectral_rejects_lopsided_grid(tmp_path: Path) -> None:
    data = {"eigenvalues": [], "continuous": {"grid": [-1.0, 0.0, 2.0], "values": [1.0, 2.0, 1.0]}}
    with pytest.raises(InputFormatError, match="symmetric"):
        load_spectral(_write(tmp_path, "c.json", data), 3)
