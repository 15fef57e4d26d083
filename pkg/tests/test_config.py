from __future__ import annotations

from pathlib import Path

import pytest

from selberg.config import Config
from selberg.utils.helpers import ConfigError


@pytest.fixture(autouse=True)
def restore_config():
    saved = {key: value for key, value in vars(Config).items() if key.isupper()}
    yield
    for key, value in saved.items():
        setattr(Config, key, value)


def _settings(tmp_path: Path, text: str) -> Path:
    path = tmp_path / "settings.env"
    path.write_text(text, encoding="utf-8")
    return path


def test_defaults_are_valid() -> None:
    Config.validate()
    assert Config.TPRIME_ORDER == 4
    assert Config.OUTPUT_DIGITS == 17


def test_load_file_overrides(tmp_path: Path) -> None:
    Config.load_file(_settings(tmp_path, "ZETA_T_MAX=80\nWORKERS=2\nLOG_LEVEL=DEBUG\n"))
    assert Config.ZETA_T_MAX == 80.0
    assert isinstance(Config.ZETA_T_MAX, float)
    assert Config.WORKERS == 2
    assert Config.LOG_LEVEL == "DEBUG"
    Config.validate()


def test_unknown_key(tmp_path: Path) -> None:
    with pytest.raises(ConfigError, match="Unknown setting"):
        Config.load_file(_settings(tmp_path, "NOT_A_SETTING=1\n"))


def test_unparsable_value(tmp_path: Path) -> None:
    with pytest.raises(ConfigError, match="Invalid value"):
        Config.load_file(_settings(tmp_path, "WORKERS=many\n"))


def test_missing_file(tmp_path: Path) -> None:
    with pytest.raises(ConfigError, match="not found"):
        Config.load_file(tmp_path / "absent.env")


@pytest.mark.parametrize(
    "key, value",
    [("ZETA_T_MAX", 0.5), ("WORKERS", 0), ("PLANCHEREL_CN", -1.0), ("LOG_LEVEL", "LOUD"), ("ZETA_SMALL_T", 2.0),
     ("ORACLE_PANEL_BUDGET", 50)],
)
def test_validate_rejects(key: str, value) -> None:
    setattr(Config, key, value)
    with pytest.raises(ConfigError):
        Config.validate()
