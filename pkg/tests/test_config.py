# SPDX-FileCopyrightText: 2025-present fedsat contributors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import re
from pathlib import Path
from typing import Any

import pytest
from pytest_subtests import SubTests

from fedsat.catalog import Homogeneity
from fedsat.config import load_scenario_config
from fedsat.config import parse_sweep_values
from fedsat.config import validate
from fedsat.errors import ConfigError
from fedsat.orbit import GroundStation
from fedsat.scenario import Policy
from fedsat.scenario import ScenarioConfig


@pytest.fixture
def write_toml(tmp_path: Path) -> Any:
    def write(text: str) -> Path:
        path = tmp_path / "scenario.toml"
        path.write_text(text, encoding="utf-8")
        return path

    return write


def test_load_scenario_config(write_toml: Any) -> None:
    path = write_toml(
        """
        name = "turin"
        constellation_count = 10
        altitude_km = 600
        type_mix = [0.05, 0.25, 0.25, 0.45]
        homogeneity = "heterogeneous"
        policy = "Federation"

        [gs]
        latitude = 45
        name = "gs-turin"
        """
    )
    cfg = load_scenario_config(path)
    assert cfg.name == "turin"
    assert cfg.constellation_count == 10
    assert cfg.altitude_km == 600.0
    assert isinstance(cfg.altitude_km, float)
    assert cfg.type_mix == (0.05, 0.25, 0.25, 0.45)
    assert cfg.homogeneity is Homogeneity.HETEROGENEOUS
    assert cfg.policy is Policy.FEDERATION
    assert cfg.gs == GroundStation(latitude=45.0, name="gs-turin")
    assert cfg.task_load == ScenarioConfig().task_load


def test_empty_file_keeps_defaults(write_toml: Any) -> None:
    assert load_scenario_config(write_toml("")) == ScenarioConfig()


def test_config_errors(write_toml: Any, subtests: SubTests) -> None:
    cases = {
        "satellites = 3": "satellites: unknown key",
        "[gs]\nheight = 3": "gs.height: unknown key",
        'constellation_count = "ten"': (
            "constellation_count: Expected value of type `int`, got `str`"
        ),
        'type_mix = ["a"]': (
            "type_mix: Expected value of type `tuple[float,...]`, got `list[str]`"
        ),
        'homogeneity = "mixed"': (
            "homogeneity: Expected one of homogeneous, heterogeneous, got `mixed`"
        ),
        "[gs]\nlatitude = 100": "gs: `latitude` must be in [-90, 90] degrees",
        "constellation_count = 3": "constellation_count: must be in [5, 20]",
        "runs = true": "runs: Expected value of type `int`, got `bool`",
        "name = ": "invalid TOML",
    }
    for text, message in cases.items():
        with subtests.test(text), pytest.raises(ConfigError, match=re.escape(message)):
            load_scenario_config(write_toml(text))


def test_missing_file(tmp_path: Path) -> None:
    with pytest.raises(ConfigError, match="cannot read scenario file") as error:
        load_scenario_config(tmp_path / "nope.toml")
    assert error.value.key == str(tmp_path / "nope.toml")


def test_parse_sweep_values() -> None:
    assert parse_sweep_values("task_load", "50, 100,150") == (50, 100, 150)
    altitudes = parse_sweep_values("altitude_km", "500,750")
    assert altitudes == (500.0, 750.0)
    assert all(isinstance(value, float) for value in altitudes)
    assert parse_sweep_values("type_mix", "0.05/0.25/0.25/0.45,1/0/0/0") == (
        (0.05, 0.25, 0.25, 0.45),
        (1.0, 0.0, 0.0, 0.0),
    )


def test_parse_sweep_values_errors() -> None:
    with pytest.raises(ConfigError, match=re.escape("Expected value of type `int`, got `float`")):
        parse_sweep_values("task_load", "5.5")
    with pytest.raises(ConfigError, match="cannot sweep `runs`"):
        parse_sweep_values("runs", "1,2")
    with pytest.raises(ConfigError, match="at least one"):
        parse_sweep_values("task_load", " , ")


def test_validate_reports_inferred_shape() -> None:
    validate([1, 2.5], tuple[float, ...])
    validate({"a": 1}, dict[str, int])
    with pytest.raises(ConfigError, match=re.escape("got `dict[str,list[int | str]]`")):
        validate({"a": [1, "x"]}, dict[str, int])
    message = "k: Expected value of type `int | str`, got `list[int]`"
    with pytest.raises(ConfigError, match=re.escape(message)):
        validate([1], int | str, key="k")
