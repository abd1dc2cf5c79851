# SPDX-FileCopyrightText: 2025-present fedsat contributors
#
# SPDX-License-Identifier: MIT
"""
TOML scenario files and command-line sweep values.

Values are checked against the annotations of the target dataclass with a
small runtime type matcher, so a mistyped entry reports the field type it
should have had next to the shape that was actually given.
"""

from __future__ import annotations

import builtins
import dataclasses
import sys
import types
import typing
from enum import Enum
from pathlib import Path
from typing import Any
from typing import get_args
from typing import get_origin

from fedsat.errors import ConfigError
from fedsat.scenario import SWEEPABLE
from fedsat.scenario import ScenarioConfig
from fedsat.scenario import SweepValue

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = ["load_scenario_config", "parse_sweep_values", "validate"]


# ----------------------------- Pretty printing ----------------------------- #


def _origin_and_args(type_spec: Any) -> tuple[Any | None, tuple[Any, ...]]:
    origin = getattr(type_spec, "__origin__", None)
    args = getattr(type_spec, "__args__", None)
    if origin is not None or args is not None:
        return origin, tuple(args or ())
    return get_origin(type_spec), tuple(get_args(type_spec) or ())


def _is_union(type_spec: Any) -> bool:
    origin = get_origin(type_spec)
    return origin is types.UnionType or origin is typing.Union


def _pretty_type(type_spec: Any) -> str:  # noqa: PLR0911
    if isinstance(type_spec, type) and not isinstance(type_spec, types.GenericAlias):
        return type_spec.__name__

    origin, args = _origin_and_args(type_spec)
    if _is_union(type_spec):
        return " | ".join(_pretty_type(argument) for argument in args)
    if origin is typing.Literal:
        return f"Literal[{','.join(repr(argument) for argument in args)}]"
    if origin is tuple and len(args) == 2 and args[1] is Ellipsis:  # noqa: PLR2004
        return f"tuple[{_pretty_type(args[0])},...]"
    if origin is dict and len(args) == 2:  # noqa: PLR2004
        return f"dict[{_pretty_type(args[0])},{_pretty_type(args[1])}]"
    if origin is not None and hasattr(origin, "__name__"):
        return f"{origin.__name__}[{','.join(_pretty_type(a) for a in args)}]"
    return repr(type_spec)


def _unionize(types_list: list[Any]) -> Any:
    if not types_list:
        return Any
    unique_by_text: dict[str, Any] = {}
    for t in types_list:
        unique_by_text.setdefault(_pretty_type(t), t)
    unique = list(unique_by_text.values())
    result = unique[0]
    for t in unique[1:]:
        result = result | t
    return result


def _infer_type_spec_from_value(value: Any) -> Any:
    """Typing-style spec describing the runtime shape of a parsed TOML value."""
    if isinstance(value, list):
        return list[_unionize([_infer_type_spec_from_value(item) for item in value])]  # type: ignore[misc]
    if isinstance(value, tuple):
        return tuple[_unionize([_infer_type_spec_from_value(item) for item in value]), ...]  # type: ignore[misc]
    if isinstance(value, dict):
        if not value:
            return dict[str, Any]
        values = [_infer_type_spec_from_value(v) for v in value.values()]
        return dict[str, _unionize(values)]  # type: ignore[misc]
    return type(value)


# ----------------------------- Matching ----------------------------- #

def _is_class(type_spec: Any) -> bool:
    return isinstance(type_spec, type) and get_origin(type_spec) is None



def _matches(value: Any, expected_type: Any) -> bool:  # noqa: PLR0911
    if expected_type is Any:
        return True
    if _is_class(expected_type):
        if expected_type is float:
            return isinstance(value, (int, float)) and not isinstance(value, bool)
        if expected_type is int:
            return isinstance(value, int) and not isinstance(value, bool)
        return isinstance(value, expected_type)

    origin, args = _origin_and_args(expected_type)
    if _is_union(expected_type):
        return any(_matches(value, option) for option in args)
    if origin is typing.Literal:
        return any(value == literal_value for literal_value in args)

    match origin, args:
        case builtins.tuple, [only_type, builtins.Ellipsis]:
            return isinstance(value, (tuple, list)) and all(_matches(v, only_type) for v in value)
        case builtins.tuple, element_types if len(element_types) > 0:
            return (
                isinstance(value, (tuple, list))
                and len(value) == len(element_types)
                and all(_matches(v, t) for v, t in zip(value, element_types, strict=True))
            )
        case builtins.list, [element_type]:
            return isinstance(value, list) and all(_matches(v, element_type) for v in value)
        case builtins.dict, [key_type, value_type]:
            return isinstance(value, dict) and all(
                _matches(k, key_type) and _matches(v, value_type) for k, v in value.items()
            )
    return False


def validate(value: Any, expected_type: Any, *, key: str | None = None) -> None:
    """Raise ConfigError naming the expected type and the inferred type of ``value``."""
    if not _matches(value, expected_type):
        actual = _pretty_type(_infer_type_spec_from_value(value))
        raise ConfigError(
            f"Expected value of type `{_pretty_type(expected_type)}`, got `{actual}`", key=key
        )


def _coerce(value: Any, expected_type: Any, key: str) -> Any:  # noqa: PLR0911
    if _is_class(expected_type) and issubclass(expected_type, Enum):
        if isinstance(value, expected_type):
            return value
        validate(value, str, key=key)
        try:
            return expected_type(value)
        except ValueError:
            choices = ", ".join(str(member.value) for member in expected_type)
            raise ConfigError(f"Expected one of {choices}, got `{value}`", key=key) from None
    if _is_class(expected_type) and dataclasses.is_dataclass(expected_type):
        if isinstance(value, expected_type):
            return value
        validate(value, dict[str, Any], key=key)
        return _build(expected_type, value, prefix=f"{key}.")

    validate(value, expected_type, key=key)
    origin, args = _origin_and_args(expected_type)
    if expected_type is float:
        return float(value)
    if origin is tuple:
        element_types = [args[0]] * len(value) if args[-1] is Ellipsis else list(args)
        return tuple(
            _coerce(v, t, f"{key}[{k}]")
            for k, (v, t) in enumerate(zip(value, element_types, strict=True))
        )
    return value


def _build(cls: type[Any], table: dict[str, Any], prefix: str = "") -> Any:
    hints = typing.get_type_hints(cls)
    names = {f.name for f in dataclasses.fields(cls) if f.init}
    kwargs: dict[str, Any] = {}
    for name, raw in table.items():
        if name not in names:
            raise ConfigError(
                f"unknown key; expected one of {', '.join(sorted(names))}", key=f"{prefix}{name}"
            )
        kwargs[name] = _coerce(raw, hints[name], f"{prefix}{name}")
    try:
        return cls(**kwargs)
    except ConfigError:
        raise
    except ValueError as error:
        raise ConfigError(str(error), key=prefix.rstrip(".") or None) from error


def load_scenario_config(path: str | Path) -> ScenarioConfig:
    """
    Read a scenario from a TOML file.

    Top-level keys are ``ScenarioConfig`` fields; the ground station goes in a
    ``[gs]`` table. Keys left out keep their defaults.
    """
    try:
        with Path(path).open("rb") as file:
            table = tomllib.load(file)
    except OSError as error:
        raise ConfigError(f"cannot read scenario file: {error.strerror}", key=str(path)) from error
    except tomllib.TOMLDecodeError as error:
        raise ConfigError(f"invalid TOML: {error}", key=str(path)) from error
    config: ScenarioConfig = _build(ScenarioConfig, table)
    return config


def _scalar(token: str) -> int | float | str:
    for kind in (int, float):
        try:
            return kind(token)
        except ValueError:
            continue
    return token


def parse_sweep_values(param: str, text: str) -> tuple[SweepValue, ...]:
    """
    Parse ``v1,v2,...`` for a sweepable field.

    Type mixes are written as slash-separated fractions, e.g. ``0.05/0.25/0.25/0.45``.
    """
    if param not in SWEEPABLE:
        raise ConfigError(
            f"cannot sweep `{param}`; choose one of {', '.join(SWEEPABLE)}", key="param"
        )
    tokens = [token.strip() for token in text.split(",") if token.strip()]
    if not tokens:
        raise ConfigError("at least one sweep value is required", key="values")
    expected = typing.get_type_hints(ScenarioConfig)[param]
    parsed = (
        (tuple(_scalar(part) for part in token.split("/")) if "/" in token else _scalar(token))
        for token in tokens
    )
    return tuple(_coerce(value, expected, param) for value in parsed)
