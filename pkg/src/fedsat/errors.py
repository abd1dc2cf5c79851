# SPDX-FileCopyrightText: 2025-present fedsat contributors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

from typing import Any


class FedsatError(Exception):
    """Base class for every error raised by fedsat."""


class DomainError(FedsatError, ValueError):
    """Raised when an argument lies outside the domain of a model function."""

    def __init__(self, name: str, value: Any, expected: str) -> None:
        self.name = name
        self.value = value
        self.expected = expected
        super().__init__(f"`{name}` must be {expected}, got {value!r}")


class ConfigError(FedsatError):
    """Raised for invalid scenario, link or game configuration."""

    def __init__(self, message: str, *, key: str | None = None) -> None:
        self.key = key
        super().__init__(f"{key}: {message}" if key else message)


class WindowTooShortError(FedsatError):
    def __init__(self, needed: float, available: float) -> None:
        self.needed = needed
        self.available = available
        super().__init__(
            f"Window too short: need {needed:.4f} s, only {available:.4f} s available"
        )


class NoContactError(FedsatError):
    def __init__(self, cubesat_id: int, gs: str, t: float) -> None:
        self.cubesat_id = cubesat_id
        self.gs = gs
        self.t = t
        super().__init__(f"CubeSat {cubesat_id} is not in view of `{gs}` at t={t:.3f} s")


class StateError(FedsatError):
    def __init__(self, cubesat_id: int, state: str, operation: str) -> None:
        self.cubesat_id = cubesat_id
        self.state = state
        self.operation = operation
        super().__init__(f"Cannot {operation} VO of CubeSat {cubesat_id} in state {state}")


class PathError(FedsatError, KeyError):
    def __init__(self, path: tuple[int, ...]) -> None:
        self.path = path
        super().__init__(f"Unknown object path /{'/'.join(map(str, path))}")

    def __str__(self) -> str:
        return str(self.args[0])


class BudgetExhaustedError(FedsatError):
    def __init__(self, direction: str, requested: int, remaining: int) -> None:
        self.direction = direction
        self.requested = requested
        self.remaining = remaining
        super().__init__(
            f"{direction} budget exhausted: {requested} bytes requested, {remaining} left"
        )


class NoOpMigrationError(FedsatError):
    def __init__(self, gs: str) -> None:
        self.gs = gs
        super().__init__(f"VO is already hosted by `{gs}`")


class InstanceTooLargeError(FedsatError):
    def __init__(self, tasks: int, satellites: int, max_tasks: int, max_satellites: int) -> None:
        self.tasks = tasks
        self.satellites = satellites
        super().__init__(
            f"Exhaustive search limited to {max_tasks} tasks and {max_satellites} satellites,"
            f" got {tasks} tasks and {satellites} satellites"
        )


class EmptyOutputError(FedsatError):
    def __init__(self) -> None:
        super().__init__("Nothing to emit: result list is empty")
