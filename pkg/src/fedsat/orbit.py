# SPDX-FileCopyrightText: 2025-present fedsat contributors
#
# SPDX-License-Identifier: MIT
"""
Circular-LEO geometry on a spherical, uniformly rotating Earth.

Angles in the public API are degrees unless the name says otherwise,
distances are kilometers and times are seconds of simulation time.
At ``t = 0`` the Greenwich meridian points along the inertial +x axis.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from fedsat.errors import DomainError

__all__ = [
    "EARTH_RADIUS_KM",
    "EARTH_ROTATION_RATE",
    "MU_EARTH",
    "EciPosition",
    "GroundStation",
    "OrbitElements",
    "VisibilityWindow",
    "coverage_half_angle",
    "elevation_angle",
    "elevation_angles",
    "max_pass_duration",
    "orbital_period",
    "propagate",
    "remaining_visibility",
    "visibility_windows",
]

logger = logging.getLogger(__name__)

EARTH_RADIUS_KM = 6371.0
MU_EARTH = 398600.4418  # km^3/s^2
EARTH_ROTATION_RATE = 7.2921159e-5  # rad/s
GREENWICH_ANGLE_AT_ZERO = 0.0  # rad

MIN_ALTITUDE_KM = 200.0
MAX_ALTITUDE_KM = 2000.0
EDGE_RESOLUTION_S = 1e-3
DEFAULT_STEP_S = 1.0
# remaining_visibility gives up after this many orbital periods of continuous view
MAX_SCAN_PERIODS = 16

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class OrbitElements:
    altitude: float
    inclination: float = 0.0
    raan: float = 0.0
    phase: float = 0.0
    epoch: float = 0.0

    def __post_init__(self) -> None:
        if not MIN_ALTITUDE_KM <= self.altitude <= MAX_ALTITUDE_KM:
            raise DomainError(
                "altitude", self.altitude, f"in [{MIN_ALTITUDE_KM}, {MAX_ALTITUDE_KM}] km"
            )
        if not 0.0 <= self.inclination < 180.0:  # noqa: PLR2004
            raise DomainError("inclination", self.inclination, "in [0, 180) degrees")
        for name in ("raan", "phase"):
            value = getattr(self, name)
            if not 0.0 <= value < 360.0:  # noqa: PLR2004
                raise DomainError(name, value, "in [0, 360) degrees")

    @property
    def radius(self) -> float:
        return EARTH_RADIUS_KM + self.altitude

    @property
    def period(self) -> float:
        return orbital_period(self.altitude)


@dataclass(frozen=True)
class GroundStation:
    latitude: float = 0.0
    longitude: float = 0.0
    min_elevation: float = 0.0
    name: str = "gs-0"

    def __post_init__(self) -> None:
        if not -90.0 <= self.latitude <= 90.0:  # noqa: PLR2004
            raise DomainError("latitude", self.latitude, "in [-90, 90] degrees")
        if not -180.0 <= self.longitude <= 180.0:  # noqa: PLR2004
            raise DomainError("longitude", self.longitude, "in [-180, 180] degrees")
        if not 0.0 <= self.min_elevation <= 90.0:  # noqa: PLR2004
            raise DomainError("min_elevation", self.min_elevation, "in [0, 90] degrees")


@dataclass(frozen=True)
class VisibilityWindow:
    start: float
    end: float

    def __post_init__(self) -> None:
        if not self.end > self.start:
            raise DomainError("end", self.end, f"greater than start ({self.start})")

    @property
    def duration(self) -> float:
        return self.end - self.start

    def __contains__(self, t: object) -> bool:
        return isinstance(t, (int, float)) and self.start <= t <= self.end


@dataclass(frozen=True)
class EciPosition:
    x: float
    y: float
    z: float

    @property
    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def as_array(self) -> FloatArray:
        return np.array([self.x, self.y, self.z], dtype=np.float64)


def orbital_period(altitude: float) -> float:
    if not altitude > 0:
        raise DomainError("altitude", altitude, "positive")
    semi_major_axis = EARTH_RADIUS_KM + altitude
    return 2.0 * math.pi * math.sqrt(semi_major_axis**3 / MU_EARTH)


def coverage_half_angle(altitude: float, min_elevation: float) -> float:
    """Earth-central half-angle (radians) of the cone in which a GS sees the satellite."""
    if not altitude > 0:
        raise DomainError("altitude", altitude, "positive")
    if not 0.0 <= min_elevation <= 90.0:  # noqa: PLR2004
        raise DomainError("min_elevation", min_elevation, "in [0, 90] degrees")
    eps = math.radians(min_elevation)
    ratio = EARTH_RADIUS_KM * math.cos(eps) / (EARTH_RADIUS_KM + altitude)
    return max(0.0, math.acos(ratio) - eps)


def max_pass_duration(altitude: float, min_elevation: float = 0.0) -> float:
    """Longest single pass over a GS on a non-rotating Earth (zenith pass)."""
    return orbital_period(altitude) * coverage_half_angle(altitude, min_elevation) / math.pi


def _positions(elements: Sequence[OrbitElements], times: FloatArray) -> FloatArray:
    """ECI positions with shape ``(len(elements), len(times), 3)``."""
    radius = np.array([e.radius for e in elements])[:, None]
    inc = np.radians([e.inclination for e in elements])[:, None]
    raan = np.radians([e.raan for e in elements])[:, None]
    phase = np.radians([e.phase for e in elements])[:, None]
    epoch = np.array([e.epoch for e in elements])[:, None]
    motion = np.array([2.0 * math.pi / e.period for e in elements])[:, None]

    u = phase + motion * (times[None, :] - epoch)
    cos_u, sin_u = np.cos(u), np.sin(u)
    cos_o, sin_o = np.cos(raan), np.sin(raan)
    cos_i, sin_i = np.cos(inc), np.sin(inc)
    x = radius * (cos_o * cos_u - sin_o * sin_u * cos_i)
    y = radius * (sin_o * cos_u + cos_o * sin_u * cos_i)
    z = radius * (sin_u * sin_i)
    return np.stack((x, y, z), axis=-1)


def _station_frame(gs: GroundStation, times: FloatArray) -> tuple[FloatArray, FloatArray]:
    """Inertial GS positions and local-up unit vectors, each with shape ``(len(times), 3)``."""
    lat = math.radians(gs.latitude)
    theta = GREENWICH_ANGLE_AT_ZERO + EARTH_ROTATION_RATE * times + math.radians(gs.longitude)
    up = np.stack(
        (
            math.cos(lat) * np.cos(theta),
            math.cos(lat) * np.sin(theta),
            np.full_like(theta, math.sin(lat)),
        ),
        axis=-1,
    )
    return EARTH_RADIUS_KM * up, up


def _elevations(gs: GroundStation, positions: FloatArray, times: FloatArray) -> FloatArray:
    station, up = _station_frame(gs, times)
    line_of_sight = positions - station
    distance = np.linalg.norm(line_of_sight, axis=-1)
    sine = np.einsum("...k,...k->...", line_of_sight, up) / distance
    return np.degrees(np.arcsin(np.clip(sine, -1.0, 1.0)))


def _elevation_series(gs: GroundStation, elements: OrbitElements, times: FloatArray) -> FloatArray:
    return _elevations(gs, _positions([elements], times)[0], times)


def propagate(elements: OrbitElements, t: float) -> EciPosition:
    x, y, z = _positions([elements], np.array([t], dtype=np.float64))[0, 0]
    return EciPosition(float(x), float(y), float(z))


def elevation_angle(gs: GroundStation, pos: EciPosition, t: float) -> float:
    times = np.array([t], dtype=np.float64)
    return float(_elevations(gs, pos.as_array()[None, :], times)[0])


def elevation_angles(
    gs: GroundStation, elements: Sequence[OrbitElements], t: float
) -> FloatArray:
    """Elevation of every satellite in ``elements`` at a single instant."""
    if not elements:
        return np.empty(0, dtype=np.float64)
    times = np.array([t], dtype=np.float64)
    return _elevations(gs, _positions(elements, times)[:, 0, :], times)


def _refine_edge(
    gs: GroundStation, elements: OrbitElements, outside: float, inside: float
) -> float:
    """Bisect between a not-visible and a visible instant; returns the visible side."""
    while abs(inside - outside) > EDGE_RESOLUTION_S:
        middle = 0.5 * (inside + outside)
        elevation = _elevation_series(gs, elements, np.array([middle]))[0]
        if elevation >= gs.min_elevation:
            inside = middle
        else:
            outside = middle
    return inside


def visibility_windows(
    gs: GroundStation,
    elements: OrbitElements,
    interval: tuple[float, float],
    step: float = DEFAULT_STEP_S,
) -> list[VisibilityWindow]:
    t0, t1 = interval
    if not step > 0:
        raise DomainError("step", step, "positive")
    if not t1 > t0:
        return []

    times = np.arange(t0, t1, step, dtype=np.float64)
    if times[-1] < t1:
        times = np.append(times, t1)
    visible = _elevation_series(gs, elements, times) >= gs.min_elevation

    windows: list[VisibilityWindow] = []
    start: float | None = float(t0) if visible[0] else None
    for k in range(1, len(times)):
        if visible[k] and not visible[k - 1]:
            start = _refine_edge(gs, elements, float(times[k - 1]), float(times[k]))
        elif not visible[k] and visible[k - 1] and start is not None:
            end = _refine_edge(gs, elements, float(times[k]), float(times[k - 1]))
            if end > start:
                windows.append(VisibilityWindow(start, end))
            start = None
    if start is not None and t1 > start:
        windows.append(VisibilityWindow(start, float(t1)))
    return windows


def remaining_visibility(
    gs: GroundStation, elements: OrbitElements, t: float, step: float = DEFAULT_STEP_S
) -> float:
    """Seconds until the pass in progress at ``t`` ends, or 0 when not in view."""
    if not step > 0:
        raise DomainError("step", step, "positive")
    if _elevation_series(gs, elements, np.array([t]))[0] < gs.min_elevation:
        return 0.0

    chunk = max(2, math.ceil(elements.period / step))
    last_visible = t
    for _ in range(MAX_SCAN_PERIODS):
        times = last_visible + step * np.arange(1, chunk + 1, dtype=np.float64)
        below = np.flatnonzero(_elevation_series(gs, elements, times) < gs.min_elevation)
        if below.size:
            first = int(below[0])
            inside = last_visible if first == 0 else float(times[first - 1])
            end = _refine_edge(gs, elements, float(times[first]), inside)
            return end - t
        last_visible = float(times[-1])
    logger.warning(
        "Satellite at %.1f km stays in view of %s for %d periods; capping remaining time",
        elements.altitude,
        gs.name,
        MAX_SCAN_PERIODS,
    )
    return last_visible - t
