# SPDX-FileCopyrightText: 2025-present fedsat contributors
#
# SPDX-License-Identifier: MIT
"""Registration and data-delivery timing over the ground-satellite link."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from fedsat.errors import DomainError
from fedsat.errors import WindowTooShortError
from fedsat.orbit import max_pass_duration

__all__ = [
    "TABLE2_ALTITUDES_KM",
    "AccessReport",
    "LinkConfig",
    "access_report",
    "access_reports",
    "deliverable_data",
    "registration_load",
    "registration_overhead",
]

TABLE2_ALTITUDES_KM = (500.0, 600.0, 700.0, 800.0, 900.0, 1000.0)


@dataclass(frozen=True)
class LinkConfig:
    dl_rate: float = 1_000_000.0  # bits/s, ground -> CubeSat
    ul_rate: float = 2_400.0  # bits/s, CubeSat -> ground
    dl_freq: float = 437.0  # MHz
    ul_freq: float = 146.0  # MHz
    reg_request_bytes: int = 150
    reg_response_bytes: int = 100

    def __post_init__(self) -> None:
        for name in ("dl_rate", "ul_rate", "dl_freq", "ul_freq"):
            if not getattr(self, name) > 0:
                raise DomainError(name, getattr(self, name), "positive")
        for name in ("reg_request_bytes", "reg_response_bytes"):
            if getattr(self, name) < 0:
                raise DomainError(name, getattr(self, name), "non-negative")


@dataclass(frozen=True)
class AccessReport:
    altitude: float
    access_time: float
    registration_overhead: float
    registration_load: float
    deliverable_dl: float
    deliverable_ul: float


def registration_overhead(cfg: LinkConfig) -> float:
    """Serialization time of the Registration Request (UL) and Response (DL)."""
    if cfg.ul_rate <= 0 or cfg.dl_rate <= 0:
        raise DomainError("rate", min(cfg.ul_rate, cfg.dl_rate), "positive")
    return 8 * cfg.reg_request_bytes / cfg.ul_rate + 8 * cfg.reg_response_bytes / cfg.dl_rate


def registration_load(overhead: float, access_time: float) -> float:
    """Percentage of the access time spent registering."""
    if not access_time > 0:
        raise DomainError("access_time", access_time, "positive")
    if overhead > access_time:
        raise WindowTooShortError(overhead, access_time)
    return 100.0 * overhead / access_time


def deliverable_data(access_time: float, overhead: float, rate: float) -> float:
    """Bytes that fit in the residual window after registration."""
    residual = access_time - overhead
    if residual < 0:
        raise WindowTooShortError(overhead, access_time)
    return residual * rate / 8


def access_report(
    altitude: float, cfg: LinkConfig | None = None, min_elevation: float = 0.0
) -> AccessReport:
    cfg = cfg or LinkConfig()
    access_time = max_pass_duration(altitude, min_elevation)
    overhead = registration_overhead(cfg)
    if not access_time > 0:
        raise WindowTooShortError(overhead, access_time)
    return AccessReport(
        altitude=altitude,
        access_time=access_time,
        registration_overhead=overhead,
        registration_load=registration_load(overhead, access_time),
        deliverable_dl=deliverable_data(access_time, overhead, cfg.dl_rate),
        deliverable_ul=deliverable_data(access_time, overhead, cfg.ul_rate),
    )


def access_reports(
    cfg: LinkConfig | None = None,
    altitudes: Iterable[float] = TABLE2_ALTITUDES_KM,
    min_elevation: float = 0.0,
) -> list[AccessReport]:
    return [access_report(altitude, cfg, min_elevation) for altitude in altitudes]
