# SPDX-FileCopyrightText: 2025-present fedsat contributors
#
# SPDX-License-Identifier: MIT
"""Tenants, constellations, satellites, sensing resources and task workloads."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from fedsat.errors import ConfigError
from fedsat.errors import DomainError
from fedsat.orbit import OrbitElements

__all__ = [
    "DEFAULT_RESOURCE_TYPES",
    "CubeSat",
    "Constellation",
    "Homogeneity",
    "ResourceType",
    "SensingTask",
    "TypeMix",
    "assign_workloads",
    "build_constellation",
    "generate_tasks",
    "satellite_id",
]

SeedLike = Union[int, Sequence[int], np.random.SeedSequence]

MAX_SATELLITES = 200
SATELLITE_ID_STRIDE = 1_000
MIX_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ResourceType:
    id: int
    execution_time: int  # ms

    def __post_init__(self) -> None:
        if not 50 <= self.execution_time <= 200:  # noqa: PLR2004
            raise DomainError("execution_time", self.execution_time, "in [50, 200] ms")


DEFAULT_RESOURCE_TYPES: tuple[ResourceType, ...] = (
    ResourceType(1, 50),
    ResourceType(2, 100),
    ResourceType(3, 150),
    ResourceType(4, 200),
)


class Homogeneity(str, Enum):
    HOMOGENEOUS = "homogeneous"
    HETEROGENEOUS = "heterogeneous"


@dataclass(frozen=True)
class CubeSat:
    id: int
    constellation_id: int
    payload: frozenset[int]
    elements: OrbitElements

    def offers(self, resource_type: int) -> bool:
        return resource_type in self.payload


@dataclass(frozen=True)
class Constellation:
    id: int
    tenant: str
    satellites: tuple[CubeSat, ...]
    homogeneity: Homogeneity
    altitude: float

    @property
    def resource_types(self) -> frozenset[int]:
        return frozenset().union(*(sat.payload for sat in self.satellites))


@dataclass(frozen=True)
class SensingTask:
    id: int
    type: int
    execution_time: int  # ms
    arrival_index: int


@dataclass(frozen=True)
class TypeMix:
    fractions: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.fractions:
            raise ConfigError("at least one sensing type is required", key="type_mix")
        if any(f < 0 for f in self.fractions):
            raise ConfigError(f"negative fraction in {self.fractions}", key="type_mix")
        if abs(math.fsum(self.fractions) - 1.0) > MIX_TOLERANCE:
            raise ConfigError(f"fractions {self.fractions} do not sum to 1", key="type_mix")

    @classmethod
    def uniform(cls, types: int = len(DEFAULT_RESOURCE_TYPES)) -> TypeMix:
        return cls(tuple(1.0 / types for _ in range(types)))

    def label(self) -> str:
        return "/".join(f"{f:g}" for f in self.fractions)

    def counts(self, load: int) -> list[int]:
        """Largest-remainder apportionment of ``load`` tasks over the types."""
        exact = [load * f for f in self.fractions]
        counts = [math.floor(x) for x in exact]
        by_remainder = sorted(
            range(len(exact)), key=lambda k: (-(exact[k] - counts[k]), k)
        )
        for k in by_remainder[: load - sum(counts)]:
            counts[k] += 1
        return counts


def satellite_id(constellation_id: int, index: int) -> int:
    return constellation_id * SATELLITE_ID_STRIDE + index


def build_constellation(  # noqa: PLR0913
    id: int,  # noqa: A002
    tenant: str,
    count: int,
    altitude: float,
    homogeneity: Homogeneity,
    type_assignment: int | None = None,
    inclination: float = 0.0,
    raan: float = 0.0,
    *,
    phase_offset: float = 0.0,
    resources_per_satellite: int = 1,
    resource_types: Sequence[ResourceType] = DEFAULT_RESOURCE_TYPES,
) -> Constellation:
    if not 1 <= count <= MAX_SATELLITES:
        raise ConfigError(f"count must be in [1, {MAX_SATELLITES}], got {count}", key="count")
    type_ids = [rt.id for rt in resource_types]
    per_sat = resources_per_satellite
    if not 1 <= per_sat <= len(type_ids):
        raise ConfigError(
            f"must be in [1, {len(type_ids)}], got {per_sat}", key="resources_per_satellite"
        )

    if homogeneity is Homogeneity.HOMOGENEOUS:
        if type_assignment not in type_ids:
            raise ConfigError(
                f"homogeneous constellation needs a type in {type_ids}, got {type_assignment}",
                key="type_assignment",
            )
        if per_sat != 1:
            raise ConfigError(
                "homogeneous constellations carry a single resource type",
                key="resources_per_satellite",
            )
        payloads = [frozenset({type_assignment}) for _ in range(count)]
    else:
        if type_assignment is not None:
            raise ConfigError(
                "heterogeneous constellations cycle over all types; got a fixed type",
                key="type_assignment",
            )
        m = len(type_ids)
        payloads = [
            frozenset(type_ids[(k * per_sat + j) % m] for j in range(per_sat))
            for k in range(count)
        ]

    satellites = tuple(
        CubeSat(
            id=satellite_id(id, k),
            constellation_id=id,
            payload=payloads[k],
            elements=OrbitElements(
                altitude=altitude,
                inclination=inclination,
                raan=raan % 360.0,
                phase=(phase_offset + 360.0 * k / count) % 360.0,
            ),
        )
        for k in range(count)
    )
    return Constellation(
        id=id, tenant=tenant, satellites=satellites, homogeneity=homogeneity, altitude=altitude
    )


def generate_tasks(
    load: int,
    mix: TypeMix,
    rng_seed: SeedLike,
    resource_types: Sequence[ResourceType] = DEFAULT_RESOURCE_TYPES,
) -> list[SensingTask]:
    """Deterministic workload: exact per-type counts, arrival order shuffled by the seed."""
    if load < 0:
        raise DomainError("load", load, "non-negative")
    if len(mix.fractions) != len(resource_types):
        raise ConfigError(
            f"{len(mix.fractions)} fractions for {len(resource_types)} sensing types",
            key="type_mix",
        )
    kinds = [
        rt for rt, count in zip(resource_types, mix.counts(load), strict=True) for _ in range(count)
    ]
    order = np.random.default_rng(rng_seed).permutation(load)
    return [
        SensingTask(
            id=task_id,
            type=kinds[task_id].id,
            execution_time=kinds[task_id].execution_time,
            arrival_index=arrival,
        )
        for arrival, task_id in enumerate(int(k) for k in order)
    ]


def assign_workloads(
    tasks: Sequence[SensingTask], constellation_ids: Sequence[int], rng_seed: SeedLike
) -> dict[int, list[SensingTask]]:
    """Hand every task to one constellation drawn uniformly at random."""
    if not constellation_ids:
        raise DomainError("constellation_ids", constellation_ids, "non-empty")
    draws = np.random.default_rng(rng_seed).integers(0, len(constellation_ids), size=len(tasks))
    workloads: dict[int, list[SensingTask]] = {cid: [] for cid in constellation_ids}
    for task, draw in zip(tasks, draws, strict=True):
        workloads[constellation_ids[int(draw)]].append(task)
    return workloads
