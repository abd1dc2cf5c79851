# SPDX-FileCopyrightText: 2025-present fedsat contributors
#
# SPDX-License-Identifier: MIT
"""
Edge-hosted virtual counterparts of CubeSats.

A VO mirrors its CubeSat as an LwM2M-style object/instance/resource tree.
Data exchange with the satellite is only possible after the registration
handshake of the current pass, and every exchange is charged against the
bytes the residual window can carry in that direction. The tree itself
lives at the edge and stays readable while the satellite is out of view.
VOs are immutable: every operation returns a new one.
"""

from __future__ import annotations

import logging
import sys
from collections.abc import Iterator
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
from enum import Enum
from typing import Union

from fedsat.catalog import CubeSat
from fedsat.errors import BudgetExhaustedError
from fedsat.errors import DomainError
from fedsat.errors import NoContactError
from fedsat.errors import NoOpMigrationError
from fedsat.errors import PathError
from fedsat.errors import StateError
from fedsat.errors import WindowTooShortError
from fedsat.link import LinkConfig
from fedsat.link import deliverable_data
from fedsat.link import registration_overhead
from fedsat.orbit import GroundStation
from fedsat.orbit import remaining_visibility

if sys.version_info >= (3, 11):
    from typing import assert_never
else:
    from typing_extensions import assert_never

__all__ = [
    "Direction",
    "LwInstance",
    "LwObject",
    "LwObjectTree",
    "LwResource",
    "MigrationEvent",
    "ResourceReading",
    "ValueSize",
    "VirtualCubeSat",
    "VirtualObject",
    "VoState",
    "WindowSession",
    "default_object_tree",
    "downlink",
    "migrate",
    "read_resource",
    "register",
    "sensor_path",
    "update_resource",
]

logger = logging.getLogger(__name__)

Value = Union[float, int, str]
ResourcePath = tuple[int, int, int]

DEVICE_OBJECT = 3
SENSOR_VALUE = 5700
# sensing type -> (IPSO object id, name, unit, min, max)
SENSOR_OBJECTS: dict[int, tuple[int, str, str, float, float]] = {
    1: (3303, "Temperature", "Cel", -150.0, 150.0),
    2: (3304, "Humidity", "%RH", 0.0, 100.0),
    3: (3315, "Barometer", "hPa", 0.0, 1100.0),
    4: (3300, "Generic Sensor", "", -1e9, 1e9),
}


class VoState(str, Enum):
    UNREGISTERED = "Unregistered"
    REGISTERED = "Registered"


class Direction(str, Enum):
    UPLINK = "uplink"  # CubeSat -> ground
    DOWNLINK = "downlink"  # ground -> CubeSat


@dataclass(frozen=True)
class LwResource:
    resource_id: int
    name: str = ""
    value: Value | None = None
    unit: str | None = None
    min: float | None = None
    max: float | None = None
    timestamp: float | None = None

    def accepts(self, value: Value) -> bool:
        if not isinstance(value, (int, float)):
            return True
        return (self.min is None or value >= self.min) and (self.max is None or value <= self.max)


@dataclass(frozen=True)
class LwInstance:
    instance_id: int
    resources: tuple[LwResource, ...]


@dataclass(frozen=True)
class LwObject:
    object_id: int
    name: str
    instances: tuple[LwInstance, ...]


@dataclass(frozen=True)
class LwObjectTree:
    objects: tuple[LwObject, ...] = ()

    def __post_init__(self) -> None:
        seen: set[ResourcePath] = set()
        for path, resource in self.items():
            if path in seen:
                raise DomainError("path", path, "unique within the object tree")
            seen.add(path)
            if resource.value is not None and not resource.accepts(resource.value):
                raise DomainError(
                    "value", resource.value, f"within [{resource.min}, {resource.max}]"
                )

    def items(self) -> Iterator[tuple[ResourcePath, LwResource]]:
        for obj in self.objects:
            for instance in obj.instances:
                for resource in instance.resources:
                    yield (obj.object_id, instance.instance_id, resource.resource_id), resource

    def get(self, path: ResourcePath) -> LwResource:
        for candidate, resource in self.items():
            if candidate == path:
                return resource
        raise PathError(path)

    def with_resource(self, path: ResourcePath, resource: LwResource) -> LwObjectTree:
        self.get(path)
        object_id, instance_id, resource_id = path
        return LwObjectTree(
            tuple(
                obj
                if obj.object_id != object_id
                else replace(
                    obj,
                    instances=tuple(
                        inst
                        if inst.instance_id != instance_id
                        else replace(
                            inst,
                            resources=tuple(
                                resource if r.resource_id == resource_id else r
                                for r in inst.resources
                            ),
                        )
                        for inst in obj.instances
                    ),
                )
                for obj in self.objects
            )
        )


@dataclass(frozen=True)
class ResourceReading:
    value: Value | None
    timestamp: float | None

    @property
    def present(self) -> bool:
        return self.value is not None


@dataclass(frozen=True)
class ValueSize:
    """Modeled on-air size of one resource write."""

    payload: int = 16
    header: int = 8

    @property
    def total(self) -> int:
        return self.payload + self.header


@dataclass(frozen=True)
class WindowSession:
    """Byte budgets of the pass during which the VO registered."""

    gs: str
    opened_at: float
    data_from: float
    closes_at: float
    ul_budget: int
    dl_budget: int
    ul_used: int = 0
    dl_used: int = 0

    def active(self, t: float) -> bool:
        return self.data_from <= t <= self.closes_at

    def remaining(self, direction: Direction) -> int:
        match direction:
            case Direction.UPLINK:
                return self.ul_budget - self.ul_used
            case Direction.DOWNLINK:
                return self.dl_budget - self.dl_used
            case _:
                assert_never(direction)

    def charge(self, direction: Direction, nbytes: int) -> WindowSession:
        left = self.remaining(direction)
        if nbytes > left:
            raise BudgetExhaustedError(direction.value, nbytes, left)
        match direction:
            case Direction.UPLINK:
                return replace(self, ul_used=self.ul_used + nbytes)
            case Direction.DOWNLINK:
                return replace(self, dl_used=self.dl_used + nbytes)
            case _:
                assert_never(direction)


@dataclass(frozen=True)
class VirtualObject:
    cubesat: CubeSat
    hosting_gs: GroundStation
    tree: LwObjectTree
    state: VoState = VoState.UNREGISTERED
    registered_at: float | None = None
    lifetime: float | None = None
    link: LinkConfig = field(default_factory=LinkConfig)
    session: WindowSession | None = None
    registrations: int = 0
    overhead_spent: float = 0.0

    @property
    def cubesat_id(self) -> int:
        return self.cubesat.id

    def residual_window(self) -> float:
        """Seconds left for data exchange after the registration of the current pass."""
        if self.session is None:
            return 0.0
        return self.session.closes_at - self.session.data_from


@dataclass(frozen=True)
class MigrationEvent:
    vo: int
    from_gs: str
    to_gs: str
    time: float

    def __post_init__(self) -> None:
        if self.from_gs == self.to_gs:
            raise NoOpMigrationError(self.to_gs)


def default_object_tree(cubesat: CubeSat) -> LwObjectTree:
    device = LwObject(
        DEVICE_OBJECT,
        "Device",
        (
            LwInstance(
                0,
                (
                    LwResource(0, "Manufacturer", "fedsat"),
                    LwResource(1, "Model Number", "CubeSat-1U"),
                    LwResource(2, "Serial Number", str(cubesat.id)),
                ),
            ),
        ),
    )
    sensors = []
    for resource_type in sorted(cubesat.payload):
        object_id, name, unit, low, high = SENSOR_OBJECTS[resource_type]
        resource = LwResource(SENSOR_VALUE, "Sensor Value", None, unit or None, low, high)
        sensors.append(LwObject(object_id, name, (LwInstance(0, (resource,)),)))
    return LwObjectTree((device, *sensors))


def sensor_path(resource_type: int) -> ResourcePath:
    return SENSOR_OBJECTS[resource_type][0], 0, SENSOR_VALUE


def register(
    cubesat: CubeSat,
    gs: GroundStation,
    t: float,
    link: LinkConfig | None = None,
    *,
    previous: VirtualObject | None = None,
) -> VirtualObject:
    """
    Run the Registration Request/Response handshake at the start of contact.

    ``previous`` re-registers an existing VO (e.g. after a migration) and keeps
    its tree and counters. It must belong to ``cubesat`` and already be hosted
    at ``gs``; moving it to another GS goes through `migrate`.
    """
    if previous is not None:
        if previous.cubesat != cubesat:
            raise DomainError("previous", previous.cubesat_id, f"the VO of CubeSat {cubesat.id}")
        if previous.hosting_gs != gs:
            raise StateError(
                previous.cubesat_id,
                f"{previous.state.value} at `{previous.hosting_gs.name}`",
                f"register at `{gs.name}`",
            )
    link = link or (previous.link if previous else LinkConfig())
    remaining = remaining_visibility(gs, cubesat.elements, t)
    if remaining <= 0:
        raise NoContactError(cubesat.id, gs.name, t)
    overhead = registration_overhead(link)
    if remaining <= overhead:
        raise WindowTooShortError(overhead, remaining)

    session = WindowSession(
        gs=gs.name,
        opened_at=t,
        data_from=t + overhead,
        closes_at=t + remaining,
        ul_budget=int(deliverable_data(remaining, overhead, link.ul_rate)),
        dl_budget=int(deliverable_data(remaining, overhead, link.dl_rate)),
    )
    base = previous or VirtualObject(cubesat, gs, default_object_tree(cubesat), link=link)
    logger.debug("CubeSat %d registered at %s, window %.1f s", cubesat.id, gs.name, remaining)
    return replace(
        base,
        hosting_gs=gs,
        state=VoState.REGISTERED,
        registered_at=t,
        link=link,
        session=session,
        registrations=base.registrations + 1,
        overhead_spent=base.overhead_spent + overhead,
    )


def _open_session(vo: VirtualObject, t: float, operation: str) -> WindowSession:
    if vo.state is not VoState.REGISTERED or vo.session is None:
        raise StateError(vo.cubesat_id, vo.state.value, operation)
    if not vo.session.active(t):
        raise NoContactError(vo.cubesat_id, vo.hosting_gs.name, t)
    return vo.session


def update_resource(  # noqa: PLR0913
    vo: VirtualObject,
    object_id: int,
    instance_id: int,
    resource_id: int,
    value: Value,
    t: float,
    size: ValueSize | None = None,
) -> VirtualObject:
    """Store a value reported by the CubeSat, charging the uplink budget."""
    if vo.state is not VoState.REGISTERED:
        raise StateError(vo.cubesat_id, vo.state.value, "update")
    path = (object_id, instance_id, resource_id)
    resource = vo.tree.get(path)
    session = _open_session(vo, t, "update")
    if not resource.accepts(value):
        raise DomainError("value", value, f"within [{resource.min}, {resource.max}]")
    session = session.charge(Direction.UPLINK, (size or ValueSize()).total)
    tree = vo.tree.with_resource(path, replace(resource, value=value, timestamp=t))
    return replace(vo, tree=tree, session=session)


def downlink(vo: VirtualObject, nbytes: int, t: float) -> VirtualObject:
    """Send ``nbytes`` from the ground to the CubeSat (commands, configuration)."""
    if nbytes < 0:
        raise DomainError("nbytes", nbytes, "non-negative")
    session = _open_session(vo, t, "downlink")
    return replace(vo, session=session.charge(Direction.DOWNLINK, nbytes))


def read_resource(vo: VirtualObject, path: ResourcePath) -> ResourceReading:
    resource = vo.tree.get(path)
    return ResourceReading(resource.value, resource.timestamp)


def migrate(
    vo: VirtualObject, to_gs: GroundStation, t: float
) -> tuple[VirtualObject, MigrationEvent]:
    """Move the VO to the next GS; it must register again there before exchanging data."""
    if vo.hosting_gs == to_gs:
        raise NoOpMigrationError(to_gs.name)
    event = MigrationEvent(vo.cubesat_id, vo.hosting_gs.name, to_gs.name, t)
    moved = replace(
        vo, hosting_gs=to_gs, state=VoState.UNREGISTERED, registered_at=None, session=None
    )
    logger.debug("VO %d migrated %s -> %s at %.1f s", vo.cubesat_id, event.from_gs, event.to_gs, t)
    return moved, event


@dataclass(frozen=True)
class VirtualCubeSat:
    """
    One logical CubeSat backed by several physical ones, possibly of different
    tenants. Queries go to whichever member can serve them right now.
    """

    members: tuple[VirtualObject, ...]

    @classmethod
    def of(cls, members: Sequence[VirtualObject]) -> VirtualCubeSat:
        return cls(tuple(sorted(members, key=lambda vo: vo.cubesat_id)))

    def resolve(self, resource_type: int, t: float) -> VirtualObject | None:
        for vo in self.members:
            if (
                vo.cubesat.offers(resource_type)
                and vo.state is VoState.REGISTERED
                and vo.session is not None
                and vo.session.active(t)
            ):
                return vo
        return None

    def read(self, resource_type: int, t: float) -> ResourceReading:
        vo = self.resolve(resource_type, t)
        if vo is None:
            return ResourceReading(None, None)
        return read_resource(vo, sensor_path(resource_type))
