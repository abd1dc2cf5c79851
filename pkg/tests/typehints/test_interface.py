# SPDX-FileCopyrightText: 2025-present fedsat contributors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

from typing_extensions import assert_type

import pytest_assert_type
from fedsat.allocator import allocate
from fedsat.catalog import SensingTask
from fedsat.catalog import TypeMix
from fedsat.catalog import assign_workloads
from fedsat.catalog import generate_tasks
from fedsat.federation_game import FederationBroker
from fedsat.link import AccessReport
from fedsat.link import access_reports
from fedsat.orbit import GroundStation
from fedsat.orbit import VisibilityWindow
from fedsat.orbit import orbital_period
from fedsat.orbit import visibility_windows
from fedsat.virtual_object import MigrationEvent
from fedsat.virtual_object import VirtualCubeSat
from fedsat.virtual_object import VirtualObject
from fedsat.virtual_object import migrate
from fedsat.virtual_object import register
from tests.instances import constellation
from tests.instances import player
from tests.instances import snapshot_of
from tests.instances import tasks_of


@pytest_assert_type.check
def test_geometry_and_link() -> None:
    fleet = constellation(1, 2)
    windows = visibility_windows(GroundStation(), fleet.satellites[0].elements, (0.0, 6000.0))
    assert_type(orbital_period(500.0), float)
    assert_type(windows, list[VisibilityWindow])
    assert_type(access_reports(), list[AccessReport])


@pytest_assert_type.check
def test_workloads() -> None:
    tasks = generate_tasks(20, TypeMix.uniform(), 1)
    assert_type(tasks, list[SensingTask])
    assert_type(assign_workloads(tasks, [1, 2], 1), dict[int, list[SensingTask]])


@pytest_assert_type.check
def test_allocation_and_game() -> None:
    fleets = [constellation(cid, 2, only_type=cid) for cid in (1, 2)]
    tasks = tasks_of([1, 2, 2])
    players = [player(fleets[0], tasks), player(fleets[1])]
    snapshot = snapshot_of(fleets)
    outcome = allocate(tasks, players, snapshot)
    broker = FederationBroker(players, snapshot)
    assert_type(outcome.assignment, dict[int, int | None])
    assert_type(outcome.success_pct_by_type([1, 2]), dict[int, float])
    assert_type(broker.partition.sizes(), tuple[int, ...])
    assert_type(broker.payoffs(), dict[int, float])


@pytest_assert_type.check
def test_virtual_objects() -> None:
    sat = constellation(1, 4).satellites[0]
    vo = register(sat, GroundStation(), 0.0)
    moved = migrate(vo, GroundStation(longitude=10.0, name="east"), 1.0)
    assert_type(moved, tuple[VirtualObject, MigrationEvent])
    assert_type(VirtualCubeSat.of([vo]).resolve(1, 1.0), VirtualObject | None)
