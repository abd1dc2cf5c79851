# SPDX-FileCopyrightText: 2025-present fedsat contributors
#
# SPDX-License-Identifier: MIT
"""
Greedy edge-assisted task allocation.

Satellites execute tasks serially while they stay in view of the ground
station, so the capacity of a satellite is its remaining visibility time.
Execution times are integer milliseconds; capacities are kept in ms as floats.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections import defaultdict
from collections.abc import Iterable
from collections.abc import Mapping
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field
from typing import Optional

from fedsat.catalog import Constellation
from fedsat.catalog import CubeSat
from fedsat.catalog import SeedLike
from fedsat.catalog import SensingTask
from fedsat.catalog import assign_workloads
from fedsat.errors import DomainError
from fedsat.errors import InstanceTooLargeError
from fedsat.orbit import DEFAULT_STEP_S
from fedsat.orbit import GroundStation
from fedsat.orbit import elevation_angles
from fedsat.orbit import remaining_visibility

__all__ = [
    "MAX_BRUTE_FORCE_SATELLITES",
    "MAX_BRUTE_FORCE_TASKS",
    "AllocationOutcome",
    "Assignment",
    "Player",
    "SatelliteLedger",
    "VisibilitySnapshot",
    "allocate",
    "allocate_no_federation",
    "brute_force_optimal",
    "capture_snapshot",
    "verify_assignment",
]

logger = logging.getLogger(__name__)

MAX_BRUTE_FORCE_TASKS = 10
MAX_BRUTE_FORCE_SATELLITES = 12
CAPACITY_SLACK_MS = 1e-6

Assignment = Mapping[int, Optional[int]]
"""Task id -> satellite id, or ``None`` when the task could not be placed."""


@dataclass(frozen=True, eq=False)
class VisibilitySnapshot:
    epoch: float
    remaining: Mapping[int, float]
    """Remaining visibility in seconds for every satellite in view; absent means not visible."""

    def __post_init__(self) -> None:
        for sat_id, seconds in self.remaining.items():
            if not seconds > 0:
                raise DomainError(f"remaining[{sat_id}]", seconds, "positive when visible")

    def visible(self, sat_id: int) -> bool:
        return sat_id in self.remaining

    def remaining_visibility(self, sat_id: int) -> float:
        return self.remaining.get(sat_id, 0.0)

    def __len__(self) -> int:
        return len(self.remaining)


@dataclass(frozen=True)
class Player:
    """A virtual constellation with the workload the edge node handed to it."""

    constellation: Constellation
    assigned_tasks: tuple[SensingTask, ...] = ()

    @property
    def constellation_id(self) -> int:
        return self.constellation.id

    @property
    def satellites(self) -> tuple[CubeSat, ...]:
        return self.constellation.satellites


@dataclass
class SatelliteLedger:
    sat_id: int
    constellation_id: int
    payload: frozenset[int]
    capacity: float  # ms
    remaining: float  # s, tie-break only
    busy_time: int = 0  # ms

    @property
    def residual(self) -> float:
        return self.capacity - self.busy_time

    def fits(self, task: SensingTask) -> bool:
        return self.residual + CAPACITY_SLACK_MS >= task.execution_time

    def accepts(self, task: SensingTask) -> bool:
        return task.type in self.payload and self.fits(task)

    def priority(self) -> tuple[int, float, int]:
        return self.busy_time, -self.remaining, self.sat_id


@dataclass
class AllocationOutcome:
    assignment: dict[int, int | None] = field(default_factory=dict)
    requested: Counter[int] = field(default_factory=Counter)
    completed: Counter[int] = field(default_factory=Counter)
    busy: defaultdict[int, float] = field(default_factory=lambda: defaultdict(float))
    """Seconds of execution consumed on each player's satellites."""
    available: defaultdict[int, float] = field(default_factory=lambda: defaultdict(float))
    """Remaining visibility in seconds summed over each player's visible satellites."""
    requested_by_type: Counter[int] = field(default_factory=Counter)
    completed_by_type: Counter[int] = field(default_factory=Counter)

    def utility(self, player_id: int) -> float:
        requested = self.requested[player_id]
        return 1.0 if requested == 0 else self.completed[player_id] / requested

    def cost(self, player_id: int) -> float:
        available = self.available[player_id]
        return 0.0 if available <= 0 else min(1.0, self.busy[player_id] / available)

    @property
    def completed_total(self) -> int:
        return sum(self.completed_by_type.values())

    @property
    def requested_total(self) -> int:
        return sum(self.requested_by_type.values())

    def success_pct(self) -> float:
        """Percentage of requested tasks executed; an empty workload counts as 100."""
        requested = self.requested_total
        return 100.0 if requested == 0 else 100.0 * self.completed_total / requested

    def success_pct_by_type(self, types: Iterable[int]) -> dict[int, float]:
        return {
            t: (
                100.0
                if self.requested_by_type[t] == 0
                else 100.0 * self.completed_by_type[t] / self.requested_by_type[t]
            )
            for t in types
        }

    @classmethod
    def combine(cls, outcomes: Iterable[AllocationOutcome]) -> AllocationOutcome:
        """Join outcomes of disjoint coalitions into one."""
        total = cls()
        for outcome in outcomes:
            total.assignment.update(outcome.assignment)
            total.requested.update(outcome.requested)
            total.completed.update(outcome.completed)
            total.requested_by_type.update(outcome.requested_by_type)
            total.completed_by_type.update(outcome.completed_by_type)
            for pid, seconds in outcome.busy.items():
                total.busy[pid] += seconds
            for pid, seconds in outcome.available.items():
                total.available[pid] += seconds
        return total


def capture_snapshot(
    gs: GroundStation,
    constellations: Iterable[Constellation],
    epoch: float,
    step: float = DEFAULT_STEP_S,
) -> VisibilitySnapshot:
    satellites = [sat for constellation in constellations for sat in constellation.satellites]
    elevations = elevation_angles(gs, [sat.elements for sat in satellites], epoch)
    remaining: dict[int, float] = {}
    for sat, elevation in zip(satellites, elevations, strict=True):
        if elevation < gs.min_elevation:
            continue
        seconds = remaining_visibility(gs, sat.elements, epoch, step)
        if seconds > 0:
            remaining[sat.id] = seconds
    logger.debug(
        "Snapshot at t=%.1f s: %d of %d satellites in view of %s",
        epoch,
        len(remaining),
        len(satellites),
        gs.name,
    )
    return VisibilitySnapshot(epoch=epoch, remaining=remaining)


def _ledgers(members: Iterable[Player], snapshot: VisibilitySnapshot) -> list[SatelliteLedger]:
    return [
        SatelliteLedger(
            sat_id=sat.id,
            constellation_id=sat.constellation_id,
            payload=sat.payload,
            capacity=1000.0 * snapshot.remaining_visibility(sat.id),
            remaining=snapshot.remaining_visibility(sat.id),
        )
        for member in members
        for sat in member.satellites
        if snapshot.visible(sat.id)
    ]


def _arrival_order(tasks: Iterable[SensingTask]) -> list[SensingTask]:
    return sorted(tasks, key=lambda task: (task.arrival_index, task.id))


def allocate(
    tasks: Sequence[SensingTask], members: Sequence[Player], snapshot: VisibilitySnapshot
) -> AllocationOutcome:
    """
    Map pooled coalition tasks onto visible member satellites.

    Each task goes to the least-loaded visible satellite that offers its type and
    still has room for it; ties prefer the satellite that stays in view longest,
    then the lowest id. Tasks with no such satellite fail.
    """
    owner = {task.id: m.constellation_id for m in members for task in m.assigned_tasks}
    ledgers = _ledgers(members, snapshot)
    by_type: defaultdict[int, list[SatelliteLedger]] = defaultdict(list)
    for ledger in ledgers:
        for resource_type in ledger.payload:
            by_type[resource_type].append(ledger)

    outcome = AllocationOutcome()
    for ledger in ledgers:
        outcome.available[ledger.constellation_id] += ledger.remaining

    for task in _arrival_order(tasks):
        player_id = owner.get(task.id)
        outcome.requested_by_type[task.type] += 1
        if player_id is not None:
            outcome.requested[player_id] += 1

        chosen: SatelliteLedger | None = None
        for ledger in by_type.get(task.type, ()):
            if ledger.fits(task) and (chosen is None or ledger.priority() < chosen.priority()):
                chosen = ledger
        if chosen is None:
            outcome.assignment[task.id] = None
            continue

        chosen.busy_time += task.execution_time
        outcome.assignment[task.id] = chosen.sat_id
        outcome.busy[chosen.constellation_id] += task.execution_time / 1000.0
        outcome.completed_by_type[task.type] += 1
        if player_id is not None:
            outcome.completed[player_id] += 1
    return outcome


def allocate_no_federation(
    players: Sequence[Player], snapshot: VisibilitySnapshot, rng_seed: SeedLike
) -> AllocationOutcome:
    """
    Baseline without cooperation: every task is handed to a random constellation,
    which serves it with its own satellites only.
    """
    if not players:
        return AllocationOutcome()
    pooled = _arrival_order(task for player in players for task in player.assigned_tasks)
    ids = [player.constellation_id for player in players]
    drawn = assign_workloads(pooled, ids, rng_seed)
    outcomes = []
    for player in players:
        share = Player(player.constellation, tuple(drawn[player.constellation_id]))
        outcomes.append(allocate(share.assigned_tasks, [share], snapshot))
    return AllocationOutcome.combine(outcomes)


def verify_assignment(
    assignment: Assignment,
    tasks: Sequence[SensingTask],
    members: Sequence[Player],
    snapshot: VisibilitySnapshot,
) -> bool:
    by_id = {task.id: task for task in tasks}
    if len(by_id) != len(tasks) or not set(assignment) <= set(by_id):
        return False
    satellites = {sat.id: sat for member in members for sat in member.satellites}

    queued: defaultdict[int, int] = defaultdict(int)
    for task_id, sat_id in assignment.items():
        if sat_id is None:
            continue
        sat = satellites.get(sat_id)
        task = by_id[task_id]
        if sat is None or not snapshot.visible(sat_id) or not sat.offers(task.type):
            return False
        queued[sat_id] += task.execution_time

    return all(
        total <= 1000.0 * snapshot.remaining_visibility(sat_id) + CAPACITY_SLACK_MS
        for sat_id, total in queued.items()
    )


def brute_force_optimal(
    tasks: Sequence[SensingTask], members: Sequence[Player], snapshot: VisibilitySnapshot
) -> int:
    """Largest number of tasks any feasible assignment completes (small instances only)."""
    satellite_count = sum(len(member.satellites) for member in members)
    if len(tasks) > MAX_BRUTE_FORCE_TASKS or satellite_count > MAX_BRUTE_FORCE_SATELLITES:
        raise InstanceTooLargeError(
            len(tasks), satellite_count, MAX_BRUTE_FORCE_TASKS, MAX_BRUTE_FORCE_SATELLITES
        )

    ledgers = _ledgers(members, snapshot)
    ordered = sorted(tasks, key=lambda task: -task.execution_time)
    total = len(ordered)
    best = 0

    def placeable(k: int) -> int:
        return sum(1 for task in ordered[k:] if any(ledger.accepts(task) for ledger in ledgers))

    def search(k: int, done: int) -> None:
        nonlocal best
        if k == total:
            best = max(best, done)
            return
        if done + placeable(k) <= best:
            return
        task = ordered[k]
        tried: set[tuple[frozenset[int], float]] = set()
        for ledger in ledgers:
            signature = (ledger.payload, ledger.residual)
            if signature in tried or not ledger.accepts(task):
                continue
            tried.add(signature)
            ledger.busy_time += task.execution_time
            search(k + 1, done + 1)
            ledger.busy_time -= task.execution_time
            if best == total:
                return
        search(k + 1, done)

    search(0, 0)
    return best
