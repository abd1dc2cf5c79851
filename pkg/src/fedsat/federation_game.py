# SPDX-FileCopyrightText: 2025-present fedsat contributors
#
# SPDX-License-Identifier: MIT
"""
NTU coalitional game over virtual constellations.

Each coalition is valued by running the greedy allocator on the pooled
workload of its members; the induced per-player payoff vector stands for
the coalition's feasible set. Coalitions form by merge-and-split with a
per-player (Pareto) preference, so no member can be made worse off to
benefit another.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from collections.abc import Mapping
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field
from itertools import combinations

from fedsat.allocator import AllocationOutcome
from fedsat.allocator import Player
from fedsat.allocator import VisibilitySnapshot
from fedsat.allocator import allocate
from fedsat.errors import ConfigError
from fedsat.errors import DomainError

__all__ = [
    "Coalition",
    "FederationBroker",
    "GameConfig",
    "Partition",
    "PayoffVector",
    "Player",
    "evaluate_coalition",
    "form_partition",
    "player_value",
]

logger = logging.getLogger(__name__)

Coalition = frozenset[int]
PayoffVector = Mapping[int, float]


@dataclass(frozen=True)
class GameConfig:
    alpha: float = 0.5
    """Compromise factor: weight of utility against resource cost."""
    max_rounds: int = 1000
    tolerance: float = 0.01
    """Value changes within this band count as neither a gain nor a loss."""

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"must be in [0, 1], got {self.alpha}", key="alpha")
        if self.max_rounds < 1:
            raise ConfigError(f"must be at least 1, got {self.max_rounds}", key="max_rounds")
        if self.tolerance < 0:
            raise ConfigError(f"must be non-negative, got {self.tolerance}", key="tolerance")


@dataclass(frozen=True)
class Partition:
    coalitions: tuple[Coalition, ...]
    rounds: int = 0
    converged: bool = True

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for coalition in self.coalitions:
            if not coalition:
                raise DomainError("coalition", coalition, "non-empty")
            if seen & coalition:
                raise DomainError("coalitions", self.coalitions, "pairwise disjoint")
            seen |= coalition
        object.__setattr__(self, "coalitions", tuple(sorted(self.coalitions, key=min)))

    @property
    def players(self) -> frozenset[int]:
        return frozenset().union(*self.coalitions)

    def covers(self, universe: Iterable[int]) -> bool:
        return self.players == frozenset(universe)

    def coalition_of(self, player_id: int) -> Coalition:
        for coalition in self.coalitions:
            if player_id in coalition:
                return coalition
        raise KeyError(player_id)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(coalition) for coalition in self.coalitions)


def player_value(utility: float, cost: float, alpha: float) -> float:
    for name, value in (("utility", utility), ("cost", cost), ("alpha", alpha)):
        if not 0.0 <= value <= 1.0:
            raise DomainError(name, value, "in [0, 1]")
    return alpha * utility - (1.0 - alpha) * cost


def _members(coalition: Coalition, players: Mapping[int, Player]) -> list[Player]:
    return [players[pid] for pid in sorted(coalition)]


def coalition_outcome(
    coalition: Coalition, players: Mapping[int, Player], snapshot: VisibilitySnapshot
) -> AllocationOutcome:
    members = _members(coalition, players)
    pooled = [task for member in members for task in member.assigned_tasks]
    return allocate(pooled, members, snapshot)


def _payoffs(coalition: Coalition, outcome: AllocationOutcome, alpha: float) -> dict[int, float]:
    return {
        pid: player_value(outcome.utility(pid), outcome.cost(pid), alpha)
        for pid in sorted(coalition)
    }


def evaluate_coalition(
    coalition: Coalition,
    players: Mapping[int, Player],
    snapshot: VisibilitySnapshot,
    alpha: float,
) -> PayoffVector:
    return _payoffs(coalition, coalition_outcome(coalition, players, snapshot), alpha)


@dataclass
class _CoalitionValues:
    """Per-run memo of coalition outcomes; the snapshot is immutable for the run."""

    players: Mapping[int, Player]
    snapshot: VisibilitySnapshot
    alpha: float
    outcomes: dict[Coalition, AllocationOutcome] = field(default_factory=dict)
    payoffs: dict[Coalition, dict[int, float]] = field(default_factory=dict)

    def outcome(self, coalition: Coalition) -> AllocationOutcome:
        if coalition not in self.outcomes:
            self.outcomes[coalition] = coalition_outcome(coalition, self.players, self.snapshot)
        return self.outcomes[coalition]

    def value(self, coalition: Coalition, player_id: int) -> float:
        if coalition not in self.payoffs:
            self.payoffs[coalition] = _payoffs(coalition, self.outcome(coalition), self.alpha)
        return self.payoffs[coalition][player_id]


def _prefers_merge(
    values: _CoalitionValues, left: Coalition, right: Coalition, tolerance: float
) -> bool:
    merged = left | right
    deltas = [values.value(merged, pid) - values.value(left, pid) for pid in left]
    deltas += [values.value(merged, pid) - values.value(right, pid) for pid in right]
    return all(d >= -tolerance for d in deltas) and any(d > tolerance for d in deltas)


def _merge_pass(values: _CoalitionValues, structure: set[Coalition], tolerance: float) -> bool:
    changed = False
    while True:
        ordered = sorted(structure, key=min)
        for left, right in combinations(ordered, 2):
            if _prefers_merge(values, left, right, tolerance):
                structure -= {left, right}
                structure.add(left | right)
                logger.debug("Merged %s and %s", sorted(left), sorted(right))
                changed = True
                break
        else:
            return changed


def _split_pass(values: _CoalitionValues, structure: set[Coalition], tolerance: float) -> bool:
    changed = False
    for coalition in sorted(structure, key=min):
        current = coalition
        for pid in sorted(coalition):
            if len(current) == 1:
                break
            alone = frozenset({pid})
            if values.value(alone, pid) > values.value(current, pid) + tolerance:
                structure.remove(current)
                current = current - alone
                structure |= {current, alone}
                logger.debug("Player %d split from %s", pid, sorted(current))
                changed = True
    return changed


def _form(values: _CoalitionValues, cfg: GameConfig) -> Partition:
    structure: set[Coalition] = {frozenset({pid}) for pid in values.players}
    for rounds in range(1, cfg.max_rounds + 1):
        merged = _merge_pass(values, structure, cfg.tolerance)
        split = _split_pass(values, structure, cfg.tolerance)
        if not (merged or split):
            return Partition(tuple(structure), rounds=rounds, converged=True)
    logger.warning("Coalition formation stopped after %d rounds without settling", cfg.max_rounds)
    return Partition(tuple(structure), rounds=cfg.max_rounds, converged=False)


def form_partition(
    players: Sequence[Player], snapshot: VisibilitySnapshot, cfg: GameConfig | None = None
) -> Partition:
    if not players:
        raise DomainError("players", players, "non-empty")
    cfg = cfg or GameConfig()
    by_id = {player.constellation_id: player for player in players}
    return _form(_CoalitionValues(by_id, snapshot, cfg.alpha), cfg)


@dataclass
class FederationBroker:
    """
    Edge-node broker: forms the coalition structure for one allocation epoch
    and schedules every coalition's pooled workload on its members' satellites.
    """

    players: Sequence[Player]
    snapshot: VisibilitySnapshot
    config: GameConfig = field(default_factory=GameConfig)
    _values: _CoalitionValues = field(init=False, repr=False)
    _partition: Partition | None = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        if not self.players:
            raise DomainError("players", self.players, "non-empty")
        by_id = {player.constellation_id: player for player in self.players}
        self._values = _CoalitionValues(by_id, self.snapshot, self.config.alpha)

    @property
    def partition(self) -> Partition:
        if self._partition is None:
            self._partition = _form(self._values, self.config)
        return self._partition

    def federations(self) -> list[Coalition]:
        """Coalitions that actually share resources (two or more constellations)."""
        return [c for c in self.partition.coalitions if len(c) > 1]

    def payoffs(self) -> dict[int, float]:
        return {
            pid: self._values.value(coalition, pid)
            for coalition in self.partition.coalitions
            for pid in coalition
        }

    def allocate(self) -> AllocationOutcome:
        return AllocationOutcome.combine(
            self._values.outcome(coalition) for coalition in self.partition.coalitions
        )
