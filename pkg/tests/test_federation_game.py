# SPDX-FileCopyrightText: 2025-present fedsat contributors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

import logging
from collections.abc import Callable
from collections.abc import Mapping
from itertools import combinations
from typing import cast

import numpy as np
import pytest

from fedsat.allocator import Player
from fedsat.allocator import VisibilitySnapshot
from fedsat.errors import ConfigError
from fedsat.errors import DomainError
from fedsat.federation_game import Coalition
from fedsat.federation_game import FederationBroker
from fedsat.federation_game import GameConfig
from fedsat.federation_game import Partition
from fedsat.federation_game import evaluate_coalition
from fedsat.federation_game import form_partition
from fedsat.federation_game import player_value
from tests.instances import constellation
from tests.instances import player
from tests.instances import random_game
from tests.instances import snapshot_of
from tests.instances import tasks_of

MERGE_MESSAGE = "Merged %s and %s"


def one_type_each() -> tuple[list[Player], VisibilitySnapshot]:
    """Four single-type constellations, each asked for every type."""
    fleets = [constellation(cid, 3, only_type=cid) for cid in (1, 2, 3, 4)]
    players = [
        player(fleet, tasks_of([1, 2, 3, 4], start_id=10 * fleet.id)) for fleet in fleets
    ]
    return players, snapshot_of(fleets)


def test_player_value() -> None:
    assert player_value(1.0, 0.0, 0.5) == 0.5
    assert player_value(0.0, 1.0, 0.5) == -0.5
    assert player_value(0.5, 0.5, 1.0) == 0.5
    with pytest.raises(DomainError, match="utility"):
        player_value(1.5, 0.0, 0.5)
    with pytest.raises(DomainError, match="alpha"):
        player_value(1.0, 0.0, -0.1)


def test_game_config_validation() -> None:
    with pytest.raises(ConfigError, match="alpha"):
        GameConfig(alpha=2.0)
    with pytest.raises(ConfigError, match="max_rounds"):
        GameConfig(max_rounds=0)
    with pytest.raises(ConfigError, match="tolerance"):
        GameConfig(tolerance=-0.1)


def test_partition_validation() -> None:
    partition = Partition((frozenset({3, 4}), frozenset({1}), frozenset({2})))
    assert partition.coalitions == (frozenset({1}), frozenset({2}), frozenset({3, 4}))
    assert partition.covers([1, 2, 3, 4])
    assert not partition.covers([1, 2, 3])
    assert partition.coalition_of(4) == frozenset({3, 4})
    assert partition.sizes() == (1, 1, 2)
    with pytest.raises(KeyError):
        partition.coalition_of(9)
    with pytest.raises(DomainError, match="disjoint"):
        Partition((frozenset({1, 2}), frozenset({2})))
    with pytest.raises(DomainError, match="non-empty"):
        Partition((frozenset(),))


def test_evaluate_coalition() -> None:
    players, snapshot = one_type_each()
    by_id = {p.constellation_id: p for p in players}
    alone = evaluate_coalition(frozenset({1}), by_id, snapshot, 0.5)
    assert alone[1] == pytest.approx(0.5 * 0.25, abs=1e-3)
    grand = evaluate_coalition(frozenset(by_id), by_id, snapshot, 0.5)
    assert set(grand) == {1, 2, 3, 4}
    assert all(value == pytest.approx(0.5, abs=1e-3) for value in grand.values())


def test_complementary_constellations_form_grand_coalition() -> None:
    players, snapshot = one_type_each()
    partition = form_partition(players, snapshot)
    assert partition.coalitions == (frozenset({1, 2, 3, 4}),)
    assert partition.converged
    assert partition.rounds >= 1
    assert form_partition(players, snapshot) == partition
    exact = form_partition(players, snapshot, GameConfig(tolerance=0.0))
    assert exact.coalitions == partition.coalitions


def test_self_sufficient_constellations_stay_alone() -> None:
    fleets = [constellation(cid, 3, only_type=1) for cid in (1, 2, 3)]
    players = [player(f, tasks_of([1, 1], start_id=10 * f.id)) for f in fleets]
    partition = form_partition(players, snapshot_of(fleets))
    assert partition.sizes() == (1, 1, 1)
    assert partition.rounds == 1


def test_alpha_zero_prices_only_cost() -> None:
    players, snapshot = one_type_each()
    assert form_partition(players, snapshot, GameConfig(alpha=0.0)).sizes() == (1, 1, 1, 1)
    assert form_partition(players, snapshot, GameConfig(alpha=1.0)).sizes() == (4,)


def test_form_partition_requires_players() -> None:
    with pytest.raises(DomainError):
        form_partition([], VisibilitySnapshot(0.0, {}))
    with pytest.raises(DomainError):
        FederationBroker([], VisibilitySnapshot(0.0, {}))


def test_round_limit_is_reported(caplog: pytest.LogCaptureFixture) -> None:
    players, snapshot = one_type_each()
    with caplog.at_level(logging.WARNING, logger="fedsat.federation_game"):
        partition = form_partition(players, snapshot, GameConfig(max_rounds=1))
    assert not partition.converged
    assert partition.rounds == 1
    assert "without settling" in caplog.text


def test_broker() -> None:
    players, snapshot = one_type_each()
    broker = FederationBroker(players, snapshot)
    assert broker.partition is broker.partition
    assert broker.federations() == [frozenset({1, 2, 3, 4})]
    outcome = broker.allocate()
    assert outcome.success_pct() == 100.0
    assert set(outcome.assignment) == {t.id for p in players for t in p.assigned_tasks}
    assert broker.payoffs() == pytest.approx({1: 0.5, 2: 0.5, 3: 0.5, 4: 0.5}, abs=1e-3)


def _payoff_lookup(
    by_id: Mapping[int, Player], snapshot: VisibilitySnapshot, alpha: float
) -> Callable[[Coalition], Mapping[int, float]]:
    def values(coalition: Coalition) -> Mapping[int, float]:
        return evaluate_coalition(coalition, by_id, snapshot, alpha)

    return values


def _merge_preferred(
    values: Callable[[Coalition], Mapping[int, float]], a: Coalition, b: Coalition, tol: float
) -> bool:
    merged, va, vb = values(a | b), values(a), values(b)
    deltas = [merged[p] - va[p] for p in a] + [merged[p] - vb[p] for p in b]
    return all(d >= -tol for d in deltas) and any(d > tol for d in deltas)


def test_random_games_settle_in_stable_partitions(
    rng: np.random.Generator, property_cases: Callable[[int], int]
) -> None:
    cfg = GameConfig()
    cases = property_cases(1_000)
    unsettled = 0
    for _ in range(cases):
        players, snapshot = random_game(rng)
        by_id = {p.constellation_id: p for p in players}
        values = _payoff_lookup(by_id, snapshot, cfg.alpha)
        partition = form_partition(players, snapshot, cfg)
        assert partition.covers(by_id)
        assert partition.rounds <= cfg.max_rounds
        if not partition.converged:
            unsettled += 1
            continue
        for a, b in combinations(partition.coalitions, 2):
            assert not _merge_preferred(values, a, b, cfg.tolerance)
        for coalition in partition.coalitions:
            current = values(coalition)
            for pid in coalition:
                assert values(frozenset({pid}))[pid] <= current[pid] + cfg.tolerance
                assert -0.5 <= current[pid] <= 0.5  # noqa: PLR2004
    assert unsettled <= cases // 100


def test_tolerance_admits_small_losses() -> None:
    requester = constellation(1, 1, only_type=1)
    server = constellation(2, 1, only_type=2)
    players = [player(requester, tasks_of([2, 2])), player(server)]
    snapshot = snapshot_of([requester, server], seconds=20.0)
    by_id = {p.constellation_id: p for p in players}

    assert evaluate_coalition(frozenset({1}), by_id, snapshot, 0.5) == {1: 0.0}
    assert evaluate_coalition(frozenset({2}), by_id, snapshot, 0.5) == {2: 0.5}
    grand = evaluate_coalition(frozenset({1, 2}), by_id, snapshot, 0.5)
    assert grand == pytest.approx({1: 0.5, 2: 0.495})

    assert form_partition(players, snapshot).sizes() == (2,)
    exact = form_partition(players, snapshot, GameConfig(tolerance=0.0))
    assert exact.coalitions == (frozenset({1}), frozenset({2}))


def _accepted_merges(records: list[logging.LogRecord]) -> list[tuple[Coalition, Coalition]]:
    merges: list[tuple[Coalition, Coalition]] = []
    for record in records:
        if record.msg == MERGE_MESSAGE:
            left, right = cast("tuple[list[int], list[int]]", record.args)
            merges.append((frozenset(left), frozenset(right)))
    return merges


def test_exact_rule_on_random_games(
    rng: np.random.Generator,
    property_cases: Callable[[int], int],
    caplog: pytest.LogCaptureFixture,
) -> None:
    cfg = GameConfig(tolerance=0.0)
    cases = property_cases(500)
    unsettled = 0
    for _ in range(cases):
        players, snapshot = random_game(rng)
        by_id = {p.constellation_id: p for p in players}
        values = _payoff_lookup(by_id, snapshot, cfg.alpha)

        caplog.clear()
        with caplog.at_level(logging.DEBUG, logger="fedsat.federation_game"):
            partition = form_partition(players, snapshot, cfg)

        for a, b in _accepted_merges(caplog.records):
            merged, va, vb = values(a | b), values(a), values(b)
            deltas = [merged[p] - va[p] for p in a] + [merged[p] - vb[p] for p in b]
            assert min(deltas) >= 0.0
            assert max(deltas) > 0.0

        assert partition.covers(by_id)
        if not partition.converged:
            unsettled += 1
            continue
        for a, b in combinations(partition.coalitions, 2):
            assert not _merge_preferred(values, a, b, 0.0)
        for coalition in partition.coalitions:
            current = values(coalition)
            for pid in coalition:
                assert values(frozenset({pid}))[pid] <= current[pid]
    assert unsettled <= cases // 100
