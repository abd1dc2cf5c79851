# SPDX-FileCopyrightText: 2025-present fedsat contributors
#
# SPDX-License-Identifier: MIT
"""
Monte Carlo harness: Federation vs No Federation over seeded runs.

Every run derives its random streams from ``(master_seed, run_index)`` only,
so runs can execute in any order or process and still fold into identical
sweep results.
"""

from __future__ import annotations

import csv
import io
import logging
from collections.abc import Mapping
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
from enum import Enum
from itertools import repeat
from typing import TextIO
from typing import Union

import numpy as np

from fedsat.allocator import Player
from fedsat.allocator import VisibilitySnapshot
from fedsat.allocator import allocate_no_federation
from fedsat.allocator import capture_snapshot
from fedsat.catalog import DEFAULT_RESOURCE_TYPES
from fedsat.catalog import Constellation
from fedsat.catalog import Homogeneity
from fedsat.catalog import TypeMix
from fedsat.catalog import assign_workloads
from fedsat.catalog import build_constellation
from fedsat.catalog import generate_tasks
from fedsat.errors import ConfigError
from fedsat.errors import EmptyOutputError
from fedsat.federation_game import FederationBroker
from fedsat.federation_game import GameConfig
from fedsat.orbit import GroundStation

__all__ = [
    "PRESET_NAMES",
    "Policy",
    "RunInstance",
    "RunResult",
    "ScenarioConfig",
    "Sweep",
    "SweepResult",
    "draw_instance",
    "emit_csv",
    "emit_presets_csv",
    "emit_type_csv",
    "preset_sweeps",
    "run_once",
    "run_scenario",
    "scenario_presets",
]

logger = logging.getLogger(__name__)

SECONDS_PER_DAY = 86_400.0
PRESET_NAMES = ("A", "B", "C", "D", "E")
SWEEPABLE = (
    "constellation_count",
    "sats_per_constellation",
    "altitude_km",
    "task_load",
    "alpha",
    "inclination",
    "type_mix",
)
CSV_COLUMNS = (
    "scenario",
    "swept_param",
    "value",
    "policy",
    "mean_success_pct",
    "std_success_pct",
    "mean_sats_visible",
    "runs",
    "master_seed",
)
EQUAL_MIX = (0.25, 0.25, 0.25, 0.25)
HEAVY_MIX = (0.05, 0.25, 0.25, 0.45)
LIGHT_MIX = (0.45, 0.25, 0.25, 0.05)

SweepValue = Union[int, float, tuple[float, ...]]


class Policy(str, Enum):
    FEDERATION = "Federation"
    NO_FEDERATION = "NoFederation"
    BOTH = "Both"

    def expand(self) -> tuple[Policy, ...]:
        if self is Policy.BOTH:
            return Policy.FEDERATION, Policy.NO_FEDERATION
        return (self,)


def _check_range(key: str, value: float, low: float, high: float) -> None:
    if not low <= value <= high:
        raise ConfigError(f"must be in [{low:g}, {high:g}], got {value!r}", key=key)


@dataclass(frozen=True)
class ScenarioConfig:
    name: str = "custom"
    constellation_count: int = 20
    sats_per_constellation: int = 40
    altitude_km: float = 500.0
    task_load: int = 200
    type_mix: tuple[float, ...] = EQUAL_MIX
    homogeneity: Homogeneity = Homogeneity.HOMOGENEOUS
    runs: int = 500
    master_seed: int = 0
    alpha: float = 0.5
    gs: GroundStation = field(default_factory=GroundStation)
    policy: Policy = Policy.BOTH
    inclination: float = 0.0
    max_rounds: int = 1000
    tolerance: float = 0.01
    step: float = 1.0
    workers: int = 1

    def __post_init__(self) -> None:
        _check_range("constellation_count", self.constellation_count, 5, 20)
        _check_range("sats_per_constellation", self.sats_per_constellation, 10, 60)
        _check_range("altitude_km", self.altitude_km, 500, 1000)
        _check_range("task_load", self.task_load, 0, 500)
        _check_range("alpha", self.alpha, 0.0, 1.0)
        _check_range("inclination", self.inclination, 0.0, 179.999)
        if self.runs < 1:
            raise ConfigError(f"must be at least 1, got {self.runs}", key="runs")
        if self.workers < 1:
            raise ConfigError(f"must be at least 1, got {self.workers}", key="workers")
        if not self.step > 0:
            raise ConfigError(f"must be positive, got {self.step}", key="step")
        if len(self.type_mix) != len(DEFAULT_RESOURCE_TYPES):
            raise ConfigError(
                f"needs {len(DEFAULT_RESOURCE_TYPES)} fractions, got {len(self.type_mix)}",
                key="type_mix",
            )
        self.mix  # noqa: B018  # validates fractions
        self.game  # noqa: B018

    @property
    def mix(self) -> TypeMix:
        return TypeMix(self.type_mix)

    @property
    def game(self) -> GameConfig:
        return GameConfig(alpha=self.alpha, max_rounds=self.max_rounds, tolerance=self.tolerance)

    def with_value(self, param: str, value: SweepValue) -> ScenarioConfig:
        if param not in SWEEPABLE:
            raise ConfigError(f"cannot sweep `{param}`; choose one of {', '.join(SWEEPABLE)}")
        return replace(self, **{param: value})


@dataclass(frozen=True)
class Sweep:
    param: str
    values: tuple[SweepValue, ...]

    def __post_init__(self) -> None:
        if self.param not in SWEEPABLE:
            raise ConfigError(
                f"cannot sweep `{self.param}`; choose one of {', '.join(SWEEPABLE)}", key="param"
            )
        if not self.values:
            raise ConfigError("at least one sweep value is required", key="values")


@dataclass(frozen=True)
class RunResult:
    run_index: int
    seed: int
    success_pct: Mapping[Policy, float]
    type_success_pct: Mapping[Policy, Mapping[int, float]]
    avg_satellites_in_visibility: float
    coalition_sizes: tuple[int, ...] = ()
    empty_workload: bool = False


@dataclass(frozen=True)
class SweepResult:
    scenario: str
    swept_param: str
    value: SweepValue
    runs: int
    master_seed: int
    policies: tuple[Policy, ...]
    mean_success_pct: Mapping[Policy, float]
    std_success_pct: Mapping[Policy, float]
    min_success_pct: Mapping[Policy, float]
    max_success_pct: Mapping[Policy, float]
    mean_type_success_pct: Mapping[Policy, Mapping[int, float]]
    mean_sats_visible: float

    @classmethod
    def aggregate(
        cls, cfg: ScenarioConfig, param: str, value: SweepValue, results: Sequence[RunResult]
    ) -> SweepResult:
        policies = cfg.policy.expand()
        success = {p: np.array([r.success_pct[p] for r in results]) for p in policies}
        types = [rt.id for rt in DEFAULT_RESOURCE_TYPES]
        return cls(
            scenario=cfg.name,
            swept_param=param,
            value=value,
            runs=len(results),
            master_seed=cfg.master_seed,
            policies=policies,
            mean_success_pct={p: float(np.mean(v)) for p, v in success.items()},
            std_success_pct={p: float(np.std(v)) for p, v in success.items()},
            min_success_pct={p: float(np.min(v)) for p, v in success.items()},
            max_success_pct={p: float(np.max(v)) for p, v in success.items()},
            mean_type_success_pct={
                p: {
                    t: float(np.mean([r.type_success_pct[p][t] for r in results])) for t in types
                }
                for p in policies
            },
            mean_sats_visible=float(np.mean([r.avg_satellites_in_visibility for r in results])),
        )

    def value_label(self) -> str:
        if isinstance(self.value, tuple):
            return TypeMix(self.value).label()
        return f"{self.value:.4f}"


def _constellations(cfg: ScenarioConfig, rng: np.random.Generator) -> list[Constellation]:
    type_count = len(DEFAULT_RESOURCE_TYPES)
    constellations = []
    for index in range(cfg.constellation_count):
        raan, phase_offset = rng.uniform(0.0, 360.0, size=2)
        homogeneous = cfg.homogeneity is Homogeneity.HOMOGENEOUS
        constellations.append(
            build_constellation(
                id=index + 1,
                tenant=f"tenant-{index + 1}",
                count=cfg.sats_per_constellation,
                altitude=cfg.altitude_km,
                homogeneity=cfg.homogeneity,
                type_assignment=1 + index % type_count if homogeneous else None,
                inclination=cfg.inclination,
                raan=float(raan),
                phase_offset=float(phase_offset),
            )
        )
    return constellations


@dataclass(frozen=True, eq=False)
class RunInstance:
    """What one run draws from its seed before any policy is applied."""

    seed: int
    players: tuple[Player, ...]
    snapshot: VisibilitySnapshot
    workload_seed: np.random.SeedSequence

    @property
    def task_count(self) -> int:
        return sum(len(player.assigned_tasks) for player in self.players)


def draw_instance(cfg: ScenarioConfig, run_index: int) -> RunInstance:
    run_seed = np.random.SeedSequence(cfg.master_seed, spawn_key=(run_index,))
    geometry_seed, epoch_seed, task_seed, workload_seed = run_seed.spawn(4)

    constellations = _constellations(cfg, np.random.default_rng(geometry_seed))
    epoch = float(np.random.default_rng(epoch_seed).uniform(0.0, SECONDS_PER_DAY))
    snapshot = capture_snapshot(cfg.gs, constellations, epoch, cfg.step)

    tasks = generate_tasks(cfg.task_load, cfg.mix, task_seed)
    workloads = assign_workloads(tasks, [c.id for c in constellations], workload_seed)
    return RunInstance(
        seed=int(run_seed.generate_state(1)[0]),
        players=tuple(Player(c, tuple(workloads[c.id])) for c in constellations),
        snapshot=snapshot,
        workload_seed=workload_seed,
    )


def run_once(cfg: ScenarioConfig, run_index: int) -> RunResult:
    instance = draw_instance(cfg, run_index)
    types = [rt.id for rt in DEFAULT_RESOURCE_TYPES]

    success: dict[Policy, float] = {}
    by_type: dict[Policy, Mapping[int, float]] = {}
    sizes: tuple[int, ...] = ()
    for policy in cfg.policy.expand():
        if policy is Policy.FEDERATION:
            broker = FederationBroker(instance.players, instance.snapshot, cfg.game)
            outcome = broker.allocate()
            sizes = broker.partition.sizes()
        else:
            outcome = allocate_no_federation(
                instance.players, instance.snapshot, instance.workload_seed
            )
        success[policy] = outcome.success_pct()
        by_type[policy] = outcome.success_pct_by_type(types)

    empty = instance.task_count == 0
    if empty:
        logger.warning(
            "Run %d of %s has an empty workload; success counted as 100%%", run_index, cfg.name
        )
    return RunResult(
        run_index=run_index,
        seed=instance.seed,
        success_pct=success,
        type_success_pct=by_type,
        avg_satellites_in_visibility=len(instance.snapshot) / cfg.constellation_count,
        coalition_sizes=sizes,
        empty_workload=empty,
    )


def _run_all(cfg: ScenarioConfig) -> list[RunResult]:
    if cfg.workers == 1:
        return [run_once(cfg, index) for index in range(cfg.runs)]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(run_once, repeat(cfg), range(cfg.runs), chunksize=8))


def run_scenario(cfg: ScenarioConfig, sweep: Sweep) -> list[SweepResult]:
    results = []
    for value in sweep.values:
        point = cfg.with_value(sweep.param, value)
        logger.info("%s: %s=%s, %d runs", cfg.name, sweep.param, value, point.runs)
        results.append(SweepResult.aggregate(point, sweep.param, value, _run_all(point)))
    return results


def preset_sweeps(name: str) -> list[tuple[ScenarioConfig, Sweep]]:
    match name.upper():
        case "A":
            altitudes = Sweep("altitude_km", (500.0, 600.0, 700.0, 800.0, 900.0, 1000.0))
            return [
                (
                    ScenarioConfig(
                        name=f"A-{sats}-{homogeneity.value}",
                        constellation_count=20,
                        sats_per_constellation=sats,
                        task_load=100,
                        homogeneity=homogeneity,
                    ),
                    altitudes,
                )
                for sats in (20, 60)
                for homogeneity in Homogeneity
            ]
        case "B":
            base = ScenarioConfig(name="B", sats_per_constellation=40, task_load=200)
            return [(base, Sweep("constellation_count", (5, 10, 15, 20)))]
        case "C":
            base = ScenarioConfig(name="C", constellation_count=20, task_load=100)
            return [(base, Sweep("sats_per_constellation", (10, 20, 30, 40, 50, 60)))]
        case "D":
            base = ScenarioConfig(name="D", sats_per_constellation=40, constellation_count=5)
            return [(base, Sweep("task_load", (50, 100, 150, 200, 250, 300)))]
        case "E":
            base = ScenarioConfig(
                name="E", sats_per_constellation=40, constellation_count=20, task_load=200
            )
            return [(base, Sweep("type_mix", (EQUAL_MIX, HEAVY_MIX, LIGHT_MIX)))]
        case _:
            raise ConfigError(
                f"unknown scenario `{name}`; choose one of {', '.join(PRESET_NAMES)}",
                key="scenario",
            )


def scenario_presets(name: str) -> list[ScenarioConfig]:
    return [
        base.with_value(sweep.param, value)
        for base, sweep in preset_sweeps(name)
        for value in sweep.values
    ]


def _format(value: float) -> str:
    return f"{value:.4f}"


def emit_csv(results: Sequence[SweepResult], out: TextIO | None = None) -> str:
    if not results:
        raise EmptyOutputError
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for result in results:
        for policy in result.policies:
            writer.writerow(
                (
                    result.scenario,
                    result.swept_param,
                    result.value_label(),
                    policy.value,
                    _format(result.mean_success_pct[policy]),
                    _format(result.std_success_pct[policy]),
                    _format(result.mean_sats_visible),
                    result.runs,
                    result.master_seed,
                )
            )
    text = buffer.getvalue()
    if out is not None:
        out.write(text)
    return text


def emit_type_csv(results: Sequence[SweepResult], out: TextIO | None = None) -> str:
    """Per-sensing-type mean success, one row per (sweep point, policy, type)."""
    if not results:
        raise EmptyOutputError
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("scenario", "swept_param", "value", "policy", "type", "mean_success_pct"))
    for result in results:
        for policy in result.policies:
            for resource_type, mean in sorted(result.mean_type_success_pct[policy].items()):
                writer.writerow(
                    (
                        result.scenario,
                        result.swept_param,
                        result.value_label(),
                        policy.value,
                        resource_type,
                        _format(mean),
                    )
                )
    text = buffer.getvalue()
    if out is not None:
        out.write(text)
    return text


def emit_presets_csv(names: Sequence[str] = PRESET_NAMES, out: TextIO | None = None) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        (
            "scenario",
            "swept_param",
            "values",
            "constellation_count",
            "sats_per_constellation",
            "altitude_km",
            "task_load",
            "homogeneity",
            "type_mix",
        )
    )
    for name in names:
        for base, sweep in preset_sweeps(name):
            values = " ".join(
                TypeMix(v).label() if isinstance(v, tuple) else f"{v:g}" for v in sweep.values
            )
            writer.writerow(
                (
                    base.name,
                    sweep.param,
                    values,
                    base.constellation_count,
                    base.sats_per_constellation,
                    f"{base.altitude_km:g}",
                    base.task_load,
                    base.homogeneity.value,
                    TypeMix(base.type_mix).label(),
                )
            )
    text = buffer.getvalue()
    if out is not None:
        out.write(text)
    return text
