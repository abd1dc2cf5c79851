# SPDX-FileCopyrightText: 2025-present fedsat contributors
#
# SPDX-License-Identifier: MIT

from fedsat.allocator import AllocationOutcome
from fedsat.allocator import Player
from fedsat.allocator import VisibilitySnapshot
from fedsat.allocator import allocate
from fedsat.allocator import allocate_no_federation
from fedsat.allocator import capture_snapshot
from fedsat.catalog import Constellation
from fedsat.catalog import CubeSat
from fedsat.catalog import Homogeneity
from fedsat.catalog import SensingTask
from fedsat.catalog import TypeMix
from fedsat.catalog import build_constellation
from fedsat.catalog import generate_tasks
from fedsat.errors import FedsatError
from fedsat.federation_game import FederationBroker
from fedsat.federation_game import GameConfig
from fedsat.federation_game import Partition
from fedsat.federation_game import form_partition
from fedsat.link import LinkConfig
from fedsat.link import access_report
from fedsat.orbit import GroundStation
from fedsat.orbit import OrbitElements
from fedsat.scenario import Policy
from fedsat.scenario import ScenarioConfig
from fedsat.scenario import Sweep
from fedsat.scenario import run_once
from fedsat.scenario import run_scenario

__all__ = [
    "AllocationOutcome",
    "Constellation",
    "CubeSat",
    "FederationBroker",
    "FedsatError",
    "GameConfig",
    "GroundStation",
    "Homogeneity",
    "LinkConfig",
    "OrbitElements",
    "Partition",
    "Player",
    "Policy",
    "ScenarioConfig",
    "SensingTask",
    "Sweep",
    "TypeMix",
    "VisibilitySnapshot",
    "access_report",
    "allocate",
    "allocate_no_federation",
    "build_constellation",
    "capture_snapshot",
    "form_partition",
    "generate_tasks",
    "run_once",
    "run_scenario",
]
