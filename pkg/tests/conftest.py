# SPDX-FileCopyrightText: 2025-present fedsat contributors
#
# SPDX-License-Identifier: MIT

from __future__ import annotations

from collections.abc import Callable
from typing import Any

import numpy as np
import pytest


def pytest_addoption(parser: Any) -> None:
    parser.addoption(
        "--property-cases",
        type=int,
        default=None,
        help="number of randomized cases per property suite (defaults differ per suite)",
    )


def pytest_configure(config: Any) -> None:
    config.addinivalue_line("markers", "slow: 500-run Monte Carlo acceptance sweeps.")
    config.addinivalue_line("markers", "published: reproduces a published number within tolerance.")


@pytest.fixture
def property_cases(request: pytest.FixtureRequest) -> Callable[[int], int]:
    override = request.config.getoption("--property-cases")

    def cases(default: int) -> int:
        return default if override is None else int(override)

    return cases


@pytest.fixture
def rng(request: pytest.FixtureRequest) -> np.random.Generator:
    """Per-test generator, seeded from the test id so failures reproduce."""
    seed = sum(request.node.nodeid.encode())
    return np.random.default_rng(seed)
