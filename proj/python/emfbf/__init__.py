# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The emfbf Authors
"""Python bindings for the emfbf simulator."""

import json as _json

from ._emfbf import (
    DomainError,
    Error,
    InvalidConfig,
    RankDeficient,
    Scenario,
    __version__,
    array_factor_db,
    element_gain_azimuth_db,
    element_gain_db,
    element_gain_elevation_db,
    waterfill,
)
from . import _emfbf


def _dump(config):
    if config is None:
        return "{}"
    if isinstance(config, str):
        return config
    return _json.dumps(config)


def build_scenario(config=None, seed=None):
    return Scenario.from_config(_dump(config), seed)


def evaluate_snapshot(scenario, config=None):
    return _emfbf.evaluate_snapshot(scenario, _dump(config))


def monte_carlo(config=None, users=(3, 4, 5, 6, 7, 8, 9), samples=200, seed=None, workers=0):
    text = _emfbf.monte_carlo(_dump(config), list(users), samples, seed, workers)
    return _json.loads(text)


__all__ = [
    "DomainError",
    "Error",
    "InvalidConfig",
    "RankDeficient",
    "Scenario",
    "__version__",
    "array_factor_db",
    "build_scenario",
    "element_gain_azimuth_db",
    "element_gain_db",
    "element_gain_elevation_db",
    "evaluate_snapshot",
    "monte_carlo",
    "waterfill",
]
