"""Bundled three-stage start-up development scenario.

Each stage is a product/team/marketing system model; composites are
synthesised per stage and chained into development trajectories constrained
by the adjacent-stage compatibility table.
"""

from __future__ import annotations

from ..trajectory import MultistageResult, Scenario, multistage_synthesize
from .loaders import load


def load_scenario() -> Scenario:
    return load("startup_scenario.json")


def startup_pipeline(scenario: Scenario | None = None) -> MultistageResult:
    return multistage_synthesize(scenario or load_scenario())
