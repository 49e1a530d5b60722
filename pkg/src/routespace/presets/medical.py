"""Bundled treatment scheme with two-component points.

Five design points (basic plan, environmental, relaxation, physical therapy,
joint therapy) alternate with rule-bearing analysis points; each design point
synthesises its plan from a morphological structure.  The pairwise
compatibility tables are shared by every point; priorities differ per point.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from ..treatment import (
    OutcomeScript,
    TreatmentScheme,
    WalkResult,
    design_at_point,
    plan_walk,
    scripted_selector,
)
from .loaders import data_path, load


def load_scheme() -> TreatmentScheme:
    return load("medical_scheme.json")


def individual_script_path():
    return data_path("individual_script.json")


def point_composites(scheme: TreatmentScheme | None = None) -> dict[str, tuple]:
    scheme = scheme or load_scheme()
    cache: dict = {}
    return {p.id: design_at_point(scheme, p.id, cache) for p in scheme.design_points}


def medical_pipeline(
    script: OutcomeScript | Iterable[str],
    selections: Mapping[str, list[str]] | None = None,
    scheme: TreatmentScheme | None = None,
    max_visits: int = 3,
) -> WalkResult:
    """Synthesise every design point, then walk the scheme against the script."""
    scheme = scheme or load_scheme()
    selector = scripted_selector(selections) if selections else None
    return plan_walk(scheme, script, selector, max_visits)
