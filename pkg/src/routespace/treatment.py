"""Planner over schemes of two-component points.

A scheme alternates design points (each backed by a morphological structure
whose synthesis yields the admissible plans) with analysis points (ordered
outcome -> go-to rules).  Walking the scheme against observed outcomes yields
an individual trajectory of chosen composites; the scheme may contain cycles,
so walks are guarded by a per-point visit bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .model import InputError
from .morphology import CompositeDA, EmptySynthesisError, MorphStructure, synthesize_hierarchical


class UnknownOutcomeError(Exception):
    """An observed outcome label matches no rule at the analysis point."""

    def __init__(self, point: str, label: str):
        super().__init__(f"analysis point {point!r} has no rule for outcome {label!r}")
        self.point = point
        self.label = label


@dataclass(frozen=True)
class Rule:
    outcome: str
    target: str  # design point id, or the scheme's end id


@dataclass(frozen=True)
class RuleSet:
    point: str
    rules: tuple[Rule, ...]

    def target_for(self, label: str) -> str:
        for rule in self.rules:
            if rule.outcome == label:
                return rule.target
        raise UnknownOutcomeError(self.point, label)


@dataclass(frozen=True, eq=False)
class DesignPoint:
    """Design/implementation point: synthesise a plan, then hand over to its
    single successor analysis point (or terminate)."""

    id: str
    structure: MorphStructure | None
    successor: str
    composites: tuple[CompositeDA, ...] | None = None  # precomputed alternative list

    def __eq__(self, other):
        if not isinstance(other, DesignPoint):
            return NotImplemented
        return (
            self.id == other.id
            and self.structure == other.structure
            and self.successor == other.successor
            and self.composites == other.composites
        )


@dataclass(frozen=True)
class AnalysisPoint:
    id: str
    rules: RuleSet


@dataclass(frozen=True)
class TreatmentScheme:
    design_points: tuple[DesignPoint, ...]
    analysis_points: tuple[AnalysisPoint, ...]
    initial: str
    end: str = "End"

    def design(self, point_id: str) -> DesignPoint:
        for p in self.design_points:
            if p.id == point_id:
                return p
        raise KeyError(f"no design point {point_id!r}")

    def analysis(self, point_id: str) -> AnalysisPoint:
        for p in self.analysis_points:
            if p.id == point_id:
                return p
        raise KeyError(f"no analysis point {point_id!r}")


@dataclass(frozen=True)
class OutcomeScript:
    """Observed outcome labels, consumed one per analysis-point visit."""

    labels: tuple[str, ...]


def validate_scheme(scheme: TreatmentScheme) -> list[str]:
    """Invariant check; empty iff the scheme is well formed and the end point
    is reachable from the initial point."""
    problems: list[str] = []
    design_ids = {p.id for p in scheme.design_points}
    analysis_ids = {p.id for p in scheme.analysis_points}
    if len(design_ids) != len(scheme.design_points):
        problems.append("duplicate design point ids")
    if len(analysis_ids) != len(scheme.analysis_points):
        problems.append("duplicate analysis point ids")
    if design_ids & analysis_ids:
        problems.append(f"ids used for both point kinds: {sorted(design_ids & analysis_ids)}")
    if scheme.initial not in design_ids:
        problems.append(f"initial point {scheme.initial!r} is not a design point")
    if scheme.end in design_ids | analysis_ids:
        problems.append(f"end id {scheme.end!r} collides with a point id")
    for p in scheme.design_points:
        if p.successor != scheme.end and p.successor not in analysis_ids:
            problems.append(f"design point {p.id}: successor {p.successor!r} is not an analysis point or the end")
        if p.structure is None and p.composites is None:
            problems.append(f"design point {p.id}: neither structure nor composite list")
    for p in scheme.analysis_points:
        seen = set()
        for rule in p.rules.rules:
            if rule.outcome in seen:
                problems.append(f"analysis point {p.id}: duplicate outcome {rule.outcome!r}")
            seen.add(rule.outcome)
            if rule.target != scheme.end and rule.target not in design_ids:
                problems.append(f"analysis point {p.id}: rule target {rule.target!r} does not exist")
    if problems:
        return problems

    # end reachability over the point graph
    reached = set()
    stack = [scheme.initial]
    while stack:
        node = stack.pop()
        if node in reached or node == scheme.end:
            reached.add(node)
            continue
        reached.add(node)
        if node in design_ids:
            stack.append(scheme.design(node).successor)
        else:
            stack.extend(rule.target for rule in scheme.analysis(node).rules.rules)
    if scheme.end not in reached:
        problems.append(f"end point {scheme.end!r} is unreachable from {scheme.initial!r}")
    return problems


def design_at_point(
    scheme: TreatmentScheme,
    point_id: str,
    cache: dict | None = None,
) -> tuple[CompositeDA, ...]:
    """Pareto composite list for one design point (synthesised once per cache)."""
    if cache is not None and point_id in cache:
        return cache[point_id]
    point = scheme.design(point_id)
    if point.composites is not None:
        result = point.composites
    else:
        try:
            result = tuple(synthesize_hierarchical(point.structure))
        except EmptySynthesisError as exc:
            raise EmptySynthesisError(f"{point_id}/{exc.node}") from exc
    if cache is not None:
        cache[point_id] = result
    return result


@dataclass(frozen=True)
class WalkStep:
    point: str
    composite: CompositeDA


@dataclass(frozen=True)
class Truncation:
    reason: str  # "visit-bound" or "script-exhausted"
    point: str


@dataclass(frozen=True)
class WalkResult:
    steps: tuple[WalkStep, ...]
    points: tuple[str, ...]  # every point visited, analysis points included
    truncation: Truncation | None = None

    @property
    def completed(self) -> bool:
        return self.truncation is None

    @property
    def composites(self) -> tuple[CompositeDA, ...]:
        return tuple(step.composite for step in self.steps)


Selector = Callable[[str, int, Sequence[CompositeDA]], CompositeDA]


def first_selector(point_id: str, visit: int, composites: Sequence[CompositeDA]) -> CompositeDA:
    return composites[0]


def scripted_selector(picks: Mapping[str, Sequence[str]]) -> Selector:
    """Selector pinning composite labels per design point, consumed per visit;
    points without pinned labels fall back to the first composite."""

    def select(point_id: str, visit: int, composites: Sequence[CompositeDA]) -> CompositeDA:
        queue = picks.get(point_id)
        if queue is None or visit > len(queue):
            return composites[0]
        wanted = queue[visit - 1]
        for comp in composites:
            if comp.label == wanted:
                return comp
        raise InputError(f"design point {point_id} has no composite labelled {wanted!r}")

    return select


def plan_walk(
    scheme: TreatmentScheme,
    script: OutcomeScript | Iterable[str],
    selector: Selector | None = None,
    max_visits: int = 3,
) -> WalkResult:
    """Walk the scheme from its initial point, consuming one script label per
    analysis visit, until the end point - or a truncation when a point exceeds
    `max_visits` or the script runs out.
    """
    labels = iter(script.labels if isinstance(script, OutcomeScript) else script)
    select = selector or first_selector
    design_ids = {p.id for p in scheme.design_points}
    cache: dict = {}
    visits: dict[str, int] = {}
    steps: list[WalkStep] = []
    visited: list[str] = []
    current = scheme.initial
    while current != scheme.end:
        visits[current] = visits.get(current, 0) + 1
        if visits[current] > max_visits:
            return WalkResult(tuple(steps), tuple(visited), Truncation("visit-bound", current))
        visited.append(current)
        if current in design_ids:
            composites = design_at_point(scheme, current, cache)
            chosen = select(current, visits[current], composites)
            if chosen not in composites:
                raise InputError(f"selector returned a composite foreign to point {current}")
            steps.append(WalkStep(current, chosen))
            current = scheme.design(current).successor
        else:
            try:
                label = next(labels)
            except StopIteration:
                return WalkResult(tuple(steps), tuple(visited), Truncation("script-exhausted", current))
            current = scheme.analysis(current).rules.target_for(label)
    visited.append(scheme.end)
    return WalkResult(tuple(steps), tuple(visited))


def enumerate_trajectories(scheme: TreatmentScheme, max_visits: int = 3) -> list[tuple[str, ...]]:
    """All initial-to-end point sequences, branching over every rule at each
    analysis point, with no point visited more than `max_visits` times."""
    design_ids = {p.id for p in scheme.design_points}
    out: list[tuple[str, ...]] = []

    def walk(node: str, path: tuple[str, ...], visits: Mapping[str, int]):
        if node == scheme.end:
            out.append(path + (node,))
            return
        count = visits.get(node, 0) + 1
        if count > max_visits:
            return
        bumped = dict(visits)
        bumped[node] = count
        if node in design_ids:
            walk(scheme.design(node).successor, path + (node,), bumped)
        else:
            for rule in scheme.analysis(node).rules.rules:
                walk(rule.target, path + (node,), bumped)

    walk(scheme.initial, (), {})
    return out
