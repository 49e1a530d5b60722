"""Bundled educational-trajectory dataset and its solving pipeline.

The space covers degree steps from an initial BS up to a postdoc goal, scored
on three maximise criteria plus movement complexity on arcs.  The pipeline
follows the staged heuristic: per template, enumerate the admissible routes
grouped into cost tie classes; the cheapest class per template feeds a pooled
four-criteria Pareto selection; the final pick stays with the human.

The dataset ships with the published reference solution table; the audit
recomputes every row from the raw node/arc tables and reports mismatches
instead of silently adopting either side.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..model import (
    CriterionSpec,
    DesignSpace,
    Route,
    Sense,
    as_rational,
    build_route,
    pareto_filter,
    route_aggregates,
)
from .loaders import load

DEFAULT_ARC_CAP = Fraction(5)
DEFAULT_TIME_CAP = Fraction(12)

CLASS_TAG = "class="


@dataclass(frozen=True)
class GeneralizedTemplate:
    """A trajectory shape: an ordered sequence of node classes."""

    id: str
    classes: tuple[str, ...]


TEMPLATES = (
    GeneralizedTemplate("L1", ("a", "b", "h", "p")),
    GeneralizedTemplate("L2", ("a", "b", "g", "h", "p")),
    GeneralizedTemplate("L3", ("a", "b", "h", "f", "p")),
    GeneralizedTemplate("L4", ("a", "b", "g", "h", "f", "p")),
)

# Published reference solutions: route id, vertex sequence, printed parameters,
# and whether the published staged selection kept the route.
REFERENCE_ROUTES = (
    ("L1_1", ("a1", "b3", "h3", "p1"), {"theta1": 10, "theta2": 15, "theta3": 15, "tau": 8, "d": 7}, True),
    ("L2_1", ("a1", "b1", "g1", "h3", "p1"), {"theta1": 15, "theta2": 17, "theta3": 19, "tau": 9, "d": 5}, True),
    ("L3_1", ("a1", "b2", "h2", "f1", "p1"), {"theta1": 15, "theta2": 18, "theta3": 19, "tau": 10, "d": 5}, True),
    ("L4_1", ("a1", "b1", "g1", "h7", "f1", "p1"), {"theta1": 19, "theta2": 21, "theta3": 23, "tau": 11, "d": 6}, False),
    ("L4_2", ("a1", "b1", "g3", "h3", "f2", "p1"), {"theta1": 19, "theta2": 21, "theta3": 23, "tau": 11, "d": 6}, False),
    ("L4_3", ("a1", "b2", "g2", "h4", "f1", "p1"), {"theta1": 19, "theta2": 22, "theta3": 24, "tau": 11, "d": 6}, True),
)

REFERENCE_TEMPLATE = {rid: "L" + rid[1] for rid, _, _, _ in REFERENCE_ROUTES}


def load_space() -> DesignSpace:
    return load("educational_space.json")


def vertex_class(space: DesignSpace, vid: str) -> str | None:
    for tag in space.vertex(vid).labels:
        if tag.startswith(CLASS_TAG):
            return tag[len(CLASS_TAG):]
    return None


def class_members(space: DesignSpace) -> dict[str, tuple[str, ...]]:
    out: dict[str, list[str]] = {}
    for v in space.vertices:
        cls = vertex_class(space, v.id)
        if cls is not None:
            out.setdefault(cls, []).append(v.id)
    return {cls: tuple(sorted(ids)) for cls, ids in out.items()}


def template_routes(space: DesignSpace, template: GeneralizedTemplate) -> list[Route]:
    """Every route following the template's class sequence, connected by arcs."""
    members = class_members(space)
    pools = [members.get(cls, ()) for cls in template.classes]
    routes = []
    for combo in itertools.product(*pools):
        if all(space.arc_between(a, b) is not None for a, b in zip(combo, combo[1:])):
            routes.append(build_route(space, combo))
    return routes


@dataclass(frozen=True)
class RankedRoute:
    route: Route
    pareto_rank: int  # 1 = profit-nondominated within its tie class


@dataclass(frozen=True)
class TieClass:
    cost: Fraction
    members: tuple[RankedRoute, ...]


@dataclass(frozen=True)
class TemplateReport:
    template: GeneralizedTemplate
    tie_classes: tuple[TieClass, ...]  # ascending cost
    winners: tuple[Route, ...]  # the minimum-cost tie class

    @property
    def feasible(self) -> bool:
        return bool(self.tie_classes)


@dataclass(frozen=True)
class EduResult:
    arc_cap: Fraction
    time_cap: Fraction
    templates: tuple[TemplateReport, ...]
    pool: tuple[tuple[str, Route], ...]  # (template id, route) entering stage 2
    pareto: tuple[tuple[str, Route], ...]  # stage-2 Pareto selection
    ranking: tuple[tuple[str, Route], ...]  # stage-3 report order


def _rank_by_profit(space: DesignSpace, routes: Sequence[Route]) -> tuple[RankedRoute, ...]:
    remaining = list(routes)
    ranked: dict[tuple[str, ...], int] = {}
    level = 1
    while remaining:
        front = pareto_filter(remaining, space.criteria, key=lambda r: r.profit)
        for r in front:
            ranked[r.vertices] = level
        remaining = [r for r in remaining if r.vertices not in ranked]
        level += 1
    return tuple(RankedRoute(r, ranked[r.vertices]) for r in routes)


def _tie_classes(space: DesignSpace, routes: Sequence[Route]) -> tuple[TieClass, ...]:
    groups: dict[Fraction, list[Route]] = {}
    for r in routes:
        groups.setdefault(r.cost, []).append(r)
    classes = []
    for cost in sorted(groups):
        members = sorted(groups[cost], key=lambda r: (len(r.vertices), r.vertices))
        ranked = _rank_by_profit(space, members)
        ordered = tuple(sorted(ranked, key=lambda m: (m.pareto_rank, len(m.route.vertices), m.route.vertices)))
        classes.append(TieClass(cost, ordered))
    return tuple(classes)


def edu_pipeline(
    space: DesignSpace | None = None,
    templates: Sequence[GeneralizedTemplate] = TEMPLATES,
    arc_cap=DEFAULT_ARC_CAP,
    time_cap=DEFAULT_TIME_CAP,
) -> EduResult:
    """Run the staged heuristic over the educational space.

    Stage 1 keeps all minimum-cost ties per template (the full tie-class
    detail is reported); stage 2 pools the per-template winners that satisfy
    both caps and filters them over (profits up, cost down); stage 3 only
    orders the pool for human review, it never picks.
    """
    space = space or load_space()
    arc_cap = as_rational(arc_cap)
    time_cap = as_rational(time_cap)
    reports = []
    pool: list[tuple[str, Route]] = []
    for template in templates:
        routes = template_routes(space, template)
        classes = _tie_classes(space, routes)
        winners = tuple(m.route for m in classes[0].members) if classes else ()
        reports.append(TemplateReport(template, classes, winners))
        for r in winners:
            arcs_ok = all(
                space.arc_between(a, b).weight <= arc_cap
                for a, b in zip(r.vertices, r.vertices[1:])
            )
            if arcs_ok and r.duration <= time_cap:
                pool.append((template.id, r))
    four_way = tuple(space.criteria) + (CriterionSpec("movement", Sense.MIN),)
    pareto = tuple(
        pareto_filter(pool, four_way, key=lambda item: item[1].profit + (item[1].cost,))
    )
    pareto_keys = {r.vertices for _, r in pareto}
    ranking = tuple(
        sorted(
            pool,
            key=lambda item: (
                0 if item[1].vertices in pareto_keys else 1,
                item[1].cost,
                tuple(-p for p in item[1].profit),
                item[1].vertices,
            ),
        )
    )
    return EduResult(arc_cap, time_cap, tuple(reports), tuple(pool), pareto, ranking)


@dataclass(frozen=True)
class DiscrepancyRecord:
    """A reference-table value that disagrees with recomputation from the raw tables."""

    route_id: str
    field: str
    reference_value: Fraction
    recomputed_value: Fraction


FIELD_ORDER = ("theta1", "theta2", "theta3", "tau", "d")


def audit_reference_routes(space: DesignSpace | None = None) -> list[DiscrepancyRecord]:
    """Recompute each reference route's parameters and diff the printed values."""
    space = space or load_space()
    records = []
    for route_id, vertices, printed, _ in REFERENCE_ROUTES:
        profit, duration, cost = route_aggregates(space, vertices)
        recomputed = {
            "theta1": profit[0],
            "theta2": profit[1],
            "theta3": profit[2],
            "tau": duration,
            "d": cost,
        }
        for fieldname in FIELD_ORDER:
            reference = as_rational(printed[fieldname])
            if recomputed[fieldname] != reference:
                records.append(DiscrepancyRecord(route_id, fieldname, reference, recomputed[fieldname]))
    return records
