"""Composite-route strategies, multistage scenarios, and coordination.

Two ways to route over spaces whose vertices carry alternatives: resolve a
global vertex route first and then pick alternatives along it, or extend the
digraph to (vertex, alternative) pairs and route over the extension.  On top
of that: multi-stage scenario synthesis, multi-domain checkpoint coordination
and two-layer route composition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .model import (
    Alternatives,
    AlternativeRef,
    Arc,
    DesignSpace,
    Hierarchy,
    InputError,
    Plain,
    ResolvedRoute,
    Route,
    SystemQuality,
    Vertex,
    build_route,
    make_space,
    quality_pareto,
)
from .morphology import (
    CompatibilityTable,
    CompositeDA,
    MorphStructure,
    synthesize_hierarchical,
)
from .routing import NoFeasibleRouteError, shortest_path


class IncompatibleResolutionError(Exception):
    """No compatible alternative assignment exists along the chosen route."""


BASE_TAG = "base="
ALT_TAG = "alt="


# --------------------------------------------------------------------------
# strategy 1: global route, then per-vertex selection

def strategy1_global_route(
    space: DesignSpace,
    origin: str,
    goal: str,
    table: CompatibilityTable | None = None,
) -> ResolvedRoute:
    """Route over vertices first, then choose one alternative per vertex.

    Selection minimises the summed priorities (1 is best) subject to nonzero
    compatibility between choices at consecutive vertices whenever a pairwise
    table is supplied.  The vertex route is never re-derived: if it cannot be
    resolved, IncompatibleResolutionError is raised.
    """
    route = shortest_path(space, origin, goal)
    if route is None:
        raise NoFeasibleRouteError(f"no route {origin}->{goal}")
    candidates: list[list[tuple[str, int] | None]] = []
    details: dict[str, CompositeDA] = {}
    per_vertex_composites: dict[str, dict[str, CompositeDA]] = {}
    for vid in route.vertices:
        kind = space.vertex(vid).kind
        if isinstance(kind, Plain):
            candidates.append([None])
        elif isinstance(kind, Alternatives):
            pool = sorted(kind.options, key=lambda o: o.id)
            candidates.append([(o.id, o.priority) for o in pool])
        elif isinstance(kind, Hierarchy):
            composites = synthesize_hierarchical(kind.structure)
            per_vertex_composites[vid] = {c.label: c for c in composites}
            candidates.append([(c.label, 1) for c in composites])
        else:
            raise InputError(f"vertex {vid} kind is not routable by the global-route strategy")

    assignment = _resolve_chain(route.vertices, candidates, table)
    if assignment is None:
        raise IncompatibleResolutionError(
            f"route {'>'.join(route.vertices)} admits no compatible alternative assignment"
        )
    choice: dict[str, str] = {}
    for vid, picked in zip(route.vertices, assignment):
        if picked is None:
            continue
        choice[vid] = picked
        if vid in per_vertex_composites:
            details[vid] = per_vertex_composites[vid][picked]
    return ResolvedRoute(route, choice, details)


def _resolve_chain(vertices, candidates, table):
    """Cheapest compatible selection along the route, by forward DP.

    States carry (priority sum, choice tuple) so that equal sums resolve to
    the lexicographically smallest choice ids.
    """
    states: dict[str | None, tuple[int, tuple[str | None, ...]]] = {}
    for option in candidates[0]:
        key = option[0] if option else None
        states[key] = (option[1] if option else 0, (key,))
    for pool in candidates[1:]:
        nxt: dict[str | None, tuple[int, tuple[str | None, ...]]] = {}
        for option in pool:
            opt_id = option[0] if option else None
            opt_cost = option[1] if option else 0
            for prev_id, (cost, path) in states.items():
                if table is not None and prev_id is not None and opt_id is not None:
                    if table.get(prev_id, opt_id) < 1:
                        continue
                entry = (cost + opt_cost, path + (opt_id,))
                if opt_id not in nxt or entry < nxt[opt_id]:
                    nxt[opt_id] = entry
        if not nxt:
            return None
        states = nxt
    _, best_path = min(states.values(), key=lambda item: (item[0], _lex(item[1])))
    return best_path


def _lex(path):
    return tuple("" if p is None else p for p in path)


# --------------------------------------------------------------------------
# strategy 2: extended digraph

def extended_id(vertex_id: str, index: int) -> str:
    return f"{vertex_id}^{index}"


def extend_digraph(
    space: DesignSpace,
    table: CompatibilityTable | None = None,
    surcharge=None,
) -> DesignSpace:
    """Extension whose vertices are (vertex, alternative) pairs.

    Vertex mu_i with alternatives j=1..q becomes mu_i^1..mu_i^q; plain
    vertices stay themselves.  An extended arc exists iff the base arc exists
    and the two alternatives are compatible (no table means every pair is).
    Extended arcs copy the base weight plus an optional per-pair surcharge.
    """
    variants: dict[str, list[tuple[str, AlternativeRef | None]]] = {}
    new_vertices: list[Vertex] = []
    for v in space.vertices:
        if isinstance(v.kind, Plain):
            variants[v.id] = [(v.id, None)]
            new_vertices.append(
                Vertex(v.id, Plain(), v.profit, v.duration, v.labels | {BASE_TAG + v.id})
            )
        elif isinstance(v.kind, Alternatives):
            pool = []
            for index, ref in enumerate(v.kind.options, start=1):
                ext = extended_id(v.id, index)
                pool.append((ext, ref))
                new_vertices.append(
                    Vertex(
                        ext,
                        Plain(),
                        v.profit,
                        v.duration,
                        v.labels | {BASE_TAG + v.id, ALT_TAG + ref.id},
                    )
                )
            variants[v.id] = pool
        else:
            raise InputError(f"vertex {v.id}: only plain/alternatives vertices can be extended")

    new_arcs: list[Arc] = []
    for a in space.arcs:
        for tail_ext, tail_ref in variants[a.tail]:
            for head_ext, head_ref in variants[a.head]:
                if table is not None and tail_ref is not None and head_ref is not None:
                    if table.get(tail_ref.id, head_ref.id) < 1:
                        continue
                weight = a.weight
                if surcharge is not None and tail_ref is not None and head_ref is not None:
                    weight = weight + surcharge(tail_ref, head_ref)
                new_arcs.append(Arc(tail_ext, head_ext, weight))

    origins = {ext for vid in space.origins for ext, _ in variants[vid]}
    goals = {ext for vid in space.goals for ext, _ in variants[vid]}
    return make_space(new_vertices, new_arcs, origins, goals, space.criteria)


def split_extended(space: DesignSpace, ext_id: str) -> tuple[str, str | None]:
    """Recover (base vertex, alternative id) from an extended vertex's tags."""
    v = space.vertex(ext_id)
    base = next((tag[len(BASE_TAG):] for tag in v.labels if tag.startswith(BASE_TAG)), ext_id)
    alt = next((tag[len(ALT_TAG):] for tag in v.labels if tag.startswith(ALT_TAG)), None)
    return base, alt


def strategy2_solve(
    space: DesignSpace,
    origins: Iterable[str] | None = None,
    goals: Iterable[str] | None = None,
    table: CompatibilityTable | None = None,
) -> ResolvedRoute:
    """Extend the digraph, route over the extension, map the result back.

    `origins`/`goals` select extended (vertex, alternative) ids; by default
    every pair derived from the base origin and goal sets competes, and the
    cheapest combination wins.
    """
    ext = extend_digraph(space, table)
    origin_set = sorted(origins) if origins is not None else sorted(ext.origins)
    goal_set = sorted(goals) if goals is not None else sorted(ext.goals)
    for vid in origin_set + goal_set:
        ext.vertex(vid)

    best: Route | None = None
    for o in origin_set:
        for g in goal_set:
            found = shortest_path(ext, o, g)
            if found is None:
                continue
            if best is None or (found.cost, len(found.vertices), found.vertices) < (
                best.cost,
                len(best.vertices),
                best.vertices,
            ):
                best = found
    if best is None:
        raise NoFeasibleRouteError("no extended origin reaches any extended goal")

    base_vertices = []
    choice: dict[str, str] = {}
    for ext_vid in best.vertices:
        base, alt = split_extended(ext, ext_vid)
        base_vertices.append(base)
        if alt is not None:
            choice[base] = alt
    return ResolvedRoute(build_route(space, base_vertices), choice)


# --------------------------------------------------------------------------
# multistage scenarios

@dataclass(frozen=True, eq=False)
class Stage:
    """One planning period: a system model plus stage-level priorities for
    its composites (used when comparing whole trajectories)."""

    id: str
    structure: MorphStructure
    priorities: Mapping[str, int] = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, Stage):
            return NotImplemented
        return (
            self.id == other.id
            and self.structure == other.structure
            and dict(self.priorities) == dict(other.priorities)
        )


@dataclass(frozen=True, eq=False)
class Scenario:
    """Ordered stages with compatibility between adjacent stages' composites."""

    stages: tuple[Stage, ...]
    links: tuple[CompatibilityTable, ...]
    k: int = 3
    scale_max: int = 3

    def __post_init__(self):
        if not self.stages:
            raise InputError("scenario needs at least one stage")
        if len(self.links) != len(self.stages) - 1:
            raise InputError(
                f"{len(self.stages)} stages need {len(self.stages) - 1} adjacent link tables, got {len(self.links)}"
            )

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        return (
            self.stages == other.stages
            and self.links == other.links
            and self.k == other.k
            and self.scale_max == other.scale_max
        )


@dataclass(frozen=True)
class TrajectoryOption:
    composites: tuple[CompositeDA, ...]
    quality: SystemQuality


@dataclass(frozen=True)
class MultistageResult:
    stage_sets: tuple[tuple[CompositeDA, ...], ...]
    trajectories: tuple[TrajectoryOption, ...]
    blocking: tuple[str, str] | None = None


def multistage_synthesize(scenario: Scenario) -> MultistageResult:
    """Per-stage synthesis, then the Pareto set of stage-composite sequences.

    A trajectory picks one composite per stage and is feasible when every
    adjacent pair has nonzero compatibility.  Its quality is (minimum adjacent
    compatibility; counts of stage-level priorities).  When nothing is
    feasible the result names the first blocking adjacent stage pair.
    """
    stage_sets = tuple(tuple(synthesize_hierarchical(st.structure)) for st in scenario.stages)

    if len(scenario.stages) == 1:
        options = tuple(
            TrajectoryOption((comp,), _trajectory_quality(scenario, (comp,)))
            for comp in stage_sets[0]
        )
        return MultistageResult(stage_sets, tuple(quality_pareto(options, key=lambda t: t.quality)))

    # forward reachability to localise an infeasibility
    reachable = list(stage_sets[0])
    blocking = None
    for i, link in enumerate(scenario.links):
        nxt = [
            comp
            for comp in stage_sets[i + 1]
            if any(link.get(prev.label, comp.label) >= 1 for prev in reachable)
        ]
        if not nxt:
            blocking = (scenario.stages[i].id, scenario.stages[i + 1].id)
            break
        reachable = nxt
    if blocking is not None:
        return MultistageResult(stage_sets, (), blocking)

    feasible: list[TrajectoryOption] = []
    for combo in itertools.product(*stage_sets):
        ok = all(
            scenario.links[i].get(combo[i].label, combo[i + 1].label) >= 1
            for i in range(len(combo) - 1)
        )
        if ok:
            feasible.append(TrajectoryOption(combo, _trajectory_quality(scenario, combo)))
    if not feasible:
        return MultistageResult(stage_sets, (), (scenario.stages[0].id, scenario.stages[1].id))
    return MultistageResult(stage_sets, tuple(quality_pareto(feasible, key=lambda t: t.quality)))


def _trajectory_quality(scenario: Scenario, combo: Sequence[CompositeDA]) -> SystemQuality:
    w = scenario.scale_max
    for i in range(len(combo) - 1):
        w = min(w, scenario.links[i].get(combo[i].label, combo[i + 1].label))
    counts = [0] * scenario.k
    for stage, comp in zip(scenario.stages, combo):
        priority = stage.priorities.get(comp.label, 1)
        if not 1 <= priority <= scenario.k:
            raise InputError(f"stage {stage.id} priority {priority} outside 1..{scenario.k}")
        counts[priority - 1] += 1
    return SystemQuality(w, tuple(counts))


# --------------------------------------------------------------------------
# multi-domain coordination

@dataclass(frozen=True, eq=False)
class Checkpoint:
    """A synchronization moment: which vertex each domain must have reached."""

    id: str
    required: Mapping[str, str]

    def __eq__(self, other):
        if not isinstance(other, Checkpoint):
            return NotImplemented
        return self.id == other.id and dict(self.required) == dict(other.required)


@dataclass(frozen=True)
class CoordinationIssue:
    domain: str
    checkpoint: str
    reason: str


@dataclass(frozen=True)
class CoordinationReport:
    satisfied: tuple[tuple[str, str], ...]
    violations: tuple[CoordinationIssue, ...]

    @property
    def feasible(self) -> bool:
        return not self.violations


def coordinate_multidomain(
    routes: Mapping[str, Sequence[str] | Route],
    checkpoints: Sequence[Checkpoint],
) -> CoordinationReport:
    """Check that each domain's route passes its synchronization vertices in
    checkpoint time order.  Violations are reported, never raised."""
    sequences = {
        domain: tuple(r.vertices) if isinstance(r, Route) else tuple(r)
        for domain, r in routes.items()
    }
    satisfied: list[tuple[str, str]] = []
    violations: list[CoordinationIssue] = []
    last_position: dict[str, int] = {domain: -1 for domain in sequences}
    for cp in checkpoints:
        for domain in sorted(cp.required):
            vertex_id = cp.required[domain]
            if domain not in sequences:
                violations.append(CoordinationIssue(domain, cp.id, "no route for domain"))
                continue
            seq = sequences[domain]
            if vertex_id not in seq:
                violations.append(CoordinationIssue(domain, cp.id, f"route misses {vertex_id}"))
                continue
            position = seq.index(vertex_id)
            if position <= last_position[domain]:
                violations.append(
                    CoordinationIssue(domain, cp.id, f"{vertex_id} visited out of checkpoint order")
                )
                continue
            last_position[domain] = position
            satisfied.append((domain, cp.id))
    return CoordinationReport(tuple(satisfied), tuple(violations))


# --------------------------------------------------------------------------
# two-layer route composition

@dataclass(frozen=True, eq=False)
class LayeredPlan:
    """Up-layer space plus per-domain spaces entered through gateway vertices.

    A gateway vertex exists in the up layer and in its domain; destinations
    are listed per domain.
    """

    up: DesignSpace
    domains: Mapping[str, DesignSpace]
    gateways: Mapping[str, str]  # gateway vertex id -> domain id
    destinations: Mapping[str, frozenset[str]]  # domain id -> destination set

    def __eq__(self, other):
        if not isinstance(other, LayeredPlan):
            return NotImplemented
        return (
            self.up == other.up
            and dict(self.domains) == dict(other.domains)
            and dict(self.gateways) == dict(other.gateways)
            and dict(self.destinations) == dict(other.destinations)
        )


def compose_layered_routes(plan: LayeredPlan, source: str) -> dict[str, Route | None]:
    """Cheapest source-to-destination route through any gateway of the
    destination's domain: up-layer leg plus domain leg, totals compared with
    the usual tie-break.  Unreachable destinations map to None."""
    for gw, domain in plan.gateways.items():
        if domain not in plan.domains:
            raise InputError(f"gateway {gw} names unknown domain {domain}")
        plan.up.vertex(gw)
        plan.domains[domain].vertex(gw)

    up_legs = {
        gw: shortest_path(plan.up, source, gw) for gw in sorted(plan.gateways)
    }
    result: dict[str, Route | None] = {}
    for domain_id in sorted(plan.destinations):
        domain = plan.domains[domain_id]
        gateways = sorted(gw for gw, d in plan.gateways.items() if d == domain_id)
        for dest in sorted(plan.destinations[domain_id]):
            best: tuple | None = None
            for gw in gateways:
                up_leg = up_legs[gw]
                if up_leg is None:
                    continue
                down_leg = shortest_path(domain, gw, dest)
                if down_leg is None:
                    continue
                vertices = up_leg.vertices + down_leg.vertices[1:]
                total = up_leg.cost + down_leg.cost
                key = (total, len(vertices), vertices)
                if best is None or key < best[0]:
                    best = (key, up_leg, down_leg, vertices, total)
            if best is None:
                result[dest] = None
                continue
            _, up_leg, down_leg, vertices, total = best
            if len(up_leg.profit) == len(down_leg.profit):
                profit = tuple(a + b for a, b in zip(up_leg.profit, down_leg.profit))
            else:
                profit = ()  # layers scored on different registries
            result[dest] = Route(vertices, total, profit, up_leg.duration + down_leg.duration)
    return result
