"""Path solvers over a design space.

Scalar solvers use nonnegative arc weights and break ties deterministically:
lower cost, then fewer arcs, then the lexicographically smallest vertex
sequence.  The orienteering solvers are exact searches sized for desk-scale
instances, not heuristics.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .model import (
    DesignSpace,
    InputError,
    Route,
    Sense,
    build_route,
    dominates,
    pareto_filter,
    CriterionSpec,
)


class InfeasibleError(Exception):
    """No admissible solution exists under the stated constraints."""


class NoFeasibleRouteError(Exception):
    """No candidate route can be reached or completed."""


def _require_scalar_weights(space: DesignSpace) -> None:
    for a in space.arcs:
        if isinstance(a.weight, tuple):
            raise InputError(f"arc {a.tail}->{a.head} carries a vector weight; scalar solver")
        if a.weight < 0:
            raise InputError(f"arc {a.tail}->{a.head} has negative weight {a.weight}")


def _search(
    space: DesignSpace,
    origin: str,
    target: str | None = None,
    banned_vertices: frozenset[str] = frozenset(),
    banned_arcs: frozenset[tuple[str, str]] = frozenset(),
) -> dict[str, tuple[Fraction, int, tuple[str, ...]]]:
    """Dijkstra labelled with (cost, arc count, vertex sequence).

    The label triple is a total order, so the settled label at each vertex is
    the deterministic tie-break winner.  Returns settled labels; stops early
    once `target` settles.
    """
    space.vertex(origin)
    if origin in banned_vertices:
        return {}
    start = (Fraction(0), 0, (origin,))
    heap = [start]
    settled: dict[str, tuple[Fraction, int, tuple[str, ...]]] = {}
    while heap:
        cost, narcs, path = heapq.heappop(heap)
        node = path[-1]
        if node in settled:
            continue
        settled[node] = (cost, narcs, path)
        if node == target:
            break
        for a in space.out.get(node, ()):
            if a.head in settled or a.head in banned_vertices:
                continue
            if (a.tail, a.head) in banned_arcs:
                continue
            heapq.heappush(heap, (cost + a.weight, narcs + 1, path + (a.head,)))
    return settled


def shortest_path(space: DesignSpace, origin: str, goal: str) -> Route | None:
    """Minimum-cost path, or None when the goal is unreachable."""
    _require_scalar_weights(space)
    space.vertex(goal)
    settled = _search(space, origin, goal)
    if goal not in settled:
        return None
    _, _, path = settled[goal]
    return build_route(space, path)


def multi_goal_shortest(space: DesignSpace, origin: str, goals: Iterable[str]) -> dict[str, Route | None]:
    """One-to-all shortest paths restricted to the goal set."""
    _require_scalar_weights(space)
    goal_list = sorted(set(goals))
    for g in goal_list:
        space.vertex(g)
    settled = _search(space, origin)
    result: dict[str, Route | None] = {}
    for g in goal_list:
        result[g] = build_route(space, settled[g][2]) if g in settled else None
    return result


def k_shortest_paths(space: DesignSpace, origin: str, goal: str, k: int) -> list[Route]:
    """The k lowest-cost simple paths by deviation (spur-node) enumeration."""
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    first = shortest_path(space, origin, goal)
    if first is None:
        return []
    accepted: list[tuple[Fraction, int, tuple[str, ...]]] = [(first.cost, len(first.vertices), first.vertices)]
    candidates: list[tuple[Fraction, int, tuple[str, ...]]] = []
    while len(accepted) < k:
        _, _, last_path = accepted[-1]
        for i in range(len(last_path) - 1):
            spur = last_path[i]
            root = last_path[: i + 1]
            banned_arcs = set()
            for _, _, path in accepted:
                if path[: i + 1] == root and len(path) > i + 1:
                    banned_arcs.add((path[i], path[i + 1]))
            banned_vertices = frozenset(root[:-1])
            settled = _search(space, spur, goal, banned_vertices, frozenset(banned_arcs))
            if goal not in settled:
                continue
            _, _, spur_path = settled[goal]
            total = root[:-1] + spur_path
            root_cost = Fraction(0)
            for a, b in zip(root, root[1:]):
                root_cost += space.arc_between(a, b).weight
            entry = (root_cost + settled[goal][0], len(total), total)
            if entry not in candidates and all(total != p for _, _, p in accepted):
                heapq.heappush(candidates, entry)
        if not candidates:
            break
        accepted.append(heapq.heappop(candidates))
    return [build_route(space, path) for _, _, path in accepted[:k]]


# --------------------------------------------------------------------------
# multicriteria shortest path

def _as_cost_vector(weight) -> tuple[Fraction, ...]:
    return weight if isinstance(weight, tuple) else (weight,)


def multicriteria_shortest(space: DesignSpace, origin: str, goal: str) -> list[Route]:
    """Pareto set of path cost vectors with one representative path each.

    Label-correcting search; labels carry (cost vector, arc count, path) and
    are pruned by strict dominance.  All cost components are minimised.
    """
    space.vertex(origin)
    space.vertex(goal)
    dims = {len(_as_cost_vector(a.weight)) for a in space.arcs}
    if len(dims) > 1:
        raise InputError(f"inconsistent arc weight dimensions {sorted(dims)}")
    dim = dims.pop() if dims else 1
    min_criteria = tuple(CriterionSpec(f"c{i}", Sense.MIN) for i in range(dim))

    zero = tuple(Fraction(0) for _ in range(dim))
    labels: dict[str, list[tuple[tuple[Fraction, ...], int, tuple[str, ...]]]] = {origin: [(zero, 0, (origin,))]}
    queue = deque([(origin, (zero, 0, (origin,)))])
    while queue:
        node, label = queue.popleft()
        if label not in labels.get(node, ()):
            continue  # superseded since being queued
        cost, narcs, path = label
        for a in space.out.get(node, ()):
            if a.head in path:
                continue
            step = _as_cost_vector(a.weight)
            new_cost = tuple(c + s for c, s in zip(cost, step))
            new_label = (new_cost, narcs + 1, path + (a.head,))
            bucket = labels.setdefault(a.head, [])
            if _admit(bucket, new_label, min_criteria):
                queue.append((a.head, new_label))
    found = labels.get(goal, [])
    found.sort(key=lambda lab: (lab[0], lab[1], lab[2]))
    routes = []
    for cost, _, path in found:
        r = build_route(space, path)
        routes.append(Route(r.vertices, cost, r.profit, r.duration))
    return routes


def _admit(bucket, label, criteria) -> bool:
    cost, narcs, path = label
    for other_cost, other_narcs, other_path in bucket:
        if other_cost == cost:
            if (other_narcs, other_path) <= (narcs, path):
                return False
        elif dominates(other_cost, cost, criteria):
            return False
    bucket[:] = [
        other
        for other in bucket
        if not (other[0] == cost and (narcs, path) < (other[1], other[2]))
        and not dominates(cost, other[0], criteria)
    ]
    bucket.append(label)
    return True


# --------------------------------------------------------------------------
# replanning framework

@dataclass(frozen=True)
class ReplanState:
    """Mid-execution situation: what was already traversed, which candidate
    routes were prepared up front, and the space with updated weights."""

    prefix: tuple[str, ...]
    candidates: tuple[Route, ...]
    space: DesignSpace
    active: int = 0

    @property
    def current(self) -> str:
        return self.prefix[-1]


@dataclass(frozen=True)
class ReplanDecision:
    candidate_index: int
    connector: Route
    resume: Route
    total_cost: Fraction


def replan_on_change(state: ReplanState) -> ReplanDecision:
    """Re-cost every candidate under the updated space and pick the cheapest
    way to continue: a connector from the current vertex onto the candidate
    plus the candidate's remaining portion.  Ties keep the active route.
    """
    if not state.prefix:
        raise InputError("empty committed prefix")
    if not state.candidates:
        raise NoFeasibleRouteError("no candidate routes to evaluate")
    if not 0 <= state.active < len(state.candidates):
        raise InputError(f"active index {state.active} out of range")
    _require_scalar_weights(state.space)
    current = state.current
    settled = _search(state.space, current)

    best: dict[int, tuple[Fraction, Route, Route]] = {}
    for idx, cand in enumerate(state.candidates):
        option = None
        # joining at the candidate's final vertex would leave nothing of the
        # candidate to execute (and every candidate would tie at the plain
        # current-to-goal distance), so the join must precede it
        for j, vid in enumerate(cand.vertices[:-1]):
            if vid not in settled:
                continue
            tail = cand.vertices[j:]
            tail_cost = Fraction(0)
            ok = True
            for a, b in zip(tail, tail[1:]):
                arc_ab = state.space.arc_between(a, b)
                if arc_ab is None:
                    ok = False
                    break
                tail_cost += arc_ab.weight
            if not ok:
                continue
            conn_cost, _, conn_path = settled[vid]
            resume_path = conn_path + tail[1:]
            if len(set(resume_path)) != len(resume_path):
                continue  # connector would revisit part of the tail
            total = conn_cost + tail_cost
            key = (total, len(resume_path), resume_path)
            if option is None or key < option[0]:
                option = (key, conn_path, resume_path)
        if option is not None:
            (total, _, _), conn_path, resume_path = option
            best[idx] = (total, build_route(state.space, conn_path), build_route(state.space, resume_path))
    if not best:
        raise NoFeasibleRouteError(f"no candidate is reachable from {current}")
    minimum = min(total for total, _, _ in best.values())
    if state.active in best and best[state.active][0] == minimum:
        chosen = state.active
    else:
        chosen = min(
            (idx for idx, (total, _, _) in best.items() if total == minimum),
            key=lambda idx: (len(best[idx][2].vertices), best[idx][2].vertices, idx),
        )
    total, connector, resume = best[chosen]
    return ReplanDecision(chosen, connector, resume, total)


# --------------------------------------------------------------------------
# orienteering

@dataclass(frozen=True)
class OrienteeringInstance:
    """Budgeted start-to-end profit collection.

    Exactly one of `budget` (cap on total arc cost) or `arc_cap` (cap on every
    single arc, combined with `time_cap` on summed vertex durations) applies.
    """

    space: DesignSpace
    start: str
    end: str
    budget: Fraction | None = None
    arc_cap: Fraction | None = None
    time_cap: Fraction | None = None
    node_limit: int = 24

    def __post_init__(self):
        if self.start == self.end:
            raise InputError("start and end must differ")
        if (self.budget is None) == (self.arc_cap is None):
            raise InputError("exactly one of budget or arc_cap must be given")
        for cap in (self.budget, self.arc_cap, self.time_cap):
            if cap is not None and cap < 0:
                raise InputError(f"negative cap {cap}")


def orienteering_exact(inst: OrienteeringInstance) -> tuple[Route, Fraction]:
    """Exact single-objective orienteering by depth-first branch and bound.

    Maximises the profit collected over the visited vertices (the start is
    excluded, as elsewhere) subject to total arc cost <= budget.  The bound
    adds every still-collectable profit, which is admissible.
    """
    space = inst.space
    if inst.budget is None:
        raise InputError("orienteering_exact needs the total-budget variant")
    if len(space.criteria) != 1:
        raise InputError("orienteering_exact needs a single profit criterion")
    if len(space.vertices) > inst.node_limit:
        raise InputError(f"{len(space.vertices)} vertices exceed the exact-search guard ({inst.node_limit})")
    _require_scalar_weights(space)
    space.vertex(inst.start)
    space.vertex(inst.end)

    theta = {v.id: (v.profit[0] if v.profit else Fraction(0)) for v in space.vertices}
    total_remaining = sum(theta.values(), Fraction(0)) - theta[inst.start]

    best: list[tuple] = []  # [(-score, cost, narcs, path)]

    def consider(score, cost, path):
        entry = (-score, cost, len(path), path)
        if not best or entry < best[0]:
            best[:] = [entry]

    def extend(node, cost, duration, score, remaining, path, visited):
        if best and score + remaining < -best[0][0]:
            return
        for a in space.out.get(node, ()):
            if a.head in visited:
                continue
            new_cost = cost + a.weight
            if new_cost > inst.budget:
                continue
            new_duration = duration + space.vertex(a.head).duration
            if inst.time_cap is not None and new_duration > inst.time_cap:
                continue
            gain = theta[a.head]
            if a.head == inst.end:
                consider(score + gain, new_cost, path + (a.head,))
                continue
            extend(
                a.head,
                new_cost,
                new_duration,
                score + gain,
                remaining - gain,
                path + (a.head,),
                visited | {a.head},
            )

    extend(inst.start, Fraction(0), Fraction(0), Fraction(0), total_remaining, (inst.start,), {inst.start})
    if not best:
        raise InfeasibleError(f"budget {inst.budget} admits no {inst.start}->{inst.end} path")
    neg_score, cost, _, path = best[0]
    return build_route(space, path), -neg_score


def orienteering_multiobjective(inst: OrienteeringInstance) -> list[Route]:
    """Pareto set over (profit components maximised, route cost minimised)
    among simple start-to-end paths whose every arc respects the arc cap and
    whose summed vertex durations respect the time cap."""
    space = inst.space
    if inst.arc_cap is None:
        raise InputError("orienteering_multiobjective needs the arc-cap variant")
    for spec in space.criteria:
        if spec.sense is not Sense.MAX:
            raise InputError("profit criteria must all be maximised")
    _require_scalar_weights(space)
    space.vertex(inst.start)
    space.vertex(inst.end)
    time_cap = inst.time_cap

    feasible: list[Route] = []

    def extend(node, duration, path, visited):
        for a in space.out.get(node, ()):
            if a.head in visited or a.weight > inst.arc_cap:
                continue
            new_duration = duration + space.vertex(a.head).duration
            if time_cap is not None and new_duration > time_cap:
                continue
            if a.head == inst.end:
                feasible.append(build_route(space, path + (a.head,)))
                continue
            extend(a.head, new_duration, path + (a.head,), visited | {a.head})

    extend(inst.start, Fraction(0), (inst.start,), {inst.start})
    criteria = tuple(space.criteria) + (CriterionSpec("route_cost", Sense.MIN),)
    return pareto_filter(feasible, criteria, key=lambda r: r.profit + (r.cost,))
