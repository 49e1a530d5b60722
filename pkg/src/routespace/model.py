"""Core domain model: criteria, vector estimates, design spaces and dominance.

All numeric estimates are exact rationals (`fractions.Fraction`), so dominance
checks never depend on floating-point rounding.  Every type here is an
immutable value object; the solver modules treat them as shareable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence, Union


class LengthMismatchError(ValueError):
    """Two vector operands disagree on dimension."""


class DisconnectedRouteError(ValueError):
    """A vertex sequence is not connected by arcs of the space."""


class InputError(ValueError):
    """An operation was handed data outside its preconditions."""


Rational = Union[int, str, Fraction]
Weight = Union[Fraction, tuple]  # scalar arc cost, or one value per cost component


def as_rational(value: Rational) -> Fraction:
    """Exact rational from an int, Fraction or string such as '7', '3/4', '0.25'.

    Binary floats are rejected on purpose: estimates must stay exact.
    """
    if isinstance(value, bool):
        raise InputError("booleans are not numeric estimates")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational literal: {value!r}") from exc
    raise InputError(f"estimates must be int, Fraction or string, got {type(value).__name__}")


def as_vector(values: Iterable[Rational]) -> tuple[Fraction, ...]:
    return tuple(as_rational(v) for v in values)


def as_weight(value) -> Weight:
    if isinstance(value, (list, tuple)):
        return as_vector(value)
    return as_rational(value)


class Sense(str, Enum):
    MAX = "maximize"
    MIN = "minimize"


@dataclass(frozen=True)
class CriterionSpec:
    name: str
    sense: Sense


def criterion(name: str, sense: str | Sense = Sense.MAX) -> CriterionSpec:
    return CriterionSpec(name, Sense(sense))


# --------------------------------------------------------------------------
# vertex kinds

@dataclass(frozen=True)
class Plain:
    """An ordinary vertex with no attached decision."""


PLAIN = Plain()


@dataclass(frozen=True)
class AlternativeRef:
    """One selectable option at a vertex; priority 1 is the best level."""

    id: str
    priority: int = 1


@dataclass(frozen=True)
class Alternatives:
    options: tuple[AlternativeRef, ...]


@dataclass(frozen=True, eq=False)
class Hierarchy:
    """Vertex backed by a tree of parts whose composition yields the options."""

    structure: object  # morphology.MorphStructure

    def __eq__(self, other):
        return isinstance(other, Hierarchy) and self.structure == other.structure


@dataclass(frozen=True, eq=False)
class TwoComponent:
    """Vertex pairing a synthesis step with a rule-based analysis step."""

    design: object  # morphology.MorphStructure
    analysis: object  # treatment.RuleSet

    def __eq__(self, other):
        return (
            isinstance(other, TwoComponent)
            and self.design == other.design
            and self.analysis == other.analysis
        )


VertexKind = Union[Plain, Alternatives, Hierarchy, TwoComponent]


@dataclass(frozen=True, eq=False)
class Vertex:
    id: str
    kind: VertexKind = PLAIN
    profit: tuple[Fraction, ...] = ()
    duration: Fraction = Fraction(0)
    labels: frozenset[str] = frozenset()

    def __eq__(self, other):
        if not isinstance(other, Vertex):
            return NotImplemented
        return (
            self.id == other.id
            and self.kind == other.kind
            and self.profit == other.profit
            and self.duration == other.duration
            and self.labels == other.labels
        )


def vertex(
    vid: str,
    profit: Iterable[Rational] = (),
    duration: Rational = 0,
    kind: VertexKind = PLAIN,
    labels: Iterable[str] = (),
) -> Vertex:
    return Vertex(vid, kind, as_vector(profit), as_rational(duration), frozenset(labels))


@dataclass(frozen=True)
class Arc:
    tail: str
    head: str
    weight: Weight = Fraction(0)


def arc(tail: str, head: str, weight=0) -> Arc:
    return Arc(tail, head, as_weight(weight))


@dataclass(frozen=True, eq=False)
class DesignSpace:
    """Weighted digraph with typed vertices, origin set and goal set."""

    vertices: tuple[Vertex, ...]
    arcs: tuple[Arc, ...]
    origins: frozenset[str]
    goals: frozenset[str]
    criteria: tuple[CriterionSpec, ...] = ()

    @cached_property
    def by_id(self) -> dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def out(self) -> dict[str, tuple[Arc, ...]]:
        table: dict[str, list[Arc]] = {v.id: [] for v in self.vertices}
        for a in self.arcs:
            table.setdefault(a.tail, []).append(a)
        return {tail: tuple(sorted(rest, key=lambda a: a.head)) for tail, rest in table.items()}

    @cached_property
    def arc_map(self) -> dict[tuple[str, str], Arc]:
        return {(a.tail, a.head): a for a in self.arcs}

    def vertex(self, vid: str) -> Vertex:
        try:
            return self.by_id[vid]
        except KeyError:
            raise KeyError(f"no vertex {vid!r} in space") from None

    def arc_between(self, tail: str, head: str) -> Arc | None:
        return self.arc_map.get((tail, head))

    def __eq__(self, other):
        if not isinstance(other, DesignSpace):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.arcs == other.arcs
            and self.origins == other.origins
            and self.goals == other.goals
            and self.criteria == other.criteria
        )


def make_space(
    vertices: Iterable[Vertex],
    arcs: Iterable[Arc],
    origins: Iterable[str],
    goals: Iterable[str],
    criteria: Iterable[CriterionSpec] = (),
) -> DesignSpace:
    return DesignSpace(tuple(vertices), tuple(arcs), frozenset(origins), frozenset(goals), tuple(criteria))


# --------------------------------------------------------------------------
# routes

@dataclass(frozen=True)
class Route:
    """A vertex sequence with its aggregate estimates.

    `cost` sums the traversed arc weights, `profit` and `duration` sum the
    visited vertices excluding the first one (the starting situation is
    already held, only movements away from it are scored).
    """

    vertices: tuple[str, ...]
    cost: Weight = Fraction(0)
    profit: tuple[Fraction, ...] = ()
    duration: Fraction = Fraction(0)
    walk: bool = False


@dataclass(frozen=True, eq=False)
class ResolvedRoute:
    """A route plus one chosen alternative per non-plain vertex."""

    route: Route
    choice: Mapping[str, str]
    details: Mapping[str, object] = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, ResolvedRoute):
            return NotImplemented
        return (
            self.route == other.route
            and dict(self.choice) == dict(other.choice)
            and dict(self.details) == dict(other.details)
        )


def route_aggregates(space: DesignSpace, vertices: Sequence[str]) -> tuple[tuple[Fraction, ...], Fraction, Weight]:
    """Return (profit vector, duration, arc cost) for a connected vertex sequence.

    Profit and duration exclude the first vertex; cost sums every traversed
    arc.  Raises DisconnectedRouteError when a consecutive pair is not an arc.
    """
    if not vertices:
        raise DisconnectedRouteError("empty vertex sequence")
    for vid in vertices:
        space.vertex(vid)
    dim = len(space.criteria)
    profit = [Fraction(0)] * dim
    duration = Fraction(0)
    weights = []
    for prev, cur in zip(vertices, vertices[1:]):
        a = space.arc_between(prev, cur)
        if a is None:
            raise DisconnectedRouteError(f"no arc {prev}->{cur}")
        weights.append(a.weight)
    for vid in vertices[1:]:
        v = space.vertex(vid)
        if len(v.profit) != dim:
            raise LengthMismatchError(f"vertex {vid} profit has length {len(v.profit)}, criteria {dim}")
        for i, value in enumerate(v.profit):
            profit[i] += value
        duration += v.duration
    return tuple(profit), duration, _sum_weights(weights)


def _sum_weights(weights: Sequence[Weight]) -> Weight:
    if not weights:
        return Fraction(0)
    if any(isinstance(w, tuple) for w in weights):
        if not all(isinstance(w, tuple) for w in weights):
            raise InputError("mixing scalar and vector arc weights along one route")
        dim = len(weights[0])
        if any(len(w) != dim for w in weights):
            raise LengthMismatchError("vector arc weights of different dimension")
        return tuple(sum(col) for col in zip(*weights))
    total = Fraction(0)
    for w in weights:
        total += w
    return total


def build_route(space: DesignSpace, vertices: Sequence[str], walk: bool = False) -> Route:
    if not walk and len(set(vertices)) != len(vertices):
        raise InputError(f"route revisits a vertex: {vertices}")
    profit, duration, cost = route_aggregates(space, vertices)
    return Route(tuple(vertices), cost, profit, duration, walk)


def route_order_key(vertices: Sequence[str], cost) -> tuple:
    """Deterministic tie-break: cost, then fewer arcs, then vertex ids."""
    return (cost, len(vertices), tuple(vertices))


# --------------------------------------------------------------------------
# dominance

def dominates(a: Sequence[Fraction], b: Sequence[Fraction], criteria: Sequence[CriterionSpec]) -> bool:
    """True iff `a` is at least as good as `b` everywhere and better somewhere."""
    if len(a) != len(b) or len(a) != len(criteria):
        raise LengthMismatchError(f"vector lengths {len(a)}, {len(b)} vs {len(criteria)} criteria")
    strict = False
    for x, y, spec in zip(a, b, criteria):
        if spec.sense is Sense.MAX:
            if x < y:
                return False
            strict = strict or x > y
        else:
            if x > y:
                return False
            strict = strict or x < y
    return strict


def pareto_filter(items: Sequence, criteria: Sequence[CriterionSpec], key: Callable | None = None) -> list:
    """Non-dominated members of `items`, input order preserved.

    Equal vectors never dominate each other, so duplicates all survive.
    """
    vec = key if key is not None else (lambda item: item)
    vectors = [tuple(vec(item)) for item in items]
    kept = []
    for i, item in enumerate(items):
        if any(dominates(vectors[j], vectors[i], criteria) for j in range(len(items)) if j != i):
            continue
        kept.append(item)
    return kept


@dataclass(frozen=True)
class SystemQuality:
    """Composite excellence vector: minimum pairwise compatibility plus the
    count of chosen alternatives at each priority level (index 0 = best)."""

    w: int
    counts: tuple[int, ...]

    def __str__(self):
        return f"({self.w};{','.join(str(c) for c in self.counts)})"


def quality_dominates(n1: SystemQuality, n2: SystemQuality) -> bool:
    """Dominance over (w; n): better-or-equal w and cumulative priority counts,
    strictly better somewhere.

    Cumulative counts mean "at least as many members at every priority prefix",
    the standard ordinal reading of the n-vector.
    """
    if len(n1.counts) != len(n2.counts):
        raise LengthMismatchError(f"priority vectors of length {len(n1.counts)} vs {len(n2.counts)}")
    if n1.w < n2.w:
        return False
    strict = n1.w > n2.w
    acc1 = acc2 = 0
    for c1, c2 in zip(n1.counts, n2.counts):
        acc1 += c1
        acc2 += c2
        if acc1 < acc2:
            return False
        strict = strict or acc1 > acc2
    return strict


def quality_pareto(items: Sequence, key: Callable | None = None) -> list:
    """Non-dominated members under quality_dominates, input order preserved."""
    get = key if key is not None else (lambda item: item)
    qualities = [get(item) for item in items]
    kept = []
    for i, item in enumerate(items):
        if any(quality_dominates(qualities[j], qualities[i]) for j in range(len(items)) if j != i):
            continue
        kept.append(item)
    return kept


# --------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class Violation:
    element: str
    message: str

    def __str__(self):
        return f"{self.element}: {self.message}"


def unreachable_vertices(space: DesignSpace) -> frozenset[str]:
    """Vertices no origin can reach.  Advisory: not part of validate_space."""
    frontier = [vid for vid in space.origins if vid in space.by_id]
    seen = set(frontier)
    while frontier:
        vid = frontier.pop()
        for a in space.out.get(vid, ()):
            if a.head not in seen:
                seen.add(a.head)
                frontier.append(a.head)
    return frozenset(v.id for v in space.vertices if v.id not in seen)


def validate_space(space: DesignSpace) -> list[Violation]:
    """Invariant check; returns one violation per offending element."""
    out: list[Violation] = []
    names = [c.name for c in space.criteria]
    if len(set(names)) != len(names):
        out.append(Violation("criteria", "criterion names are not unique"))
    seen_ids = set()
    for v in space.vertices:
        if v.id in seen_ids:
            out.append(Violation(f"vertex {v.id}", "duplicate vertex id"))
        seen_ids.add(v.id)
        if len(v.profit) != len(space.criteria):
            out.append(Violation(f"vertex {v.id}", f"profit has {len(v.profit)} values, criteria registry has {len(space.criteria)}"))
        if v.duration < 0:
            out.append(Violation(f"vertex {v.id}", f"negative duration {v.duration}"))
        if isinstance(v.kind, Alternatives):
            if not v.kind.options:
                out.append(Violation(f"vertex {v.id}", "alternatives list is empty"))
            opt_ids = [o.id for o in v.kind.options]
            if len(set(opt_ids)) != len(opt_ids):
                out.append(Violation(f"vertex {v.id}", "duplicate alternative ids"))
            for o in v.kind.options:
                if o.priority < 1:
                    out.append(Violation(f"vertex {v.id}", f"alternative {o.id} priority {o.priority} < 1"))
        elif isinstance(v.kind, Hierarchy):
            if v.kind.structure is None:
                out.append(Violation(f"vertex {v.id}", "hierarchy vertex without structure"))
        elif isinstance(v.kind, TwoComponent):
            if v.kind.design is None:
                out.append(Violation(f"vertex {v.id}", "two-component vertex without design structure"))
            if v.kind.analysis is None:
                out.append(Violation(f"vertex {v.id}", "two-component vertex without analysis rules"))
    seen_arcs = set()
    vector_dim = None
    for a in space.arcs:
        name = f"arc {a.tail}->{a.head}"
        if a.tail not in seen_ids:
            out.append(Violation(name, f"tail {a.tail} is not a vertex"))
        if a.head not in seen_ids:
            out.append(Violation(name, f"head {a.head} is not a vertex"))
        if (a.tail, a.head) in seen_arcs:
            out.append(Violation(name, "duplicate arc"))
        seen_arcs.add((a.tail, a.head))
        if isinstance(a.weight, tuple):
            if vector_dim is None:
                vector_dim = len(a.weight)
            elif len(a.weight) != vector_dim:
                out.append(Violation(name, f"vector weight dimension {len(a.weight)} != {vector_dim}"))
            if any(w < 0 for w in a.weight):
                out.append(Violation(name, f"negative weight component in {a.weight}"))
        elif a.weight < 0:
            out.append(Violation(name, f"negative weight {a.weight}"))
    if not space.origins:
        out.append(Violation("origins", "origin set is empty"))
    if not space.goals:
        out.append(Violation("goals", "goal set is empty"))
    for vid in sorted(space.origins):
        if vid not in seen_ids:
            out.append(Violation("origins", f"origin {vid} is not a vertex"))
    for vid in sorted(space.goals):
        if vid not in seen_ids:
            out.append(Violation("goals", f"goal {vid} is not a vertex"))
    return out
