"""Hierarchical morphological design synthesis.

A system is a tree of parts.  Leaves carry design alternatives with ordinal
priorities (1 = best); each internal node carries a pairwise compatibility
table over its children's offerings and composes one alternative per child.
A composite is scored (w; n1..nk): w is the minimum pairwise compatibility
inside it, n_r counts chosen members of priority r.  Zero compatibility
forbids joint selection, so only w >= 1 composites are ever emitted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .model import InputError, SystemQuality, quality_pareto


class EmptySynthesisError(Exception):
    """A node admits no compatible composition at all."""

    def __init__(self, node: str):
        super().__init__(f"no feasible composite at node {node!r}")
        self.node = node


@dataclass(frozen=True)
class DesignAlternative:
    id: str
    part: str
    priority: int = 1


@dataclass(frozen=True, eq=False)
class CompatibilityTable:
    """Symmetric ordinal compatibility over pairs of member ids.

    Missing pairs read as 0 (forbidden); values run 0..scale_max where
    scale_max is the best level.
    """

    pairs: Mapping[tuple[str, str], int]
    scale_max: int = 3

    @staticmethod
    def build(entries: Iterable[tuple[str, str, int]], scale_max: int = 3) -> "CompatibilityTable":
        table: dict[tuple[str, str], int] = {}
        for a, b, w in entries:
            if a == b:
                raise InputError(f"compatibility of {a!r} with itself is meaningless")
            if not 0 <= w <= scale_max:
                raise InputError(f"compatibility {w} for ({a},{b}) outside 0..{scale_max}")
            key = (a, b) if a <= b else (b, a)
            if key in table and table[key] != w:
                raise InputError(f"conflicting compatibility for pair {key}: {table[key]} vs {w}")
            table[key] = w
        return CompatibilityTable(table, scale_max)

    def get(self, a: str, b: str) -> int:
        key = (a, b) if a <= b else (b, a)
        return self.pairs.get(key, 0)

    def __eq__(self, other):
        if not isinstance(other, CompatibilityTable):
            return NotImplemented
        return dict(self.pairs) == dict(other.pairs) and self.scale_max == other.scale_max


EMPTY_TABLE = CompatibilityTable({})


@dataclass(frozen=True)
class LeafPart:
    id: str
    alternatives: tuple[DesignAlternative, ...]


@dataclass(frozen=True, eq=False)
class CompositePart:
    """Internal node: composes one offering per child.

    `labels` names the node's Pareto composites in enumeration order, so a
    parent's compatibility table can refer to them; `repricing` assigns those
    labels explicit priorities at the parent level (default 1 for every
    Pareto member).
    """

    id: str
    children: tuple["Part", ...]
    table: CompatibilityTable = EMPTY_TABLE
    labels: tuple[str, ...] | None = None
    repricing: Mapping[str, int] = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, CompositePart):
            return NotImplemented
        return (
            self.id == other.id
            and self.children == other.children
            and self.table == other.table
            and self.labels == other.labels
            and dict(self.repricing) == dict(other.repricing)
        )


Part = Union[LeafPart, CompositePart]


@dataclass(frozen=True, eq=False)
class MorphStructure:
    """Tree-like system model: the synthesis input."""

    root: Part
    k: int = 3
    scale_max: int = 3

    def __eq__(self, other):
        if not isinstance(other, MorphStructure):
            return NotImplemented
        return self.root == other.root and self.k == other.k and self.scale_max == other.scale_max


@dataclass(frozen=True, eq=False)
class CompositeDA:
    """One chosen alternative per part, flattened to leaf level."""

    label: str
    choice: Mapping[str, str]  # leaf part id -> chosen alternative id
    components: tuple[str, ...]  # direct constituents, in child order
    quality: SystemQuality

    def __eq__(self, other):
        if not isinstance(other, CompositeDA):
            return NotImplemented
        return (
            self.label == other.label
            and dict(self.choice) == dict(other.choice)
            and self.components == other.components
            and self.quality == other.quality
        )


def validate_structure(structure: MorphStructure) -> list[str]:
    """Invariant check; returns one message per offending element."""
    problems: list[str] = []
    seen: set[str] = set()

    def walk(part: Part):
        if part.id in seen:
            problems.append(f"part {part.id}: duplicate part id")
        seen.add(part.id)
        if isinstance(part, LeafPart):
            if not part.alternatives:
                problems.append(f"part {part.id}: leaf without alternatives")
            ids = [da.id for da in part.alternatives]
            if len(set(ids)) != len(ids):
                problems.append(f"part {part.id}: duplicate alternative ids")
            for da in part.alternatives:
                if not 1 <= da.priority <= structure.k:
                    problems.append(f"alternative {da.id}: priority {da.priority} outside 1..{structure.k}")
        else:
            if not part.children:
                problems.append(f"part {part.id}: internal node without children")
            for w in part.table.pairs.values():
                if not 0 <= w <= structure.scale_max:
                    problems.append(f"part {part.id}: compatibility {w} outside 0..{structure.scale_max}")
            for child in part.children:
                walk(child)

    walk(structure.root)
    return problems


def system_quality(
    assignment: Sequence[DesignAlternative],
    table: CompatibilityTable,
    k: int,
    scale_max: int,
) -> SystemQuality:
    """Score one alternative per part: minimum pairwise compatibility and
    priority counts.  A single-part composite has no pairs; its w is the best
    level so that the (vacuous) compatibility never disqualifies it."""
    if len({da.part for da in assignment}) != len(assignment):
        raise InputError("assignment must pick exactly one alternative per part")
    w = scale_max
    for left, right in itertools.combinations(assignment, 2):
        w = min(w, table.get(left.id, right.id))
    counts = [0] * k
    for da in assignment:
        counts[da.priority - 1] += 1
    return SystemQuality(w, tuple(counts))


def synthesize_part(
    offers: Sequence[tuple[str, Sequence[DesignAlternative]]],
    table: CompatibilityTable,
    k: int,
    scale_max: int,
) -> list[tuple[tuple[DesignAlternative, ...], SystemQuality]]:
    """Compose one offering per child and keep the non-dominated composites.

    Children are enumerated sorted by part id and alternatives by id, and the
    output preserves that order, so results are reproducible.  Composites
    with any zero pairwise compatibility are dropped; the result may be empty.
    """
    ordered = sorted(offers, key=lambda item: item[0])
    pools = [sorted(alts, key=lambda da: da.id) for _, alts in ordered]
    if any(not pool for pool in pools):
        return []
    scored = []
    for combo in itertools.product(*pools):
        quality = system_quality(combo, table, k, scale_max)
        if quality.w < 1:
            continue
        scored.append((combo, quality))
    return quality_pareto(scored, key=lambda item: item[1])


def synthesize_hierarchical(structure: MorphStructure) -> list[CompositeDA]:
    """Bottom-up synthesis over the whole tree.

    Leaves pass their alternatives through unchanged; every internal node
    composes its children's Pareto offerings, re-priced per the node data
    (default: every Pareto member counts as priority 1).  The root output is
    flattened to one chosen alternative per leaf part.  Raises
    EmptySynthesisError naming the first node whose composition dies out.
    """
    return _synthesize_node(structure.root, structure)


def _synthesize_node(part: Part, structure: MorphStructure) -> list[CompositeDA]:
    if isinstance(part, LeafPart):
        out = []
        for da in sorted(part.alternatives, key=lambda d: d.id):
            quality = SystemQuality(structure.scale_max, _priority_counts([da.priority], structure.k))
            out.append(CompositeDA(da.id, {part.id: da.id}, (da.id,), quality))
        return out

    offers: list[tuple[str, list[DesignAlternative]]] = []
    by_member: dict[str, CompositeDA] = {}
    for child in part.children:
        if isinstance(child, LeafPart):
            pool = list(child.alternatives)
            for da in child.alternatives:
                by_member[da.id] = CompositeDA(
                    da.id,
                    {child.id: da.id},
                    (da.id,),
                    SystemQuality(structure.scale_max, _priority_counts([da.priority], structure.k)),
                )
        else:
            composites = _synthesize_node(child, structure)
            pool = []
            for comp in composites:
                priority = child.repricing.get(comp.label, 1) if child.repricing else 1
                pool.append(DesignAlternative(comp.label, child.id, priority))
                by_member[comp.label] = comp
        offers.append((child.id, pool))

    combos = synthesize_part(offers, part.table, structure.k, structure.scale_max)
    if not combos:
        raise EmptySynthesisError(part.id)
    if part.labels is not None and len(part.labels) != len(combos):
        raise InputError(
            f"node {part.id} declares {len(part.labels)} composite labels "
            f"but synthesis produced {len(combos)}"
        )
    out = []
    for index, (combo, quality) in enumerate(combos):
        label = part.labels[index] if part.labels is not None else f"{part.id}#{index + 1}"
        choice: dict[str, str] = {}
        for da in combo:
            choice.update(by_member[da.id].choice)
        out.append(CompositeDA(label, choice, tuple(da.id for da in combo), quality))
    return out


def _priority_counts(priorities: Iterable[int], k: int) -> tuple[int, ...]:
    counts = [0] * k
    for p in priorities:
        counts[p - 1] += 1
    return tuple(counts)
