"""Small bundled spaces demonstrating the two composite-route strategies."""

from __future__ import annotations

from ..model import DesignSpace, ResolvedRoute
from ..morphology import CompatibilityTable
from ..trajectory import strategy1_global_route, strategy2_solve
from .loaders import load, load_raw


def example1_space() -> DesignSpace:
    """Eight vertices, three pre-priced alternatives each."""
    return load("example1_space.json")


def example2_space() -> DesignSpace:
    """Five vertices, each backed by a one-part hierarchy of alternatives."""
    return load("example2_space.json")


def example3_space() -> DesignSpace:
    """The example-2 digraph with equal-priority alternatives, solved by extension."""
    return load("example3_space.json")


def space_compat_table(name: str) -> CompatibilityTable | None:
    """Optional alternative-compatibility table attached to a bundled space."""
    raw = load_raw(name).get("alternative_compatibility")
    if raw is None:
        return None
    return CompatibilityTable.build(
        [(a, b, w) for a, b, w in raw["pairs"]], raw.get("scale_max", 3)
    )


def example1_resolution() -> ResolvedRoute:
    space = example1_space()
    return strategy1_global_route(space, "mu1", "mu8")


def example2_resolution() -> ResolvedRoute:
    space = example2_space()
    return strategy1_global_route(space, "mu1", "mu5")


def example3_route() -> ResolvedRoute:
    space = example3_space()
    table = space_compat_table("example3_space.json")
    return strategy2_solve(space, origins=("mu1^1",), goals=("mu5^2",), table=table)
