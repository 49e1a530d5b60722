"""Combinatorial route/trajectory decision making over design/solving spaces.

Digraphs whose vertices may carry design alternatives, hierarchies of
alternatives, or paired design/analysis components; solvers for scalar and
multicriteria shortest paths, exact orienteering, morphological synthesis,
multistage scenario planning, and rule-driven treatment walks.
"""

from .model import (
    Alternatives,
    AlternativeRef,
    Arc,
    CriterionSpec,
    DesignSpace,
    DisconnectedRouteError,
    Hierarchy,
    InputError,
    LengthMismatchError,
    PLAIN,
    Plain,
    ResolvedRoute,
    Route,
    Sense,
    SystemQuality,
    TwoComponent,
    Vertex,
    Violation,
    arc,
    as_rational,
    as_vector,
    build_route,
    criterion,
    dominates,
    make_space,
    pareto_filter,
    quality_dominates,
    quality_pareto,
    route_aggregates,
    unreachable_vertices,
    validate_space,
    vertex,
)
from .morphology import (
    CompatibilityTable,
    CompositeDA,
    CompositePart,
    DesignAlternative,
    EmptySynthesisError,
    LeafPart,
    MorphStructure,
    synthesize_hierarchical,
    synthesize_part,
    system_quality,
    validate_structure,
)
from .routing import (
    InfeasibleError,
    NoFeasibleRouteError,
    OrienteeringInstance,
    ReplanDecision,
    ReplanState,
    k_shortest_paths,
    multi_goal_shortest,
    multicriteria_shortest,
    orienteering_exact,
    orienteering_multiobjective,
    replan_on_change,
    shortest_path,
)
from .trajectory import (
    Checkpoint,
    CoordinationReport,
    IncompatibleResolutionError,
    LayeredPlan,
    MultistageResult,
    Scenario,
    Stage,
    TrajectoryOption,
    compose_layered_routes,
    coordinate_multidomain,
    extend_digraph,
    multistage_synthesize,
    strategy1_global_route,
    strategy2_solve,
)
from .treatment import (
    AnalysisPoint,
    DesignPoint,
    OutcomeScript,
    Rule,
    RuleSet,
    TreatmentScheme,
    UnknownOutcomeError,
    WalkResult,
    design_at_point,
    enumerate_trajectories,
    plan_walk,
    scripted_selector,
    validate_scheme,
)

__version__ = "0.1.0"
