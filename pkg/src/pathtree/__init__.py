"""Contingency path-tree planning for partially observable 2D worlds."""

from .beliefs import (
    Belief,
    HypothesisSpace,
    Mode,
    ObservationOutcome,
    WorldHypothesis,
    branching_probability,
    compatible_beliefs,
    enumerate_hypotheses,
    is_final_belief,
)
from .planner import (
    BeliefGraph,
    PlannerConfig,
    PlanningError,
    PlanResult,
    RandomGraph,
    RandomVertex,
    build_belief_graph,
    build_random_graph,
    compute_expected_costs,
    run_pipeline,
)
from .samplers import SamplerConfig, SamplerError, StateSampler, compute_camera_frame
from .tree import (
    ExtractionError,
    PathTree,
    ValidationReport,
    evaluate_path_tree_cost,
    extract_path_tree,
    simplify_path_tree,
    validate_path_tree,
)
from .world import (
    Bounds,
    Environment,
    PartiallyObservableObject,
    RobotState,
    ScenarioError,
    SensorParams,
    distance,
    is_motion_valid,
    is_valid,
    load_scenario,
    save_scenario,
    targets_found,
)

__all__ = [
    "Belief",
    "BeliefGraph",
    "Bounds",
    "Environment",
    "ExtractionError",
    "HypothesisSpace",
    "Mode",
    "ObservationOutcome",
    "PartiallyObservableObject",
    "PathTree",
    "PlanResult",
    "PlannerConfig",
    "PlanningError",
    "RandomGraph",
    "RandomVertex",
    "RobotState",
    "SamplerConfig",
    "SamplerError",
    "ScenarioError",
    "SensorParams",
    "StateSampler",
    "ValidationReport",
    "WorldHypothesis",
    "branching_probability",
    "build_belief_graph",
    "build_random_graph",
    "compatible_beliefs",
    "compute_camera_frame",
    "compute_expected_costs",
    "distance",
    "enumerate_hypotheses",
    "evaluate_path_tree_cost",
    "extract_path_tree",
    "is_final_belief",
    "is_motion_valid",
    "is_valid",
    "load_scenario",
    "run_pipeline",
    "save_scenario",
    "simplify_path_tree",
    "targets_found",
    "validate_path_tree",
]
