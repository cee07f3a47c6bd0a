"""Blended vector-field motion planning for unicycle robots.

A two-parameter family of planar fields supplies an attractive member
whose integral curves arrive at a goal pose along a chosen heading, and
repulsive members that carry flow around circular obstacles.  Cubic bump
weights blend the members into a single feedback motion plan; a unicycle
tracks the plan's direction while its speed decays smoothly into the goal.
The same machinery, with neighbor agents in place of obstacles plus a
safe-velocity speed cap, yields a distributed multi-robot protocol.

The package splits along those lines: ``fields`` (the family and its
algebra), ``blending`` (obstacles, bump weights, the composite plan),
``sim`` (unicycle integrator, control law, single-robot runs),
``multi_agent`` (the distributed protocol), and ``scenario``/``runner``/
``cli`` (scenario files, artifacts, command line).
"""

from .blending import (
    Obstacle,
    ObstacleZones,
    StaticWorld,
    beta,
    blend_single,
    bump_sigma,
    motion_plan,
    repulsive_field,
    repulsive_normalized,
)
from .errors import (
    DegenerateGeometryError,
    InvalidQueryError,
    ProtocolViolationError,
    ScenarioError,
    VfieldError,
)
from .fields import (
    FieldParams,
    attractive_normalized,
    eval_field,
    field_determinant,
    integral_curve_invariant,
    normalize_attractive,
    reflect_about,
)
from .geometry import GoalFrame, Vec2, wrap_angle
from .multi_agent import (
    AgentParams,
    AgentState,
    MultiResult,
    NeighborEntry,
    STATUS_VIOLATION,
    control_agent,
    ddt_distance,
    dynamic_bump,
    dynamic_plan,
    neighbor_view,
    plan_direction,
    repelling_node,
    run_multi,
    safe_velocity,
    step_world,
)
from .runner import run_scenario
from .scenario import ScenarioFile, load_scenario
from .sim import (
    STATUS_COLLISION,
    STATUS_CONVERGED,
    STATUS_TIMEOUT,
    ControlGains,
    Pose,
    SimConfig,
    TrajectoryLog,
    control_single,
    run_single,
    unicycle_step,
)

__version__ = "0.1.0"

__all__ = [
    "AgentParams",
    "AgentState",
    "ControlGains",
    "DegenerateGeometryError",
    "FieldParams",
    "GoalFrame",
    "InvalidQueryError",
    "MultiResult",
    "NeighborEntry",
    "Obstacle",
    "ObstacleZones",
    "Pose",
    "ProtocolViolationError",
    "STATUS_COLLISION",
    "STATUS_CONVERGED",
    "STATUS_TIMEOUT",
    "STATUS_VIOLATION",
    "ScenarioError",
    "ScenarioFile",
    "SimConfig",
    "StaticWorld",
    "TrajectoryLog",
    "Vec2",
    "VfieldError",
    "attractive_normalized",
    "beta",
    "blend_single",
    "bump_sigma",
    "control_agent",
    "control_single",
    "ddt_distance",
    "dynamic_bump",
    "dynamic_plan",
    "eval_field",
    "field_determinant",
    "integral_curve_invariant",
    "load_scenario",
    "motion_plan",
    "neighbor_view",
    "normalize_attractive",
    "plan_direction",
    "repelling_node",
    "repulsive_field",
    "repulsive_normalized",
    "reflect_about",
    "run_multi",
    "run_scenario",
    "run_single",
    "safe_velocity",
    "step_world",
    "unicycle_step",
    "wrap_angle",
    "__version__",
]
