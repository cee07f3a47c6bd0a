"""Scenario files: a small YAML schema describing either a field plot, a
single-robot world, or a fleet run.

Loading performs full validation up front (schema shape, numeric types,
then every geometric and protocol invariant via the domain constructors),
so a scenario that loads will simulate without configuration surprises.
Error messages name the offending field or the violated invariant.

Schema sketch::

    mode: static | multi | field_plot
    seed: 0                      # optional, recorded for diagnostics
    sim: {dt, t_max, goal_pos_tol, goal_ang_tol, fd_step}
    gains: {k_u, k_omega}

    # static
    goal: {x, y, theta}
    robot_radius: 0.005
    rho_eps: 0.005
    obstacles: [{x, y, radius, rho_F?}, ...]
    start: {x, y, theta}

    # multi
    protocol: {radius, rho_eps, R_c, d_m, d_r, d_c, eps_scale?}
    agents: [{start: {x,y,theta}, goal: {x,y,theta}}, ...]

    # field_plot
    field: {lam, px, py}
    bounds: [xmin, xmax, ymin, ymax]   # also optional for static plots
    grid_n: 21
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import yaml

from .blending import Obstacle, StaticWorld
from .errors import ScenarioError
from .fields import FieldParams
from .geometry import GoalFrame, Vec2, wrap_angle
from .multi_agent import AgentParams, AgentState
from .sim import ControlGains, Pose, SimConfig

__all__ = ["ScenarioFile", "load_scenario"]

MODES = ("field_plot", "static", "multi")

_MISSING = object()


@dataclass(frozen=True, slots=True)
class ScenarioFile:
    """A fully validated scenario, ready to run."""

    mode: str
    path: str
    seed: int = 0
    sim: SimConfig | None = None
    gains: ControlGains | None = None
    # static mode
    world: StaticWorld | None = None
    start: Pose | None = None
    # multi mode
    params: AgentParams | None = None
    agents: list[AgentState] | None = None
    # field_plot mode (bounds/grid_n also style static field figures)
    field: FieldParams | None = None
    bounds: tuple[float, float, float, float] | None = None
    grid_n: int | None = None


def _as_map(value, ctx: str) -> dict:
    if not isinstance(value, dict):
        raise ScenarioError(f"{ctx}: expected a mapping, got {type(value).__name__}")
    return value


def _map(d: dict, key: str, ctx: str, default=_MISSING) -> dict:
    if key not in d:
        if default is _MISSING:
            raise ScenarioError(f"{ctx}: missing section '{key}'")
        return default
    return _as_map(d[key], f"{ctx}.{key}")


def _list(d: dict, key: str, ctx: str) -> list:
    if key not in d:
        raise ScenarioError(f"{ctx}: missing list '{key}'")
    v = d[key]
    if not isinstance(v, list):
        raise ScenarioError(f"{ctx}.{key}: expected a list, got {type(v).__name__}")
    return v


def _num(d: dict, key: str, ctx: str, default=_MISSING) -> float:
    if key not in d:
        if default is _MISSING:
            raise ScenarioError(f"{ctx}: missing number '{key}'")
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ScenarioError(f"{ctx}.{key}: expected a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ScenarioError(f"{ctx}.{key}: must be finite, got {v!r}")
    return v


def _int(d: dict, key: str, ctx: str, default=_MISSING) -> int:
    if key not in d:
        if default is _MISSING:
            raise ScenarioError(f"{ctx}: missing integer '{key}'")
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ScenarioError(f"{ctx}.{key}: expected an integer, got {v!r}")
    return v


def _vec(d: dict, ctx: str) -> Vec2:
    return Vec2(_num(d, "x", ctx), _num(d, "y", ctx))


def _pose(d: dict, ctx: str) -> Pose:
    return Pose(_vec(d, ctx), wrap_angle(_num(d, "theta", ctx)))


def _frame(d: dict, ctx: str) -> GoalFrame:
    return GoalFrame(_vec(d, ctx), wrap_angle(_num(d, "theta", ctx)))


def _sim_config(d: dict, ctx: str) -> SimConfig:
    try:
        return SimConfig(
            t_max=_num(d, "t_max", ctx),
            dt=_num(d, "dt", ctx, 1e-3),
            goal_pos_tol=_num(d, "goal_pos_tol", ctx, 1e-3),
            goal_ang_tol=_num(d, "goal_ang_tol", ctx, 1e-2),
            fd_step=_num(d, "fd_step", ctx, 1e-6),
        )
    except ValueError as e:
        raise ScenarioError(f"{ctx}: {e}") from e


def _gains(d: dict, ctx: str) -> ControlGains:
    try:
        return ControlGains(k_u=_num(d, "k_u", ctx), k_omega=_num(d, "k_omega", ctx))
    except ValueError as e:
        raise ScenarioError(f"{ctx}: {e}") from e


def _bounds(d: dict, ctx: str) -> tuple[float, float, float, float] | None:
    if "bounds" not in d:
        return None
    v = d["bounds"]
    if not (isinstance(v, list) and len(v) == 4):
        raise ScenarioError(f"{ctx}.bounds: expected [xmin, xmax, ymin, ymax]")
    vals = []
    for i, item in enumerate(v):
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ScenarioError(f"{ctx}.bounds[{i}]: expected a number, got {item!r}")
        vals.append(float(item))
    x0, x1, y0, y1 = vals
    if not (x0 < x1 and y0 < y1):
        raise ScenarioError(f"{ctx}.bounds: degenerate extent {vals}")
    return (x0, x1, y0, y1)


def load_scenario(path) -> ScenarioFile:
    """Parse and validate one scenario file.

    Raises ScenarioError with the file path plus a field-level or
    invariant-level message on any problem; a returned scenario has passed
    every constructor check (obstacle clearance, goal placement, protocol
    distance ordering, initial agent spacing).
    """
    path = str(path)
    try:
        with open(path, "r") as fh:
            text = fh.read()
    except OSError as e:
        raise ScenarioError(f"{path}: {e}") from e
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ScenarioError(f"{path}: parse error: {e}") from e
    root = _as_map(data, path)

    mode = root.get("mode")
    if mode not in MODES:
        raise ScenarioError(f"{path}: mode must be one of {MODES}, got {mode!r}")
    seed = _int(root, "seed", path, 0)
    grid_n = _int(root, "grid_n", path, None)
    if grid_n is not None and grid_n < 2:
        raise ScenarioError(f"{path}.grid_n: need at least 2, got {grid_n}")
    bounds = _bounds(root, path)

    if mode == "field_plot":
        fd = _map(root, "field", path)
        try:
            fld = FieldParams(
                lam=_num(fd, "lam", f"{path}.field"),
                p=Vec2(_num(fd, "px", f"{path}.field"), _num(fd, "py", f"{path}.field")),
            )
        except ValueError as e:
            raise ScenarioError(f"{path}.field: {e}") from e
        return ScenarioFile(
            mode=mode, path=path, seed=seed, field=fld,
            bounds=bounds or (-1.0, 1.0, -1.0, 1.0), grid_n=grid_n or 21,
        )

    sim = _sim_config(_map(root, "sim", path), f"{path}.sim")
    gains = _gains(_map(root, "gains", path), f"{path}.gains")

    if mode == "static":
        goal = _frame(_map(root, "goal", path), f"{path}.goal")
        robot_radius = _num(root, "robot_radius", path)
        rho_eps = _num(root, "rho_eps", path)
        obstacles = []
        rho_fs = []
        for i, entry in enumerate(_list(root, "obstacles", path)):
            ctx = f"{path}.obstacles[{i}]"
            entry = _as_map(entry, ctx)
            try:
                obstacles.append(Obstacle(_vec(entry, ctx), _num(entry, "radius", ctx)))
            except ValueError as e:
                raise ScenarioError(f"{ctx}: {e}") from e
            rho_fs.append(_num(entry, "rho_F", ctx, None))
        try:
            world = StaticWorld.from_obstacles(
                goal, robot_radius, rho_eps, obstacles, rho_fs
            )
        except (ScenarioError, ValueError) as e:
            raise ScenarioError(f"{path}: {e}") from e
        start = _pose(_map(root, "start", path), f"{path}.start")
        for i, ob in enumerate(world.obstacles):
            if (start.r - ob.obstacle.center).norm() <= ob.obstacle.radius:
                raise ScenarioError(f"{path}.start: inside obstacle {i}")
        return ScenarioFile(
            mode=mode, path=path, seed=seed, sim=sim, gains=gains,
            world=world, start=start, bounds=bounds, grid_n=grid_n,
        )

    # multi
    pd = _map(root, "protocol", path)
    ctx = f"{path}.protocol"
    try:
        params = AgentParams(
            radius=_num(pd, "radius", ctx),
            rho_eps=_num(pd, "rho_eps", ctx),
            R_c=_num(pd, "R_c", ctx),
            d_m=_num(pd, "d_m", ctx),
            d_r=_num(pd, "d_r", ctx),
            d_c=_num(pd, "d_c", ctx),
            eps_scale=_num(pd, "eps_scale", ctx, 1.5),
            gains=gains,
        )
    except ValueError as e:
        raise ScenarioError(f"{ctx}: {e}") from e
    agents = []
    for i, entry in enumerate(_list(root, "agents", path)):
        ctx = f"{path}.agents[{i}]"
        entry = _as_map(entry, ctx)
        agents.append(
            AgentState(
                id=i,
                pose=_pose(_map(entry, "start", ctx), f"{ctx}.start"),
                goal=_frame(_map(entry, "goal", ctx), f"{ctx}.goal"),
                params=params,
            )
        )
    if not agents:
        raise ScenarioError(f"{path}.agents: need at least one agent")
    for i in range(len(agents)):
        for j in range(i + 1, len(agents)):
            d = (agents[i].pose.r - agents[j].pose.r).norm()
            if d < params.d_m:
                raise ScenarioError(
                    f"{path}: agents {i} and {j} start {d:.6g} apart; "
                    f"the protocol floor d_m is {params.d_m:.6g}"
                )
    return ScenarioFile(
        mode=mode, path=path, seed=seed, sim=sim, gains=gains,
        params=params, agents=agents, bounds=bounds, grid_n=grid_n,
    )
