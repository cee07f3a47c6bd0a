"""Unicycle kinematics, the heading-tracking speed/steering law, and the
single-robot closed-loop simulator.

The robot follows the blended plan by construction: linear speed shrinks
smoothly to zero with the squared distance to the goal, and the steering
rate combines proportional tracking of the plan's heading with a
feed-forward term for how that heading changes along the current motion
direction.  Plan headings are only available through point evaluations, so
the feed-forward term uses central finite differences of the plan field.
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass

from .blending import StaticWorld, _plan_xy
from .errors import InvalidQueryError
from .geometry import NORM_EPS_SQ, Vec2, wrap_angle

__all__ = [
    "Pose",
    "ControlGains",
    "SimConfig",
    "TrajectoryLog",
    "unicycle_step",
    "control_single",
    "run_single",
    "STATUS_CONVERGED",
    "STATUS_TIMEOUT",
    "STATUS_COLLISION",
]

STATUS_RUNNING = "running"
STATUS_CONVERGED = "converged"
STATUS_TIMEOUT = "timeout"
STATUS_COLLISION = "collision"


@dataclass(frozen=True, slots=True)
class Pose:
    """Planar position plus heading (radians, (-pi, pi])."""

    r: Vec2
    theta: float


@dataclass(frozen=True, slots=True)
class ControlGains:
    """Positive gains of the speed law (k_u) and the steering law (k_omega)."""

    k_u: float
    k_omega: float

    def __post_init__(self) -> None:
        if not (self.k_u > 0.0 and self.k_omega > 0.0):
            raise ValueError(f"gains must be positive, got k_u={self.k_u}, k_omega={self.k_omega}")


@dataclass(frozen=True, slots=True)
class SimConfig:
    """Integration step, time budget, convergence tolerances, and the
    finite-difference probe step for the heading feed-forward term."""

    t_max: float
    dt: float = 1e-3
    goal_pos_tol: float = 1e-3
    goal_ang_tol: float = 1e-2
    fd_step: float = 1e-6

    def __post_init__(self) -> None:
        if not (self.dt > 0.0 and self.t_max > self.dt):
            raise ValueError("need dt > 0 and t_max > dt")
        if not (self.goal_pos_tol > 0.0 and self.goal_ang_tol > 0.0 and self.fd_step > 0.0):
            raise ValueError("tolerances and fd_step must be positive")


BASE_COLUMNS = ("t", "x", "y", "theta", "u", "omega", "phi", "clearance")
_INT_COLUMNS = frozenset({"n_neighbors"})


class TrajectoryLog:
    """Columnar per-step record of one robot's run.

    Samples are appended once per integration step (plus the initial and
    terminal states), so consecutive times differ by dt except for one final
    partial step.  Values round-trip through the CSV rendering exactly.
    """

    def __init__(self, extra_columns: tuple[str, ...] = ()):
        self.columns: tuple[str, ...] = BASE_COLUMNS + tuple(extra_columns)
        self.status: str = STATUS_RUNNING
        self._cols = tuple(
            [] if name in _INT_COLUMNS else array("d") for name in self.columns
        )
        self._by_name = dict(zip(self.columns, self._cols))

    def append(self, *values: float) -> None:
        if len(values) != len(self._cols):
            raise ValueError(f"expected {len(self._cols)} values, got {len(values)}")
        for col, v in zip(self._cols, values):
            col.append(v)

    def __len__(self) -> int:
        return len(self._cols[0])

    def column(self, name: str):
        return self._by_name[name]

    def row(self, i: int) -> tuple:
        return tuple(col[i] for col in self._cols)

    def to_csv(self) -> str:
        parts = [",".join(self.columns) + "\n"]
        append = parts.append
        for row in zip(*self._cols):
            append(",".join(map(repr, row)) + "\n")
        return "".join(parts)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv())


def _rk4_step(
    x: float, y: float, th: float, u: float, om: float, dt: float
) -> tuple[float, float, float]:
    """One classical RK4 step of the unicycle with controls held constant.

    The heading rate is constant over the step, so the two midpoint stages
    evaluate at the same heading and are merged.
    """
    c1 = math.cos(th)
    s1 = math.sin(th)
    thm = th + 0.5 * dt * om
    cm = math.cos(thm)
    sm = math.sin(thm)
    the = th + dt * om
    ce = math.cos(the)
    se = math.sin(the)
    w = dt * u / 6.0
    return (
        x + w * (c1 + 4.0 * cm + ce),
        y + w * (s1 + 4.0 * sm + se),
        the,
    )


def unicycle_step(pose: Pose, u: float, omega: float, dt: float) -> Pose:
    """Advance the unicycle one RK4 step; heading is wrapped to (-pi, pi]."""
    x, y, th = _rk4_step(pose.r.x, pose.r.y, pose.theta, u, omega, dt)
    return Pose(Vec2(x, y), wrap_angle(th))


def _steering(
    field_xy,
    x: float,
    y: float,
    theta: float,
    u: float,
    k_omega: float,
    fd_step: float,
) -> tuple[float, float]:
    """(omega, phi) of the steering law at one state.

    phi is the plan heading; omega tracks it proportionally plus the
    feed-forward rate at which phi changes while moving with speed u along
    the current heading.  The rate comes from the exact derivative of
    atan2 of the plan components, with the spatial partials approximated by
    central differences; the squared-norm divisor matters wherever the plan
    is not unit length (inside blend annuli).
    """
    fx, fy = field_xy(x, y)
    phi = wrap_angle(math.atan2(fy, fx))
    h = fd_step
    fxp, fyp = field_xy(x + h, y)
    fxm, fym = field_xy(x - h, y)
    fxu, fyu = field_xy(x, y + h)
    fxd, fyd = field_xy(x, y - h)
    n2 = fx * fx + fy * fy
    if n2 < NORM_EPS_SQ:
        phidot = 0.0
    else:
        ct = math.cos(theta)
        st = math.sin(theta)
        inv2h = 0.5 / h
        dfy_along = ((fyp - fym) * ct + (fyu - fyd) * st) * inv2h
        dfx_along = ((fxp - fxm) * ct + (fxu - fxd) * st) * inv2h
        phidot = (dfy_along * fx - dfx_along * fy) * u / n2
    omega = -k_omega * wrap_angle(theta - phi) + phidot
    return omega, phi


def control_single(
    world: StaticWorld, gains: ControlGains, pose: Pose, fd_step: float = 1e-6
) -> tuple[float, float, float]:
    """Speed, steering rate, and plan heading at one robot state.

    Speed is k_u * tanh(squared goal distance); steering follows the
    blended plan of the world.
    """
    x = pose.r.x
    y = pose.r.y
    gx = world.goal.position.x
    gy = world.goal.position.y
    dx = x - gx
    dy = y - gy
    u = gains.k_u * math.tanh(dx * dx + dy * dy)
    omega, phi = _steering(
        lambda px, py: _plan_xy(world, px, py),
        x, y, pose.theta, u, gains.k_omega, fd_step,
    )
    return u, omega, phi


def run_single(
    world: StaticWorld, gains: ControlGains, start: Pose, cfg: SimConfig
) -> TrajectoryLog:
    """Integrate the closed loop until convergence, collision, or timeout.

    Convergence means position within goal_pos_tol and heading within
    goal_ang_tol of the goal configuration, checked every step.  Collision
    means the robot disk touches an obstacle disk (negative clearance); the
    terminal sample then records zero commands since none was executed.
    """
    log = TrajectoryLog()
    goal = world.goal
    pose = start
    dt = cfg.dt
    t_max = cfg.t_max
    t = 0.0
    k = 0
    while True:
        clear = world.clearance(pose.r)
        terminal = None
        if clear < 0.0:
            terminal = STATUS_COLLISION
        else:
            dxg = pose.r.x - goal.position.x
            dyg = pose.r.y - goal.position.y
            if (
                math.hypot(dxg, dyg) < cfg.goal_pos_tol
                and abs(wrap_angle(pose.theta - goal.heading)) < cfg.goal_ang_tol
            ):
                terminal = STATUS_CONVERGED
            elif t >= t_max:
                terminal = STATUS_TIMEOUT
        try:
            u, omega, phi = control_single(world, gains, pose, cfg.fd_step)
        except InvalidQueryError:
            u, omega, phi = 0.0, 0.0, pose.theta
        log.append(t, pose.r.x, pose.r.y, pose.theta, u, omega, phi, clear)
        if terminal is not None:
            log.status = terminal
            return log
        t_next = (k + 1) * dt
        if t_next > t_max:
            t_next = t_max
        pose = unicycle_step(pose, u, omega, t_next - t)
        t = t_next
        k += 1
