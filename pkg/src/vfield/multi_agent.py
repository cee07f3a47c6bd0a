"""Distributed multi-robot coordination on top of the single-robot law.

Each agent steers along its own goal field, but neighbors within the
communication radius R_c take the role obstacles play in the static case:
the blend weight becomes a cubic function of inter-agent distance, and the
repulsive member is a radial repelling node pointing away from the
neighbor.  Linear speed is additionally limited by a safe-velocity rule
that interpolates between the nominal speed and a neighbor-matching speed,
so the distance to the worst-case approaching neighbor cannot shrink below
the floor d_m.

Round model: all controls of a step are computed from the same snapshot of
poses, plan directions, and previously commanded speeds (one-step-delayed,
as exchanged over the network), then every pose advances one RK4 step.
Results are therefore independent of agent ordering, and a fleet of one
reproduces the single-robot simulator bit for bit.

Distance regimes of the blend weight sigma(d), as a neighbor gets closer:
outside d_c the weight is 0 (were such a neighbor in view it would repel
fully; with the default R_c = d_c it simply is not in view), on (d_r, d_c)
the weight blends smoothly up to 1, and at or below d_r attraction takes
over entirely while the speed rule alone guarantees separation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .blending import _smoothstep_coeffs
from .errors import DegenerateGeometryError, ProtocolViolationError
from .fields import _dipole_unit_local
from .geometry import NORM_EPS_SQ, GoalFrame, Vec2, wrap_angle
from .sim import (
    STATUS_CONVERGED,
    STATUS_TIMEOUT,
    ControlGains,
    Pose,
    SimConfig,
    TrajectoryLog,
    _steering,
    unicycle_step,
)

__all__ = [
    "AgentParams",
    "AgentState",
    "NeighborEntry",
    "MultiResult",
    "dynamic_bump",
    "repelling_node",
    "ddt_distance",
    "dynamic_plan",
    "plan_direction",
    "neighbor_view",
    "safe_velocity",
    "control_agent",
    "step_world",
    "run_multi",
    "STATUS_VIOLATION",
]

STATUS_VIOLATION = "violation"

# |r_ji . eta_i| below this fraction of d_ij counts as grazing geometry:
# the matching speed is ill-conditioned and the neighbor is not treated as
# an approach constraint (consistent with the strict < 0 approach test).
GUARD_REL = 1e-9

MULTI_LOG_COLUMNS = ("min_pair_dist", "n_neighbors")


@dataclass(frozen=True, slots=True)
class AgentParams:
    """Protocol constants shared over a fleet (or per agent, if desired).

    radius is the physical robot radius; rho_eps the safety margin used in
    the distance-floor bound; R_c the communication radius; d_m < d_r < d_c
    the floor, blend-start, and blend-end distances of the dynamic bump;
    eps_scale the (> 1) gain on the neighbor-matching speed.
    """

    radius: float
    rho_eps: float
    R_c: float
    d_m: float
    d_r: float
    d_c: float
    gains: ControlGains
    eps_scale: float = 1.5
    _bump: tuple[float, float, float, float] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not (self.radius > 0.0 and self.rho_eps > 0.0):
            raise ValueError("radius and rho_eps must be positive")
        floor = 2.0 * (2.0 * self.radius + self.rho_eps)
        if self.d_m < floor:
            raise ValueError(
                f"d_m must be at least 2*(2*radius + rho_eps) = {floor!r}, got {self.d_m!r}"
            )
        if not self.d_m < self.d_r < self.d_c <= self.R_c:
            raise ValueError(
                f"need d_m < d_r < d_c <= R_c, got "
                f"{self.d_m}, {self.d_r}, {self.d_c}, {self.R_c}"
            )
        if not self.eps_scale > 1.0:
            raise ValueError(f"eps_scale must exceed 1, got {self.eps_scale}")
        object.__setattr__(self, "_bump", _smoothstep_coeffs(self.d_r, self.d_c))


@dataclass(frozen=True, slots=True)
class AgentState:
    """One agent: identity, pose, goal frame, protocol constants, and the
    linear speed it commanded last round (what neighbors currently know)."""

    id: int
    pose: Pose
    goal: GoalFrame
    params: AgentParams
    last_u: float = 0.0

    def __post_init__(self) -> None:
        if self.last_u < 0.0:
            raise ValueError(f"last_u must be non-negative, got {self.last_u}")


@dataclass(frozen=True, slots=True)
class NeighborEntry:
    """What one neighbor broadcast: position, last commanded speed, and the
    direction of its own motion plan."""

    r: Vec2
    u: float
    eta: Vec2


def dynamic_bump(params: AgentParams, d: float) -> float:
    """Blend weight of the attractive field against one neighbor at
    distance d: 1 at or below d_r (attraction only; also covers the
    sub-floor regime, where the function is clamped so it stays total),
    cubic on (d_r, d_c), 0 at or beyond d_c."""
    if d < 0.0:
        raise ValueError(f"distance must be non-negative, got {d}")
    if d <= params.d_r:
        return 1.0
    if d >= params.d_c:
        return 0.0
    ca, cb, cc, cd = params._bump
    return ((ca * d + cb) * d + cc) * d + cd


def repelling_node(r_i: Vec2, r_j: Vec2) -> Vec2:
    """Unit vector from the neighbor at r_j toward the agent at r_i."""
    dx = r_i.x - r_j.x
    dy = r_i.y - r_j.y
    d2 = dx * dx + dy * dy
    if d2 < NORM_EPS_SQ:
        raise DegenerateGeometryError("coincident agent positions have no repelling direction")
    d = math.sqrt(d2)
    return Vec2(dx / d, dy / d)


def ddt_distance(i: AgentState, j: AgentState) -> float:
    """Instantaneous rate of change of the distance between two agents.

    Each agent moves along its actual heading at its last commanded speed,
    so with r_ji = r_i - r_j and h_k the heading unit of agent k this is
    (u_i r_ji . h_i - u_j r_ji . h_j) / |r_ji|.  Positive means separating.
    """
    dx = i.pose.r.x - j.pose.r.x
    dy = i.pose.r.y - j.pose.r.y
    d2 = dx * dx + dy * dy
    if d2 < NORM_EPS_SQ:
        raise DegenerateGeometryError("coincident agent positions have no distance rate")
    d = math.sqrt(d2)
    along_i = dx * math.cos(i.pose.theta) + dy * math.sin(i.pose.theta)
    along_j = dx * math.cos(j.pose.theta) + dy * math.sin(j.pose.theta)
    return (i.last_u * along_i - j.last_u * along_j) / d


def _dyn_plan_xy(
    gx: float,
    gy: float,
    ch: float,
    sh: float,
    nbr_pos: tuple[tuple[float, float], ...],
    d_r: float,
    d_c: float,
    ca: float,
    cb: float,
    cc: float,
    cd: float,
    x: float,
    y: float,
) -> tuple[float, float]:
    """Dynamic plan kernel on raw coordinates (hot path).

    prod(sigma_j) * F_att + sum((1 - sigma_j) * repelling node), neighbors
    frozen at snapshot positions.  With no neighbors this performs the
    identical operation sequence as the static kernel over an empty
    obstacle set, which is what makes the fleet-of-one reduction exact.
    """
    dxg = x - gx
    dyg = y - gy
    lx = ch * dxg + sh * dyg
    ly = -sh * dxg + ch * dyg
    ax, ay = _dipole_unit_local(lx, ly)
    # attractive member back in world frame; the repelling nodes are world
    # radial directions already, so only this member rotates
    awx = ch * ax - sh * ay
    awy = sh * ax + ch * ay

    sig_prod = 1.0
    sum_x = 0.0
    sum_y = 0.0
    for nx, ny in nbr_pos:
        dx = x - nx
        dy = y - ny
        d = math.sqrt(dx * dx + dy * dy)
        if d <= d_r:
            sig = 1.0
        elif d >= d_c:
            sig = 0.0
        else:
            sig = ((ca * d + cb) * d + cc) * d + cd
        sig_prod *= sig
        if sig != 1.0:
            # sigma != 1 implies d > d_r > 0, so the division is safe
            inv = (1.0 - sig) / d
            sum_x += dx * inv
            sum_y += dy * inv
    return sig_prod * awx + sum_x, sig_prod * awy + sum_y


def _plan_args(agent: AgentState, view) -> tuple:
    g = agent.goal
    ca, cb, cc, cd = agent.params._bump
    nbr_pos = tuple((e.r.x, e.r.y) for e in view)
    return (
        g.position.x, g.position.y, g.cos_h, g.sin_h,
        nbr_pos, agent.params.d_r, agent.params.d_c, ca, cb, cc, cd,
    )


def dynamic_plan(agent: AgentState, view) -> Vec2:
    """Blended plan of one agent against its current neighbor view.

    Empty view gives the pure attractive direction.  A coincident neighbor
    falls in the clamped sigma = 1 regime and contributes no repulsion, so
    the function is total on any view.
    """
    args = _plan_args(agent, view)
    fx, fy = _dyn_plan_xy(*args, agent.pose.r.x, agent.pose.r.y)
    return Vec2(fx, fy)


def plan_direction(agent: AgentState, view) -> Vec2:
    """Unit direction eta of the agent's plan; zero when the plan vanishes
    (at the goal), in which case the agent constrains nobody."""
    return dynamic_plan(agent, view).normalized()


def neighbor_view(agents: list[AgentState], i: int, etas: list[Vec2]) -> tuple[NeighborEntry, ...]:
    """Entries (position, last speed, plan direction) for every other agent
    within agents[i]'s communication radius, from the current snapshot."""
    me = agents[i]
    out = []
    for j, other in enumerate(agents):
        if j == i:
            continue
        if (other.pose.r - me.pose.r).norm() <= me.params.R_c:
            out.append(NeighborEntry(r=other.pose.r, u=other.last_u, eta=etas[j]))
    return tuple(out)


def field_directions(agents: list[AgentState]) -> list[Vec2]:
    """Plan direction of every agent at the current snapshot (the eta each
    agent would broadcast), using position-only neighbor information."""
    etas: list[Vec2] = []
    for i, me in enumerate(agents):
        nbr_pos = tuple(
            (o.pose.r.x, o.pose.r.y)
            for j, o in enumerate(agents)
            if j != i and (o.pose.r - me.pose.r).norm() <= me.params.R_c
        )
        g = me.goal
        ca, cb, cc, cd = me.params._bump
        fx, fy = _dyn_plan_xy(
            g.position.x, g.position.y, g.cos_h, g.sin_h,
            nbr_pos, me.params.d_r, me.params.d_c, ca, cb, cc, cd,
            me.pose.r.x, me.pose.r.y,
        )
        etas.append(Vec2(fx, fy).normalized())
    return etas


def _nominal_speed(k_u: float, gx: float, gy: float, x: float, y: float) -> float:
    # same operation sequence as the single-robot speed law
    dx = x - gx
    dy = y - gy
    return k_u * math.tanh(dx * dx + dy * dy)


def safe_velocity(agent: AgentState, neighbor: NeighborEntry, eta_i: Vec2 | None = None) -> float:
    """Speed bound u_{i|j} imposed by one neighbor: a distance-weighted
    interpolation that equals the nominal speed at d_ij = R_c and
    eps_scale times the neighbor-matching speed at d_ij = d_m.

    The matching speed divides by r_ji . eta_i; grazing geometry (that
    projection nearly zero) is reported as degenerate, and callers treat
    such a neighbor as not constraining.  eta_i defaults to the plan
    direction against this single neighbor; callers with a full view
    should pass the full-view direction.
    """
    prm = agent.params
    x = agent.pose.r.x
    y = agent.pose.r.y
    if eta_i is None:
        eta_i = plan_direction(agent, (neighbor,))
    rjx = x - neighbor.r.x
    rjy = y - neighbor.r.y
    d = math.sqrt(rjx * rjx + rjy * rjy)
    if d > prm.R_c:
        raise ValueError(f"neighbor at distance {d:.6g} is beyond R_c = {prm.R_c:.6g}")
    Jj = rjx * eta_i.x + rjy * eta_i.y
    if abs(Jj) < GUARD_REL * d:
        raise DegenerateGeometryError(
            "grazing geometry: |r_ji . eta_i| is vanishing, matching speed ill-conditioned"
        )
    u_ic = _nominal_speed(prm.gains.k_u, agent.goal.position.x, agent.goal.position.y, x, y)
    u_match = neighbor.u * (rjx * neighbor.eta.x + rjy * neighbor.eta.y) / Jj
    return (u_ic * (d - prm.d_m) + prm.eps_scale * u_match * (prm.R_c - d)) / (prm.R_c - prm.d_m)


def _min_safe_speed(
    u_ic: float,
    x: float,
    y: float,
    exi: float,
    eyi: float,
    d_m: float,
    R_c: float,
    eps_scale: float,
    nbr_seq,
) -> float:
    """Commanded speed: the worst (smallest) safe velocity over neighbors
    the agent is actually heading toward (r_ji . eta_i < 0), floored at 0;
    the nominal speed when no neighbor constrains.

    nbr_seq yields (nx, ny, d, u_j, ejx, ejy) per neighbor.
    """
    best = math.inf
    constrained = False
    for nx, ny, d, uj, ejx, ejy in nbr_seq:
        rjx = x - nx
        rjy = y - ny
        Jj = rjx * exi + rjy * eyi
        if abs(Jj) < GUARD_REL * d or Jj >= 0.0:
            continue
        constrained = True
        u_match = uj * (rjx * ejx + rjy * ejy) / Jj
        cand = (u_ic * (d - d_m) + eps_scale * u_match * (R_c - d)) / (R_c - d_m)
        if cand < best:
            best = cand
    if not constrained:
        return u_ic
    return best if best > 0.0 else 0.0


def control_agent(agent: AgentState, view, fd_step: float = 1e-6) -> tuple[float, float]:
    """(u, omega) for one agent against a neighbor view snapshot.

    u is the nominal speed unless an approached neighbor imposes a smaller
    safe velocity (never negative); omega tracks the dynamic plan's heading
    exactly as the single-robot law does, with neighbors frozen during the
    finite-difference probes.
    """
    u, omega, _phi = _control_agent(agent, view, fd_step)
    return u, omega


def _control_agent(agent: AgentState, view, fd_step: float) -> tuple[float, float, float]:
    prm = agent.params
    x = agent.pose.r.x
    y = agent.pose.r.y
    u_ic = _nominal_speed(prm.gains.k_u, agent.goal.position.x, agent.goal.position.y, x, y)
    if view:
        eta_i = plan_direction(agent, view)
        nbr_seq = (
            (e.r.x, e.r.y, math.hypot(x - e.r.x, y - e.r.y), e.u, e.eta.x, e.eta.y)
            for e in view
        )
        u = _min_safe_speed(
            u_ic, x, y, eta_i.x, eta_i.y, prm.d_m, prm.R_c, prm.eps_scale, nbr_seq
        )
    else:
        u = u_ic
    args = _plan_args(agent, view)
    omega, phi = _steering(
        lambda qx, qy: _dyn_plan_xy(*args, qx, qy),
        x, y, agent.pose.theta, u, prm.gains.k_omega, fd_step,
    )
    return u, omega, phi


def step_world(agents: list[AgentState], cfg: SimConfig) -> list[AgentState]:
    """One synchronous round: compute every control from the pre-step
    snapshot (positions, plan directions, one-step-delayed speeds), then
    advance every pose one RK4 step and refresh last_u.

    Raises a protocol violation if any post-step pair comes closer than
    the sum of the two body radii (the fleet runner reports the same
    condition as a terminal status instead).
    """
    etas = field_directions(agents)
    controls = []
    for i, agent in enumerate(agents):
        view = neighbor_view(agents, i, etas)
        u, omega, _phi = _control_agent(agent, view, cfg.fd_step)
        controls.append((u, omega))
    out = []
    for agent, (u, omega) in zip(agents, controls):
        out.append(replace(agent, pose=unicycle_step(agent.pose, u, omega, cfg.dt), last_u=u))
    for i in range(len(out)):
        for j in range(i + 1, len(out)):
            d = (out[i].pose.r - out[j].pose.r).norm()
            contact = out[i].params.radius + out[j].params.radius
            if d < contact:
                raise ProtocolViolationError(
                    f"agents {out[i].id} and {out[j].id} at distance {d:.6g} "
                    f"< contact distance {contact:.6g}"
                )
    return out


@dataclass(slots=True)
class MultiResult:
    """Outcome of a fleet run: terminal status, per-agent logs (sim schema
    plus min_pair_dist and n_neighbors columns), per-agent statuses and
    arrival times, distance and chattering diagnostics, final states."""

    status: str
    t_final: float
    logs: list[TrajectoryLog]
    agent_status: list[str]
    arrival_times: list[float | None]
    min_pair_distance: float
    violating_pair: tuple[int, int] | None
    final_states: list[AgentState]
    chatter_max_in_window: int
    chatter_total: int
    chatter_window_steps: int


def _max_in_window(steps: list[int], w: int) -> int:
    best = 0
    lo = 0
    for hi in range(len(steps)):
        while steps[hi] - steps[lo] >= w:
            lo += 1
        if hi - lo + 1 > best:
            best = hi - lo + 1
    return best


def run_multi(agents: list[AgentState], cfg: SimConfig) -> MultiResult:
    """Integrate the fleet until every agent reaches its goal pose, a pair
    makes contact (protocol violation), or time runs out.

    Every sample logs the controls computed at that snapshot, the distance
    to the nearest other agent, and the neighbor count; the clearance
    column is inf (there are no static obstacles in fleet runs).  The
    chattering diagnostics count, per pair, how often the pair distance
    crossed d_r or d_c, and report the worst count over any window of
    10/dt steps.
    """
    n = len(agents)
    if n == 0:
        raise ValueError("fleet must contain at least one agent")
    xs = [a.pose.r.x for a in agents]
    ys = [a.pose.r.y for a in agents]
    ths = [a.pose.theta for a in agents]
    lus = [a.last_u for a in agents]
    # per-agent constants, flattened off the hot loops
    prm = [
        (
            a.params.gains.k_u,
            a.params.gains.k_omega,
            a.params.R_c,
            a.params.d_m,
            a.params.d_r,
            a.params.d_c,
            a.params.eps_scale,
            *a.params._bump,
            a.params.radius,
        )
        for a in agents
    ]
    gfl = [(a.goal.position.x, a.goal.position.y, a.goal.cos_h, a.goal.sin_h) for a in agents]
    heads = [a.goal.heading for a in agents]
    logs = [TrajectoryLog(extra_columns=MULTI_LOG_COLUMNS) for _ in agents]
    arrival: list[float | None] = [None] * n
    min_pair_run = [math.inf] * n
    global_min = math.inf
    violating: tuple[int, int] | None = None
    n_pairs = n * (n - 1) // 2
    prev_regime: list[int] = [0] * n_pairs
    crossings: list[list[int]] = [[] for _ in range(n_pairs)]
    total_crossings = 0

    dt = cfg.dt
    t_max = cfg.t_max
    fd = cfg.fd_step
    t = 0.0
    k = 0
    status = None
    while True:
        # pairwise snapshot distances, neighbor lists, violation scan
        nbr: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        min_pair = [math.inf] * n
        pidx = 0
        for i in range(n):
            xi = xs[i]
            yi = ys[i]
            for j in range(i + 1, n):
                dx = xi - xs[j]
                dy = yi - ys[j]
                d = math.sqrt(dx * dx + dy * dy)
                if d < min_pair[i]:
                    min_pair[i] = d
                if d < min_pair[j]:
                    min_pair[j] = d
                if d < global_min:
                    global_min = d
                if violating is None and d < prm[i][11] + prm[j][11]:
                    violating = (i, j)
                if d <= prm[i][2]:
                    nbr[i].append((j, d))
                if d <= prm[j][2]:
                    nbr[j].append((i, d))
                # sigma-regime bookkeeping for the chattering monitor
                reg = 0 if d <= prm[i][4] else (2 if d >= prm[i][5] else 1)
                if k > 0 and reg != prev_regime[pidx]:
                    w = abs(reg - prev_regime[pidx])
                    crossings[pidx].extend((k,) * w)
                    total_crossings += w
                prev_regime[pidx] = reg
                pidx += 1
        for i in range(n):
            if min_pair[i] < min_pair_run[i]:
                min_pair_run[i] = min_pair[i]

        # phase 1: plan directions from the position snapshot
        npos = [tuple((xs[j], ys[j]) for j, _d in nbr[i]) for i in range(n)]
        etas: list[tuple[float, float]] = []
        for i in range(n):
            gx, gy, ch, sh = gfl[i]
            fx, fy = _dyn_plan_xy(
                gx, gy, ch, sh, npos[i], prm[i][4], prm[i][5],
                prm[i][7], prm[i][8], prm[i][9], prm[i][10], xs[i], ys[i],
            )
            n2 = fx * fx + fy * fy
            if n2 < NORM_EPS_SQ:
                etas.append((0.0, 0.0))
            else:
                inv = 1.0 / math.sqrt(n2)
                etas.append((fx * inv, fy * inv))

        # phase 2: speeds from delayed neighbor speeds, then steering
        us = []
        for i in range(n):
            gx, gy, _ch, _sh = gfl[i]
            u_ic = _nominal_speed(prm[i][0], gx, gy, xs[i], ys[i])
            if nbr[i]:
                exi, eyi = etas[i]
                seq = (
                    (xs[j], ys[j], d, lus[j], etas[j][0], etas[j][1]) for j, d in nbr[i]
                )
                us.append(
                    _min_safe_speed(
                        u_ic, xs[i], ys[i], exi, eyi,
                        prm[i][3], prm[i][2], prm[i][6], seq,
                    )
                )
            else:
                us.append(u_ic)
        oms = []
        phis = []
        for i in range(n):
            gx, gy, ch, sh = gfl[i]
            args = (
                gx, gy, ch, sh, npos[i], prm[i][4], prm[i][5],
                prm[i][7], prm[i][8], prm[i][9], prm[i][10],
            )
            omega, phi = _steering(
                lambda qx, qy, _a=args: _dyn_plan_xy(*_a, qx, qy),
                xs[i], ys[i], ths[i], us[i], prm[i][1], fd,
            )
            oms.append(omega)
            phis.append(phi)

        # terminal conditions on this snapshot
        conv_now = []
        for i in range(n):
            gx, gy, _ch, _sh = gfl[i]
            ok = (
                math.hypot(xs[i] - gx, ys[i] - gy) < cfg.goal_pos_tol
                and abs(wrap_angle(ths[i] - heads[i])) < cfg.goal_ang_tol
            )
            conv_now.append(ok)
            if ok and arrival[i] is None:
                arrival[i] = t
        if violating is not None:
            status = STATUS_VIOLATION
        elif all(conv_now):
            status = STATUS_CONVERGED
        elif t >= t_max:
            status = STATUS_TIMEOUT

        for i in range(n):
            logs[i].append(
                t, xs[i], ys[i], ths[i], us[i], oms[i], phis[i],
                math.inf, min_pair[i], len(nbr[i]),
            )
        if status is not None:
            for i in range(n):
                logs[i].status = STATUS_CONVERGED if conv_now[i] else status
            break

        # phase 3: synchronous pose advance
        t_next = (k + 1) * dt
        if t_next > t_max:
            t_next = t_max
        h = t_next - t
        for i in range(n):
            p = unicycle_step(Pose(Vec2(xs[i], ys[i]), ths[i]), us[i], oms[i], h)
            xs[i] = p.r.x
            ys[i] = p.r.y
            ths[i] = p.theta
            lus[i] = us[i]
        t = t_next
        k += 1

    window = max(1, int(round(10.0 / dt)))
    chatter_max = 0
    for ev in crossings:
        m = _max_in_window(ev, window)
        if m > chatter_max:
            chatter_max = m
    final_states = [
        replace(agents[i], pose=Pose(Vec2(xs[i], ys[i]), ths[i]), last_u=lus[i])
        for i in range(n)
    ]
    viol_ids = None
    if violating is not None:
        viol_ids = (agents[violating[0]].id, agents[violating[1]].id)
    return MultiResult(
        status=status,
        t_final=t,
        logs=logs,
        agent_status=[log.status for log in logs],
        arrival_times=arrival,
        min_pair_distance=global_min,
        violating_pair=viol_ids,
        final_states=final_states,
        chatter_max_in_window=chatter_max,
        chatter_total=total_crossings,
        chatter_window_steps=window,
    )
