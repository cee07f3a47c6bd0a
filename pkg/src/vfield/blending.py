"""Obstacle-aware blending of attractive and repulsive field members.

Around every circular obstacle two concentric circles are derived: an inner
safety circle of radius ``rho_Z`` (obstacle radius grown by the robot radius
and a safety margin) and an outer influence circle of radius ``rho_F``.
Outside ``rho_F`` the plan is the pure attractive direction; inside ``rho_Z``
it is the pure repulsive direction; in the annulus between them the two are
mixed by a cubic bump weight that is 1 on the outer boundary and 0 on the
inner one, with zero slope at both, so the blended plan is continuously
differentiable across the boundaries.

All obstacle bookkeeping is done in terms of the proximity function
beta(r) = radius^2 - |r - center|^2, which is negative outside the obstacle
and increases as the query approaches the center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidQueryError, ScenarioError
from .fields import _dipole_unit_local, _field
from .geometry import NORM_EPS_SQ, GoalFrame, Vec2, wrap_angle

__all__ = [
    "Obstacle",
    "ObstacleZones",
    "StaticWorld",
    "beta",
    "bump_sigma",
    "repulsive_field",
    "repulsive_normalized",
    "blend_single",
    "motion_plan",
]


@dataclass(frozen=True, slots=True)
class Obstacle:
    """A static circular obstacle in world coordinates."""

    center: Vec2
    radius: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise ValueError(f"obstacle radius must be positive, got {self.radius}")


def beta(ob: Obstacle, r: Vec2) -> float:
    """Proximity function radius^2 - |r - center|^2 (negative outside)."""
    dx = r.x - ob.center.x
    dy = r.y - ob.center.y
    return ob.radius * ob.radius - (dx * dx + dy * dy)


def _smoothstep_coeffs(lo: float, hi: float) -> tuple[float, float, float, float]:
    """Cubic coefficients (a, b, c, d) with value 1 at ``lo``, 0 at ``hi``
    and zero slope at both knots."""
    den = (hi - lo) ** 3
    a = 2.0 / den
    b = -3.0 * (hi + lo) / den
    c = 6.0 * hi * lo / den
    d = hi * hi * (hi - 3.0 * lo) / den
    return a, b, c, d


@dataclass(frozen=True, slots=True)
class ObstacleZones:
    """An obstacle together with its derived safety/influence geometry,
    the axis of its repulsive field, and the bump-weight coefficients.

    The repulsive axis ``p`` is the unit vector along the goal-to-center
    line, pointing from the goal toward the obstacle; queries behind the
    obstacle (seen from the goal) get the tangential lam = 1 member around
    that axis, queries on the goal side get the straight lam = 0 push.
    ``goal`` is the frame the zones were derived in; blending a zone
    against a different goal is a usage error.
    """

    obstacle: Obstacle
    goal: GoalFrame
    rho_robot: float
    rho_eps: float
    rho_Z: float
    rho_F: float
    beta_Z: float
    beta_F: float
    p: Vec2 = field(init=False, repr=False)
    bump_coeffs: tuple[float, float, float, float] = field(init=False, repr=False)
    # goal-frame center coordinates and axis, used by the evaluation kernels
    _clx: float = field(init=False, repr=False)
    _cly: float = field(init=False, repr=False)
    _plx: float = field(init=False, repr=False)
    _ply: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.rho_robot < 0.0 or self.rho_eps < 0.0:
            raise ValueError("rho_robot and rho_eps must be non-negative")
        if self.rho_robot + self.rho_eps <= 0.0:
            raise ValueError("rho_robot + rho_eps must be positive")
        if not self.rho_F > self.rho_Z > self.obstacle.radius:
            raise ValueError(
                f"need rho_F > rho_Z > radius, got {self.rho_F}, {self.rho_Z}, {self.obstacle.radius}"
            )
        if not self.beta_F < self.beta_Z < 0.0:
            raise ValueError(f"need beta_F < beta_Z < 0, got {self.beta_F}, {self.beta_Z}")
        loc = self.goal.to_local(self.obstacle.center)
        # axis angle: flip the center-to-goal direction by pi, then wrap
        phi = wrap_angle(math.atan2(-loc.y, -loc.x) + math.pi)
        plx = math.cos(phi)
        ply = math.sin(phi)
        object.__setattr__(self, "_clx", loc.x)
        object.__setattr__(self, "_cly", loc.y)
        object.__setattr__(self, "_plx", plx)
        object.__setattr__(self, "_ply", ply)
        object.__setattr__(self, "p", self.goal.vec_to_world(Vec2(plx, ply)))
        object.__setattr__(self, "bump_coeffs", _smoothstep_coeffs(self.beta_F, self.beta_Z))

    @classmethod
    def around(
        cls,
        obstacle: Obstacle,
        goal: GoalFrame,
        rho_robot: float,
        rho_eps: float,
        rho_F: float | None = None,
    ) -> "ObstacleZones":
        """Derive the zone geometry for one obstacle.

        ``rho_Z`` is the obstacle radius grown by robot radius plus margin;
        ``rho_F`` defaults to ``rho_Z`` plus half the growth, and may be
        overridden with any larger value.
        """
        grow = rho_robot + rho_eps
        rho_Z = obstacle.radius + grow
        if rho_F is None:
            rho_F = rho_Z + 0.5 * grow
        beta_Z = -2.0 * obstacle.radius * grow - grow * grow
        beta_F = obstacle.radius * obstacle.radius - rho_F * rho_F
        return cls(
            obstacle=obstacle,
            goal=goal,
            rho_robot=rho_robot,
            rho_eps=rho_eps,
            rho_Z=rho_Z,
            rho_F=rho_F,
            beta_Z=beta_Z,
            beta_F=beta_F,
        )

    def sigma_of_beta(self, b: float) -> float:
        """Bump weight as a function of the proximity value: 1 for
        b <= beta_F (far), cubic in between, 0 for b >= beta_Z (near)."""
        if b <= self.beta_F:
            return 1.0
        if b >= self.beta_Z:
            return 0.0
        ca, cb, cc, cd = self.bump_coeffs
        return ((ca * b + cb) * b + cc) * b + cd


def bump_sigma(ob: ObstacleZones, r: Vec2) -> float:
    """Blend weight of the attractive field at a world point."""
    dx = r.x - ob.obstacle.center.x
    dy = r.y - ob.obstacle.center.y
    b = ob.obstacle.radius * ob.obstacle.radius - (dx * dx + dy * dy)
    return ob.sigma_of_beta(b)


def _rep_local(ob: ObstacleZones, lx: float, ly: float) -> tuple[float, float]:
    """Raw repulsive field of one obstacle at goal-frame coordinates.

    Tangential lam = 1 member on the side of the zone facing away from the
    goal, straight lam = 0 push on the goal side; the two branch formulas
    agree on the dividing line, so the field is continuous.
    """
    dx = lx - ob._clx
    dy = ly - ob._cly
    if ob._plx * dx + ob._ply * dy >= 0.0:
        return _field(1.0, ob._plx, ob._ply, dx, dy)
    r2 = dx * dx + dy * dy
    return -ob._plx * r2, -ob._ply * r2


def _rep_unit_local(ob: ObstacleZones, lx: float, ly: float) -> tuple[float, float]:
    fx, fy = _rep_local(ob, lx, ly)
    n2 = fx * fx + fy * fy
    if n2 < NORM_EPS_SQ:
        return 0.0, 0.0
    inv = 1.0 / math.sqrt(n2)
    return fx * inv, fy * inv


def repulsive_field(ob: ObstacleZones, r: Vec2) -> Vec2:
    """Raw (unnormalized) repulsive field of one obstacle at a world point."""
    loc = ob.goal.to_local(r)
    fx, fy = _rep_local(ob, loc.x, loc.y)
    return ob.goal.vec_to_world(Vec2(fx, fy))


def repulsive_normalized(ob: ObstacleZones, r: Vec2) -> Vec2:
    """Unit repulsive direction; zero on the singular ray of the tangential
    branch (the axis segment facing away from the goal) and at the center."""
    loc = ob.goal.to_local(r)
    fx, fy = _rep_unit_local(ob, loc.x, loc.y)
    return ob.goal.vec_to_world(Vec2(fx, fy))


def _sigma_world(ob: ObstacleZones, x: float, y: float) -> tuple[float, float]:
    """(sigma, beta) of one zone at world coordinates."""
    dx = x - ob.obstacle.center.x
    dy = y - ob.obstacle.center.y
    b = ob.obstacle.radius * ob.obstacle.radius - (dx * dx + dy * dy)
    return ob.sigma_of_beta(b), b


def blend_single(ob: ObstacleZones, goal: GoalFrame, r: Vec2) -> Vec2:
    """Single-obstacle blended plan sigma * F_att + (1 - sigma) * F_rep,
    both factors unit-normalized.

    Keeps the exact operation ordering of the world kernel so that a world
    holding one active obstacle reproduces this value bit for bit.
    """
    if goal != ob.goal:
        raise ValueError("zone was derived for a different goal frame")
    sig, b = _sigma_world(ob, r.x, r.y)
    if b > 0.0:
        raise InvalidQueryError("query point is inside the obstacle disk")
    loc = goal.to_local(r)
    ax, ay = _dipole_unit_local(loc.x, loc.y)
    sum_x = 0.0
    sum_y = 0.0
    if sig != 1.0:
        ux, uy = _rep_local(ob, loc.x, loc.y)
        n2 = ux * ux + uy * uy
        if n2 >= NORM_EPS_SQ:
            inv = (1.0 - sig) / math.sqrt(n2)
            sum_x += ux * inv
            sum_y += uy * inv
    fx = sig * ax + sum_x
    fy = sig * ay + sum_y
    return goal.vec_to_world(Vec2(fx, fy))


@dataclass(frozen=True, slots=True)
class StaticWorld:
    """A goal, a robot radius, and the zone geometry of every obstacle.

    Construction validates the placement rules the blending scheme needs:
    safety circles of distinct obstacles must not intersect, and the goal
    must lie outside every influence circle (so the plan is purely
    attractive, hence zero, at the goal itself).
    """

    goal: GoalFrame
    robot_radius: float
    obstacles: tuple[ObstacleZones, ...]
    # per-obstacle constants flattened for the evaluation kernel:
    # (cx, cy, rad2, rhoF2, clx, cly, plx, ply, betaF, betaZ, ca, cb, cc, cd)
    _flat: tuple[tuple[float, ...], ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.robot_radius < 0.0:
            raise ScenarioError("robot radius must be non-negative")
        for i, ob in enumerate(self.obstacles):
            if ob.goal != self.goal:
                raise ScenarioError(f"obstacle {i}: zones derived for a different goal frame")
            if ob.rho_robot != self.robot_radius:
                raise ScenarioError(f"obstacle {i}: zones derived for a different robot radius")
            d = (ob.obstacle.center - self.goal.position).norm()
            if d < ob.rho_F:
                raise ScenarioError(
                    f"goal lies inside the influence circle of obstacle {i} "
                    f"(distance {d:.6g} < rho_F {ob.rho_F:.6g})"
                )
        for i in range(len(self.obstacles)):
            for j in range(i + 1, len(self.obstacles)):
                oi = self.obstacles[i]
                oj = self.obstacles[j]
                d = (oi.obstacle.center - oj.obstacle.center).norm()
                need = oi.rho_Z + oj.rho_Z
                if d < need:
                    raise ScenarioError(
                        f"obstacle clearance violated: obstacles {i} and {j} are "
                        f"{d:.6g} apart, need at least rho_Z_i + rho_Z_j = {need:.6g}"
                    )
        flat = tuple(
            (
                ob.obstacle.center.x,
                ob.obstacle.center.y,
                ob.obstacle.radius * ob.obstacle.radius,
                ob.rho_F * ob.rho_F,
                ob._clx,
                ob._cly,
                ob._plx,
                ob._ply,
                ob.beta_F,
                ob.beta_Z,
                *ob.bump_coeffs,
            )
            for ob in self.obstacles
        )
        object.__setattr__(self, "_flat", flat)

    @classmethod
    def from_obstacles(
        cls,
        goal: GoalFrame,
        robot_radius: float,
        rho_eps: float,
        obstacles: list[Obstacle] | tuple[Obstacle, ...],
        rho_F: list[float | None] | None = None,
    ) -> "StaticWorld":
        if rho_F is None:
            rho_F = [None] * len(obstacles)
        zones = tuple(
            ObstacleZones.around(ob, goal, robot_radius, rho_eps, rf)
            for ob, rf in zip(obstacles, rho_F)
        )
        return cls(goal=goal, robot_radius=robot_radius, obstacles=zones)

    def clearance(self, r: Vec2) -> float:
        """Distance from the robot disk at r to the nearest obstacle disk
        (inf when the world has no obstacles)."""
        best = math.inf
        for ob in self.obstacles:
            d = (r - ob.obstacle.center).norm() - ob.obstacle.radius - self.robot_radius
            if d < best:
                best = d
        return best


def _plan_xy(world: StaticWorld, x: float, y: float) -> tuple[float, float]:
    """Blended plan kernel on raw world coordinates (hot path).

    prod(sigma_i) * F_att + sum((1 - sigma_i) * F_rep_i), with the attractive
    and every repulsive factor unit-normalized.  Raises when the query lies
    strictly inside an obstacle disk.
    """
    goal = world.goal
    dxg = x - goal.position.x
    dyg = y - goal.position.y
    ch = goal.cos_h
    sh = goal.sin_h
    lx = ch * dxg + sh * dyg
    ly = -sh * dxg + ch * dyg
    ax, ay = _dipole_unit_local(lx, ly)

    sig_prod = 1.0
    sum_x = 0.0
    sum_y = 0.0
    for idx, (cx, cy, rad2, rhoF2, clx, cly, plx, ply, bF, bZ, ca, cb, cc, cd) in enumerate(
        world._flat
    ):
        dx = x - cx
        dy = y - cy
        d2 = dx * dx + dy * dy
        if d2 > rhoF2:
            continue  # sigma = 1, no repulsive contribution
        b = rad2 - d2
        if b > 0.0:
            raise InvalidQueryError(f"query point is inside obstacle {idx}")
        if b <= bF:
            sig = 1.0
        elif b >= bZ:
            sig = 0.0
        else:
            sig = ((ca * b + cb) * b + cc) * b + cd
        sig_prod *= sig
        if sig != 1.0:
            # repulsive branch in goal-frame coordinates
            rx = lx - clx
            ry = ly - cly
            if plx * rx + ply * ry >= 0.0:
                ux, uy = _field(1.0, plx, ply, rx, ry)
            else:
                r2 = rx * rx + ry * ry
                ux = -plx * r2
                uy = -ply * r2
            n2 = ux * ux + uy * uy
            if n2 >= NORM_EPS_SQ:
                inv = (1.0 - sig) / math.sqrt(n2)
                sum_x += ux * inv
                sum_y += uy * inv
    fx = sig_prod * ax + sum_x
    fy = sig_prod * ay + sum_y
    return ch * fx - sh * fy, sh * fx + ch * fy


def motion_plan(world: StaticWorld, r: Vec2) -> Vec2:
    """Blended feedback plan of the whole world at a world point."""
    fx, fy = _plan_xy(world, r.x, r.y)
    return Vec2(fx, fy)
