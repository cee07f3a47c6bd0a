"""A two-parameter family of planar quadratic vector fields used as motion
plans.

Each member is F(r) = lam * (p . r) r - p (r . r) for a shape parameter
``lam`` and a nonzero axis vector ``p``.  The family has a single singular
point at the origin for lam != 1 and is quadratically homogeneous.  The
values of ``lam`` used elsewhere in the package:

* lam = 0: field co-linear with -p everywhere (straight-line flow),
* lam = 1: tangential circulation that vanishes on the whole line
  spanned by p,
* lam = 2: dipole whose integral curves all reach the origin tangent to
  the p axis, which is what makes it usable as a goal-convergent plan
  with a prescribed arrival heading.

Negative ``lam`` values are legal everywhere in this module; they produce
mirrored/repelling phase portraits and render fine, they are just not used
by the planners.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import NORM_EPS_SQ, GoalFrame, Vec2

__all__ = [
    "FieldParams",
    "eval_field",
    "normalize_attractive",
    "field_determinant",
    "reflect_about",
    "integral_curve_invariant",
    "attractive_normalized",
]


@dataclass(frozen=True, slots=True)
class FieldParams:
    """Shape parameter and axis vector of one family member."""

    lam: float
    p: Vec2

    def __post_init__(self) -> None:
        if not math.isfinite(self.lam):
            raise ValueError("lam must be finite")
        if self.p.norm_sq() == 0.0:
            raise ValueError("axis vector p must be nonzero")


def _field(lam: float, px: float, py: float, x: float, y: float) -> tuple[float, float]:
    """Componentwise field kernel on raw floats (hot path)."""
    fx = (lam - 1.0) * px * x * x + lam * py * x * y - px * y * y
    fy = (lam - 1.0) * py * y * y + lam * px * x * y - py * x * x
    return fx, fy


def eval_field(params: FieldParams, r: Vec2) -> Vec2:
    """Evaluate the field at a point."""
    fx, fy = _field(params.lam, params.p.x, params.p.y, r.x, r.y)
    return Vec2(fx, fy)


def normalize_attractive(params: FieldParams, r: Vec2) -> Vec2:
    """Unit-norm attractive field (lam = 2 member), zero at the singular
    point.

    The direction is what the planners consume; magnitude is delegated to
    the speed law.  Callers are expected to pass a lam = 2 parameter set.
    """
    fx, fy = _field(params.lam, params.p.x, params.p.y, r.x, r.y)
    n2 = fx * fx + fy * fy
    if n2 < NORM_EPS_SQ:
        return Vec2(0.0, 0.0)
    inv = 1.0 / math.sqrt(n2)
    return Vec2(fx * inv, fy * inv)


def field_determinant(params: FieldParams, r: Vec2) -> float:
    """Determinant of the linear map A(lam, r) with F = A p.

    Computed from the explicit 2x2 entries; algebraically this equals
    -(lam - 1) (x^2 + y^2)^2, which is the identity the tests check.
    """
    lam = params.lam
    x, y = r.x, r.y
    a11 = (lam - 1.0) * x * x - y * y
    a12 = lam * x * y
    a21 = lam * x * y
    a22 = (lam - 1.0) * y * y - x * x
    return a11 * a22 - a12 * a21


def reflect_about(p: Vec2, v: Vec2) -> Vec2:
    """Reflect a vector about the axis spanned by p.

    Uses the reflection matrix [[cos 2phi, sin 2phi], [sin 2phi, -cos 2phi]]
    with phi the polar angle of p.  The field family commutes with this
    reflection, which pins its mirror symmetry in tests.
    """
    if p.norm_sq() == 0.0:
        raise ValueError("reflection axis must be nonzero")
    phi = math.atan2(p.y, p.x)
    c2 = math.cos(2.0 * phi)
    s2 = math.sin(2.0 * phi)
    return Vec2(c2 * v.x + s2 * v.y, s2 * v.x - c2 * v.y)


def integral_curve_invariant(lam: float, r: Vec2) -> float:
    """Conserved quantity (x^2 + y^2)^(lam/2) / y^(lam-1) along integral
    curves of the p = [1, 0] member.

    Constant along trajectories of dr/dt = F(r), which is how the field
    family is validated against an integrator.  For lam = 1 this is the
    distance from the origin (circular curves); for lam = 0 it reduces to
    the height y (straight lines).  Undefined on the separatrix y = 0 for
    other lam, and for y < 0 whenever lam - 1 is not an integer (the real
    power does not exist there).
    """
    x, y = r.x, r.y
    if lam == 0.0 and y == 0.0:
        return 0.0
    if y == 0.0 and lam != 1.0:
        raise ValueError(f"invariant undefined on y = 0 for lam = {lam}")
    if y < 0.0 and not float(lam - 1.0).is_integer():
        raise ValueError(f"invariant undefined for y < 0 with non-integer lam - 1 = {lam - 1.0}")
    return (x * x + y * y) ** (lam / 2.0) / y ** (lam - 1.0)


# -- goal-frame attractive direction -----------------------------------------

def _dipole_unit_local(x: float, y: float) -> tuple[float, float]:
    """Unit lam = 2, p = [1, 0] field in goal-local coordinates (hot path)."""
    fx = x * x - y * y
    fy = 2.0 * x * y
    n2 = fx * fx + fy * fy
    if n2 < NORM_EPS_SQ:
        return 0.0, 0.0
    inv = 1.0 / math.sqrt(n2)
    return fx * inv, fy * inv


def attractive_normalized(goal: GoalFrame, r: Vec2) -> Vec2:
    """Unit attractive direction toward a goal configuration.

    Evaluates the nominal dipole in the goal frame (where the arrival axis
    is local +x) and rotates the direction back to world axes.  Zero exactly
    at the goal point.
    """
    loc = goal.to_local(r)
    fx, fy = _dipole_unit_local(loc.x, loc.y)
    return goal.vec_to_world(Vec2(fx, fy))
