"""Planar vector and frame primitives shared by the field, blending and
simulation layers.

Everything here is plain 2D float arithmetic.  Angles are radians and are
always normalized to the half-open interval (-pi, pi].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# A direction whose squared norm falls below this is treated as zero when
# normalizing (norm below 1e-12).
NORM_EPS_SQ = 1e-24

TWO_PI = 2.0 * math.pi


def wrap_angle(a: float) -> float:
    """Normalize an angle to (-pi, pi]."""
    r = math.remainder(a, TWO_PI)
    if r == -math.pi:
        return math.pi
    return r


@dataclass(frozen=True, slots=True)
class Vec2:
    """An immutable planar vector with finite components."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"Vec2 components must be finite, got ({self.x}, {self.y})")

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, s: float) -> "Vec2":
        return Vec2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Vec2") -> float:
        """z-component of the 3D cross product."""
        return self.x * other.y - self.y * other.x

    def norm_sq(self) -> float:
        return self.x * self.x + self.y * self.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def angle(self) -> float:
        return math.atan2(self.y, self.x)

    def normalized(self) -> "Vec2":
        """Unit vector in the same direction, or the zero vector when the
        norm is below the singular threshold."""
        n2 = self.x * self.x + self.y * self.y
        if n2 < NORM_EPS_SQ:
            return Vec2(0.0, 0.0)
        inv = 1.0 / math.sqrt(n2)
        return Vec2(self.x * inv, self.y * inv)

    def rotated(self, angle: float) -> "Vec2":
        c = math.cos(angle)
        s = math.sin(angle)
        return Vec2(c * self.x - s * self.y, s * self.x + c * self.y)


def unit(angle: float) -> Vec2:
    return Vec2(math.cos(angle), math.sin(angle))


@dataclass(frozen=True, slots=True)
class GoalFrame:
    """A goal configuration (position plus arrival heading).

    Goal-directed fields are evaluated in this frame: queries are translated
    by the goal position and rotated by -heading, so the nominal attractive
    axis is the local +x axis.  Field vectors are rotated back to world axes
    afterwards.  The rotation terms are cached because frame transforms sit
    inside every plan evaluation.
    """

    position: Vec2
    heading: float
    cos_h: float = field(init=False, repr=False)
    sin_h: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "cos_h", math.cos(self.heading))
        object.__setattr__(self, "sin_h", math.sin(self.heading))

    def to_local(self, r: Vec2) -> Vec2:
        """World point -> goal-frame coordinates."""
        dx = r.x - self.position.x
        dy = r.y - self.position.y
        return Vec2(self.cos_h * dx + self.sin_h * dy,
                    -self.sin_h * dx + self.cos_h * dy)

    def vec_to_world(self, v: Vec2) -> Vec2:
        """Goal-frame direction -> world axes (rotation only)."""
        return Vec2(self.cos_h * v.x - self.sin_h * v.y,
                    self.sin_h * v.x + self.cos_h * v.y)
