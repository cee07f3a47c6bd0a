"""Exception types raised by the library.

The CLI maps these onto distinct process exit codes, so keep the hierarchy
coarse: configuration problems, invalid field queries, and runtime safety
violations are the only categories callers need to tell apart.
"""


class VfieldError(Exception):
    """Base class for all library errors."""


class ScenarioError(VfieldError):
    """A scenario file or world description failed validation."""


class InvalidQueryError(VfieldError):
    """A field was queried at a point where it is not defined
    (e.g. inside an obstacle disk)."""


class DegenerateGeometryError(VfieldError):
    """Two entities coincide where a direction between them is required."""


class ProtocolViolationError(VfieldError):
    """The multi-agent safety contract was broken during stepping."""
