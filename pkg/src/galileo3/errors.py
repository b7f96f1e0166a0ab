"""Exception types shared across the package."""

from __future__ import annotations


class GeometryError(Exception):
    """Base class for every error raised by this package."""


class JetDomainError(GeometryError):
    """A jet operation left the domain of an elementary function.

    Raised for division by a zero-valued jet, sqrt/log/asin of an
    out-of-range argument, and non-finite results.
    """

    def __init__(self, reason: str, function: str | None = None, value: float | None = None):
        self.reason = reason
        self.function = function
        self.value = value
        detail = reason
        if function is not None:
            detail = f"{function}: {reason}"
        if value is not None:
            detail = f"{detail} (argument value {value!r})"
        super().__init__(detail)


class ExprError(GeometryError):
    """Tokenising or parsing failed.

    ``position`` is the byte offset of the offending input, ``kind`` is one
    of ``"syntax"``, ``"unknown-identifier"``, ``"arity"``.
    """

    def __init__(self, message: str, position: int, kind: str = "syntax"):
        self.position = position
        self.kind = kind
        super().__init__(f"{message} (byte offset {position})")


class ExprEvalError(GeometryError):
    """Evaluation of an expression failed at a concrete parameter point."""

    def __init__(self, reason: str, subexpr: str, point: dict | None = None):
        self.reason = reason
        self.subexpr = subexpr
        self.point = dict(point) if point else None
        detail = f"{reason} in subexpression '{subexpr}'"
        if self.point:
            at = ", ".join(f"{k}={v!r}" for k, v in sorted(self.point.items()))
            detail = f"{detail} at {at}"
        super().__init__(detail)


class NonUnitSpeedError(GeometryError):
    """Curve invariants were requested for a curve that is not unit speed."""


class VanishingCurvatureError(GeometryError):
    """Torsion was requested at a point where the curvature vanishes."""


class InadmissibleError(GeometryError):
    """A curve or surface violates the admissibility requirement."""


class DegenerateSurfaceError(GeometryError):
    """The normal is numerically undefined (W below threshold) at a point."""


class ValidationError(GeometryError):
    """A constructor precondition failed."""


class SceneError(GeometryError):
    """A CLI scene file is malformed or inconsistent."""
