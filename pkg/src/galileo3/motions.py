"""Ambient-space primitives: points, vectors, isotropy, distance, motions.

The affine model is used throughout: a motion translates x, shears the
(y, z)-plane linearly in x and rotates it by a fixed angle.  The distance
between two points is the difference of x-coordinates unless both points
lie in the special plane x = 0, where it degenerates to the Euclidean
distance of the (y, z)-parts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "Point3",
    "Vector3",
    "GalileanMotion",
    "galilean_distance",
    "classify_vector",
    "is_isotropic",
    "ISOTROPIC",
    "NON_ISOTROPIC",
]

ISOTROPIC = "isotropic"
NON_ISOTROPIC = "non-isotropic"


@dataclass(frozen=True)
class Point3:
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class Vector3:
    x: float
    y: float
    z: float

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)


def galilean_distance(a: Point3, b: Point3) -> float:
    """|Δx| when either point leaves the plane x = 0, else Euclidean in (y, z)."""
    if a.x != 0.0 or b.x != 0.0:
        return abs(b.x - a.x)
    return math.hypot(b.y - a.y, b.z - a.z)


def classify_vector(v: Vector3) -> str:
    """Isotropic iff the x-component vanishes exactly.  Zero vector is an error."""
    if v.x == 0.0 and v.y == 0.0 and v.z == 0.0:
        raise ValueError("zero vector has no isotropy class")
    return ISOTROPIC if v.x == 0.0 else NON_ISOTROPIC


def is_isotropic(v: Vector3, tol: float = 1e-12) -> bool:
    """Tolerant isotropy test for numerically produced tangents."""
    if v.x == 0.0 and v.y == 0.0 and v.z == 0.0:
        raise ValueError("zero vector has no isotropy class")
    return abs(v.x) < tol


@dataclass(frozen=True)
class GalileanMotion:
    """The 6-parameter motion (a, b, c, d, e, theta).

    Applied to (x, y, z):

        x' = a + x
        y' = b + c*x + cos(theta)*y + sin(theta)*z
        z' = d + e*x - sin(theta)*y + cos(theta)*z
    """

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0
    e: float = 0.0
    theta: float = 0.0

    @staticmethod
    def identity() -> "GalileanMotion":
        return GalileanMotion()

    def apply(self, p: Point3) -> Point3:
        ct, st = math.cos(self.theta), math.sin(self.theta)
        return Point3(
            self.a + p.x,
            self.b + self.c * p.x + ct * p.y + st * p.z,
            self.d + self.e * p.x - st * p.y + ct * p.z,
        )

    def apply_vector(self, v: Vector3) -> Vector3:
        """Linear part only (direction vectors are translation-free)."""
        ct, st = math.cos(self.theta), math.sin(self.theta)
        return Vector3(
            v.x,
            self.c * v.x + ct * v.y + st * v.z,
            self.e * v.x - st * v.y + ct * v.z,
        )

    def compose(self, other: "GalileanMotion") -> "GalileanMotion":
        """Motion equal to applying ``other`` first, then ``self``."""
        ct, st = math.cos(self.theta), math.sin(self.theta)
        return GalileanMotion(
            a=self.a + other.a,
            b=self.b + self.c * other.a + ct * other.b + st * other.d,
            c=self.c + ct * other.c + st * other.e,
            d=self.d + self.e * other.a - st * other.b + ct * other.d,
            e=self.e - st * other.c + ct * other.e,
            theta=self.theta + other.theta,
        )

    def inverse(self) -> "GalileanMotion":
        ct, st = math.cos(self.theta), math.sin(self.theta)
        c_inv = -ct * self.c + st * self.e
        e_inv = -st * self.c - ct * self.e
        return GalileanMotion(
            a=-self.a,
            b=-c_inv * self.a - ct * self.b + st * self.d,
            c=c_inv,
            d=-e_inv * self.a - st * self.b - ct * self.d,
            e=e_inv,
            theta=-self.theta,
        )
