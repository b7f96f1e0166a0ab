"""One-parameter maps into Galilean 3-space and their invariants.

A curve is admissible when its tangent never becomes isotropic, i.e. the
first coordinate has nonvanishing derivative.  Curvature and torsion are
defined for unit-speed admissible curves (x' = +-1):

    kappa = sqrt(y''^2 + z''^2)
    tau   = det(r', r'', r''') / kappa^2

The library rejects non-unit-speed curves instead of reparametrizing them;
``shift_parameter`` provides the affine change s -> s - s0 for curves that
are unit speed up to a parameter offset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Union

from . import expr as ex
from .errors import (
    InadmissibleError,
    NonUnitSpeedError,
    VanishingCurvatureError,
)
from .jets import Jet1
from .motions import GalileanMotion

__all__ = [
    "Curve",
    "AdmissibilityResult",
    "UnitSpeedResult",
    "PLANAR",
    "SPACE",
    "MIXED",
    "coordinate_jets",
    "is_admissible",
    "curvature",
    "torsion",
    "classify_planarity",
    "is_planar",
    "is_space_curve",
    "check_isotropic_unit_speed",
    "shift_parameter",
    "transform_curve",
]

CoordFn = Union[ex.ExprNode, Callable[[Jet1], Jet1]]

ISOTROPY_TOL = 1e-12
UNIT_SPEED_TOL = 1e-9
CURVATURE_TOL = 1e-12
TORSION_ZERO_TOL = 1e-9  # |tau| below this counts as zero (pure rounding of exact jets)
DEFAULT_SAMPLES = 101

PLANAR = "planar"
SPACE = "space"
MIXED = "mixed"


@dataclass(frozen=True)
class Curve:
    """Coordinate functions of one parameter plus a closed parameter interval."""

    x: CoordFn
    y: CoordFn
    z: CoordFn
    var: str = "u"
    domain: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        lo, hi = self.domain
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValueError(f"domain must be finite with lo < hi, got {self.domain}")

    def grid(self, samples: int = DEFAULT_SAMPLES) -> list[float]:
        if samples < 2:
            raise ValueError("need at least 2 samples")
        lo, hi = self.domain
        step = (hi - lo) / (samples - 1)
        return [lo + i * step for i in range(samples)]


class AdmissibilityResult(NamedTuple):
    ok: bool
    witness: float | None  # a parameter with (nearly) isotropic tangent


class UnitSpeedResult(NamedTuple):
    ok: bool
    max_residual: float  # max |p'^2 + q'^2 - 1|
    max_accel_residual: float  # max |p'p'' + q'q''|


def _coord_jet(coord: CoordFn, s: float, var: str) -> Jet1:
    if isinstance(coord, ex.ExprNode):
        return ex.eval_jet1(coord, s, var)
    out = coord(Jet1.seed(s))
    if not isinstance(out, Jet1):
        out = Jet1.constant(out)
    return out


def coordinate_jets(c: Curve, s: float) -> tuple[Jet1, Jet1, Jet1]:
    return (
        _coord_jet(c.x, s, c.var),
        _coord_jet(c.y, s, c.var),
        _coord_jet(c.z, s, c.var),
    )


def _x_slope(c: Curve, s: float) -> float:
    return _coord_jet(c.x, s, c.var).c1


def is_admissible(c: Curve, samples: int = DEFAULT_SAMPLES) -> AdmissibilityResult:
    """Tangent never isotropic: |x'| above threshold on the grid, and no sign
    change of x' between neighbouring samples (a sign change pins a root,
    located by bisection and reported as the witness)."""
    grid = c.grid(samples)
    slopes = [_x_slope(c, s) for s in grid]
    for s, slope in zip(grid, slopes):
        if abs(slope) <= ISOTROPY_TOL:
            return AdmissibilityResult(False, s)
    for i in range(len(grid) - 1):
        if slopes[i] * slopes[i + 1] < 0.0:
            lo, hi = grid[i], grid[i + 1]
            flo = slopes[i]
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                fm = _x_slope(c, mid)
                if flo * fm <= 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            return AdmissibilityResult(False, 0.5 * (lo + hi))
    return AdmissibilityResult(True, None)


def _require_unit_speed(xj: Jet1, s: float):
    if abs(abs(xj.c1) - 1.0) > UNIT_SPEED_TOL:
        raise NonUnitSpeedError(
            f"curve is not unit speed at s={s!r}: x'={xj.c1!r} (expected +-1)"
        )


def curvature(c: Curve, s: float) -> float:
    """kappa(s) = sqrt(y''^2 + z''^2) for a unit-speed admissible curve."""
    xj, yj, zj = coordinate_jets(c, s)
    _require_unit_speed(xj, s)
    return math.hypot(yj.c2, zj.c2)


def torsion(c: Curve, s: float) -> float:
    """tau(s) = det(r', r'', r''') / kappa^2; requires kappa > 0."""
    xj, yj, zj = coordinate_jets(c, s)
    _require_unit_speed(xj, s)
    kappa_sq = yj.c2 * yj.c2 + zj.c2 * zj.c2
    if kappa_sq <= CURVATURE_TOL * CURVATURE_TOL:
        raise VanishingCurvatureError(f"curvature vanishes at s={s!r}")
    det = (
        xj.c1 * (yj.c2 * zj.c3 - zj.c2 * yj.c3)
        - yj.c1 * (xj.c2 * zj.c3 - zj.c2 * xj.c3)
        + zj.c1 * (xj.c2 * yj.c3 - yj.c2 * xj.c3)
    )
    return det / kappa_sq


def classify_planarity(c: Curve, samples: int = DEFAULT_SAMPLES) -> str:
    """Three-valued verdict from grid torsion: planar (|tau| ~ 0 wherever
    defined, or kappa identically 0), space (|tau| bounded away from 0 at
    every sample), else mixed."""
    taus = []
    for s in c.grid(samples):
        xj, yj, zj = coordinate_jets(c, s)
        _require_unit_speed(xj, s)
        kappa_sq = yj.c2 * yj.c2 + zj.c2 * zj.c2
        if kappa_sq <= CURVATURE_TOL * CURVATURE_TOL:
            continue
        taus.append(torsion(c, s))
    if not taus:
        return PLANAR  # kappa vanishes identically: a line, trivially planar
    abs_taus = [abs(t) for t in taus]
    if max(abs_taus) < TORSION_ZERO_TOL:
        return PLANAR
    if min(abs_taus) > TORSION_ZERO_TOL and len(taus) == samples:
        return SPACE
    return MIXED


def is_planar(c: Curve, samples: int = DEFAULT_SAMPLES) -> bool:
    return classify_planarity(c, samples) == PLANAR


def is_space_curve(c: Curve, samples: int = DEFAULT_SAMPLES) -> bool:
    return classify_planarity(c, samples) == SPACE


def check_isotropic_unit_speed(
    c: Curve, samples: int = DEFAULT_SAMPLES
) -> UnitSpeedResult:
    """For a curve (0, p(s), q(s)): residual of p'^2 + q'^2 = 1 on the grid,
    plus the differentiated identity p'p'' + q'q'' = 0."""
    max_res = 0.0
    max_acc = 0.0
    for s in c.grid(samples):
        xj, yj, zj = coordinate_jets(c, s)
        if abs(xj.c0) > ISOTROPY_TOL or abs(xj.c1) > ISOTROPY_TOL:
            raise InadmissibleError(
                f"curve is not isotropic at s={s!r}: x={xj.c0!r}, x'={xj.c1!r}"
            )
        res = abs(yj.c1 * yj.c1 + zj.c1 * zj.c1 - 1.0)
        acc = abs(yj.c1 * yj.c2 + zj.c1 * zj.c2)
        max_res = max(max_res, res)
        max_acc = max(max_acc, acc)
    return UnitSpeedResult(max_res < UNIT_SPEED_TOL, max_res, max_acc)


def shift_parameter(c: Curve, s0: float) -> Curve:
    """Affine reparametrization s -> s - s0 (domain shifts accordingly)."""
    lo, hi = c.domain

    def shifted(coord: CoordFn) -> CoordFn:
        if isinstance(coord, ex.ExprNode):
            return ex.substitute(coord, c.var, ex.sub(ex.var(c.var), ex.const(s0)))
        return lambda js, _f=coord: _f(js - s0)

    return Curve(shifted(c.x), shifted(c.y), shifted(c.z), c.var, (lo + s0, hi + s0))


def transform_curve(m: GalileanMotion, c: Curve) -> Curve:
    """Curve whose coordinate functions are the motion applied pointwise."""
    ct, st = math.cos(m.theta), math.sin(m.theta)
    if all(isinstance(f, ex.ExprNode) for f in (c.x, c.y, c.z)):
        x, y, z = c.x, c.y, c.z

        def lin(k0: float, kx: float, ky: float, kz: float) -> ex.ExprNode:
            node = ex.add(ex.const(k0), ex.mul(ex.const(kx), x))
            node = ex.add(node, ex.mul(ex.const(ky), y))
            return ex.add(node, ex.mul(ex.const(kz), z))

        return Curve(
            ex.add(ex.const(m.a), x),
            lin(m.b, m.c, ct, st),
            lin(m.d, m.e, -st, ct),
            c.var,
            c.domain,
        )

    def component(coord: CoordFn, js):
        if isinstance(coord, ex.ExprNode):
            return ex.evaluate(coord, {c.var: js})
        return coord(js)

    fx, fy, fz = c.x, c.y, c.z
    new_x = lambda js: m.a + component(fx, js)
    new_y = lambda js: (
        m.b + m.c * component(fx, js) + ct * component(fy, js) + st * component(fz, js)
    )
    new_z = lambda js: (
        m.d + m.e * component(fx, js) - st * component(fy, js) + ct * component(fz, js)
    )
    return Curve(new_x, new_y, new_z, c.var, c.domain)
