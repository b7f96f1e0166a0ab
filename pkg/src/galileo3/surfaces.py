"""Two-parameter maps into Galilean 3-space and their curvature machinery.

For an admissible surface r(u, v) = (x, y, z) write x_i, y_i, z_i for the
first partials and x_ij etc. for the second.  The ingredients computed here:

    g_i  = x_i                    (metric part along the non-isotropic direction)
    h_ij = y_i y_j + z_i z_j      (metric of the isotropic projection)
    W    = sqrt((x_1 z_2 - x_2 z_1)^2 + (x_2 y_1 - x_1 y_2)^2)
    N    = (0, -x_1 z_2 + x_2 z_1, x_1 y_2 - x_2 y_1) / W
    L_ij = (g_k (0, y_ij, z_ij) - x_ij (0, y_k, z_k)) . N / g_k   (k with g_k != 0)

    K = (L_11 L_22 - L_12^2) / W^2
    H = (g_2^2 L_11 - 2 g_1 g_2 L_12 + g_1^2 L_22) / (2 W^2)

Two mean-curvature conventions are exposed: ``canonical`` carries the 1/2
factor of the definition above; ``doubled`` is exactly twice that and is the
convention every specialized constant-curvature formula in this package
normalizes to.  Both are returned so theorem-level checks can quote the
doubled value while the definition stays available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Union

from . import expr as ex
from .errors import DegenerateSurfaceError, InadmissibleError
from .jets import Jet2, fd_jet2
from .motions import GalileanMotion, Vector3

__all__ = [
    "Surface",
    "FundamentalData",
    "MeanCurvature",
    "SurfaceAdmissibility",
    "coordinate_jets",
    "fundamental",
    "gaussian_curvature",
    "mean_curvature",
    "curvatures",
    "curvatures_fd",
    "is_admissible_surface",
    "transform_surface",
]

CoordFn = Union[ex.ExprNode, Callable[[Jet2, Jet2], Jet2]]

ADMISSIBILITY_TOL = 1e-12
DEGENERACY_TOL = 1e-12
BRANCH_TOL = 1e-9


@dataclass(frozen=True)
class Surface:
    """Coordinate functions of two parameters on a rectangular domain."""

    x: CoordFn
    y: CoordFn
    z: CoordFn
    u_var: str = "u"
    v_var: str = "v"
    domain: tuple[tuple[float, float], tuple[float, float]] = ((0.0, 1.0), (0.0, 1.0))

    def __post_init__(self):
        for lo, hi in self.domain:
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValueError(f"bad domain {self.domain}")

    def grid(self, nu: int, nv: int) -> tuple[list[float], list[float]]:
        if nu < 2 or nv < 2:
            raise ValueError("grid must be at least 2x2")
        (ulo, uhi), (vlo, vhi) = self.domain
        du = (uhi - ulo) / (nu - 1)
        dv = (vhi - vlo) / (nv - 1)
        return (
            [ulo + i * du for i in range(nu)],
            [vlo + j * dv for j in range(nv)],
        )


class MeanCurvature(NamedTuple):
    canonical: float  # the 1/2-weighted definition
    doubled: float  # twice canonical; the convention of the specialized formulas


class SurfaceAdmissibility(NamedTuple):
    ok: bool
    witness: tuple[float, float] | None


@dataclass(frozen=True)
class FundamentalData:
    """Everything the curvatures need at one parameter point."""

    u: float
    v: float
    g1: float
    g2: float
    h11: float
    h12: float
    h22: float
    epsilon: int  # isotropy flag of the v-coordinate direction (0, 1)
    w: float
    normal: Vector3
    l11: float
    l12: float
    l22: float

    def epsilon_of(self, du1: float, du2: float) -> int:
        """1 when the tangent direction du1 : du2 is isotropic, else 0."""
        return 1 if abs(self.g1 * du1 + self.g2 * du2) <= ADMISSIBILITY_TOL else 0

    def line_element(self, du1: float, du2: float) -> float:
        """ds^2 of the direction, with the isotropic part only where needed."""
        eps = self.epsilon_of(du1, du2)
        lin = self.g1 * du1 + self.g2 * du2
        quad = (
            self.h11 * du1 * du1
            + 2.0 * self.h12 * du1 * du2
            + self.h22 * du2 * du2
        )
        return lin * lin + eps * quad

    def gaussian(self) -> float:
        return (self.l11 * self.l22 - self.l12 * self.l12) / (self.w * self.w)

    def mean(self) -> MeanCurvature:
        canonical = (
            self.g2 * self.g2 * self.l11
            - 2.0 * self.g1 * self.g2 * self.l12
            + self.g1 * self.g1 * self.l22
        ) / (2.0 * self.w * self.w)
        return MeanCurvature(canonical, 2.0 * canonical)


def _coord_jet2(coord: CoordFn, ju: Jet2, jv: Jet2, names: tuple[str, str]) -> Jet2:
    if isinstance(coord, ex.ExprNode):
        out = ex.evaluate(coord, {names[0]: ju, names[1]: jv})
    else:
        out = coord(ju, jv)
    if not isinstance(out, Jet2):
        out = Jet2.constant(out)
    return out


def coordinate_jets(s: Surface, u: float, v: float) -> tuple[Jet2, Jet2, Jet2]:
    ju, jv = Jet2.seed_u(u), Jet2.seed_v(v)
    names = (s.u_var, s.v_var)
    xj = _coord_jet2(s.x, ju, jv, names)
    yj = _coord_jet2(s.y, ju, jv, names)
    zj = _coord_jet2(s.z, ju, jv, names)
    for j in (xj, yj, zj):
        if not j.is_finite():
            raise DegenerateSurfaceError(
                f"non-finite coordinate jet at (u, v)=({u!r}, {v!r})"
            )
    return xj, yj, zj


def _assemble(u, v, x, y, z, branch):
    """Build FundamentalData from partials given as 6-tuples
    (value, d_u, d_v, d_uu, d_uv, d_vv)."""
    _, x1, x2, x11, x12, x22 = x
    _, y1, y2, y11, y12, y22 = y
    _, z1, z2, z11, z12, z22 = z
    g1, g2 = x1, x2
    if max(abs(g1), abs(g2)) <= ADMISSIBILITY_TOL:
        raise InadmissibleError(
            f"Euclidean tangent plane at (u, v)=({u!r}, {v!r}): g1=g2=0"
        )
    a = x1 * z2 - x2 * z1
    b = x2 * y1 - x1 * y2
    w = math.hypot(a, b)
    if w <= DEGENERACY_TOL:
        raise DegenerateSurfaceError(
            f"normal undefined at (u, v)=({u!r}, {v!r}): W={w!r}"
        )
    ny, nz = -a / w + 0.0, -b / w + 0.0  # +0.0 normalizes -0.0 for clean output
    normal = Vector3(0.0, ny, nz)
    if branch is None:
        branch = 1 if abs(g1) >= abs(g2) else 2
    if branch == 1:
        gk, yk, zk = g1, y1, z1
    else:
        gk, yk, zk = g2, y2, z2
    if gk == 0.0:
        raise DegenerateSurfaceError(
            f"L branch {branch} unavailable at (u, v)=({u!r}, {v!r}): divisor is zero"
        )

    def l_ij(yij, zij, xij):
        return ((gk * yij - xij * yk) * ny + (gk * zij - xij * zk) * nz) / gk

    return FundamentalData(
        u=u,
        v=v,
        g1=g1,
        g2=g2,
        h11=y1 * y1 + z1 * z1,
        h12=y1 * y2 + z1 * z2,
        h22=y2 * y2 + z2 * z2,
        epsilon=1 if abs(g2) <= ADMISSIBILITY_TOL else 0,
        w=w,
        normal=normal,
        l11=l_ij(y11, z11, x11),
        l12=l_ij(y12, z12, x12),
        l22=l_ij(y22, z22, x22),
    )


def _jet_tuple(j: Jet2):
    return (j.c00, j.c10, j.c01, j.c20, j.c11, j.c02)


def fundamental(s: Surface, u: float, v: float, branch: int | None = None) -> FundamentalData:
    """First and second fundamental data at (u, v) from exact jets.

    ``branch`` forces the g1 (1) or g2 (2) divisor of the L_ij formula; by
    default the larger magnitude is used for stability.  Both branches agree
    up to rounding whenever both divisors are safely nonzero.
    """
    xj, yj, zj = coordinate_jets(s, u, v)
    return _assemble(u, v, _jet_tuple(xj), _jet_tuple(yj), _jet_tuple(zj), branch)


def gaussian_curvature(s: Surface, u: float, v: float) -> float:
    return fundamental(s, u, v).gaussian()


def mean_curvature(s: Surface, u: float, v: float) -> MeanCurvature:
    return fundamental(s, u, v).mean()


def curvatures(s: Surface, u: float, v: float) -> tuple[float, MeanCurvature]:
    fd = fundamental(s, u, v)
    return fd.gaussian(), fd.mean()


def curvatures_fd(
    s: Surface, u: float, v: float, h: float = 1e-4
) -> tuple[float, MeanCurvature]:
    """Independent curvature route: all partials by central finite
    differences of the coordinate values, then the same algebra.

    The default step balances truncation against value-rounding noise for
    second derivatives at double precision.
    """
    names = (s.u_var, s.v_var)

    def value_fn(coord: CoordFn):
        if isinstance(coord, ex.ExprNode):
            return lambda a, b: ex.eval_value(coord, {names[0]: a, names[1]: b})
        return lambda a, b: (
            lambda out: out.c00 if isinstance(out, Jet2) else float(out)
        )(coord(Jet2.constant(a), Jet2.constant(b)))

    x = fd_jet2(value_fn(s.x), u, v, h)
    y = fd_jet2(value_fn(s.y), u, v, h)
    z = fd_jet2(value_fn(s.z), u, v, h)
    data = _assemble(u, v, x, y, z, None)
    return data.gaussian(), data.mean()


def is_admissible_surface(
    s: Surface, grid: tuple[int, int] = (21, 21)
) -> SurfaceAdmissibility:
    """No Euclidean tangent planes: max(|g1|, |g2|) above threshold at every
    grid node."""
    us, vs = s.grid(*grid)
    names = (s.u_var, s.v_var)
    for u in us:
        for v in vs:
            ju, jv = Jet2.seed_u(u), Jet2.seed_v(v)
            xj = _coord_jet2(s.x, ju, jv, names)
            if max(abs(xj.c10), abs(xj.c01)) <= ADMISSIBILITY_TOL:
                return SurfaceAdmissibility(False, (u, v))
    return SurfaceAdmissibility(True, None)


def transform_surface(m: GalileanMotion, s: Surface) -> Surface:
    """Surface whose coordinate functions are the motion applied pointwise."""
    ct, st = math.cos(m.theta), math.sin(m.theta)
    if all(isinstance(f, ex.ExprNode) for f in (s.x, s.y, s.z)):
        x, y, z = s.x, s.y, s.z

        def lin(k0: float, kx: float, ky: float, kz: float) -> ex.ExprNode:
            node = ex.add(ex.const(k0), ex.mul(ex.const(kx), x))
            node = ex.add(node, ex.mul(ex.const(ky), y))
            return ex.add(node, ex.mul(ex.const(kz), z))

        return Surface(
            ex.add(ex.const(m.a), x),
            lin(m.b, m.c, ct, st),
            lin(m.d, m.e, -st, ct),
            s.u_var,
            s.v_var,
            s.domain,
        )

    names = (s.u_var, s.v_var)
    fx, fy, fz = s.x, s.y, s.z

    def component(coord, ju, jv):
        return _coord_jet2(coord, ju, jv, names)

    new_x = lambda ju, jv: m.a + component(fx, ju, jv)
    new_y = lambda ju, jv: (
        m.b
        + m.c * component(fx, ju, jv)
        + ct * component(fy, ju, jv)
        + st * component(fz, ju, jv)
    )
    new_z = lambda ju, jv: (
        m.d
        + m.e * component(fx, ju, jv)
        - st * component(fy, ju, jv)
        + ct * component(fz, ju, jv)
    )
    return Surface(new_x, new_y, new_z, s.u_var, s.v_var, s.domain)
