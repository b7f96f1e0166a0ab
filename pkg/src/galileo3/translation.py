"""Constructors for translation-surface families and their closed forms.

A translation surface is r(u, v) = alpha(u) + beta(v).  The five types
classify by planarity/isotropy of the translating curves; this module
builds:

* the standard type-1/2 parametrizations and their affine generalization
  z = f(a11 x + a12 y) + g(a21 x + a22 y),
* every constant-curvature representative: the constant-K graph built from
  an isotropic unit-speed profile, the constant-H cylinders, the minimal
  ruled surface over a parabolic base, the translating-circle family, and
  the constant-H surface whose profile solves an ODE (integrated here by
  fixed-step RK4 and evaluated through a cubic Hermite interpolant),
* ruled surfaces r(u, v) = (u, x(u) + v y(u), v z(u)).

Each constructor returns a ``SurfaceFamily`` carrying the realized surface,
the specialized closed-form curvatures where they exist (always equal to
the general machinery up to rounding; the closed-form H uses the doubled
convention), and numeric diagnostics of the construction.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from . import expr as ex
from .curves import Curve, check_isotropic_unit_speed
from .errors import ValidationError
from .jets import Jet1, Jet2, value_of
from .surfaces import Surface, is_admissible_surface

__all__ = [
    "AffineMatrix",
    "SurfaceFamily",
    "CubicHermite",
    "make_standard",
    "make_affine",
    "make_constant_K_type1",
    "make_cmc_cylinder",
    "make_parabolic_ruled",
    "make_type3",
    "make_type3_circle",
    "make_type4",
    "make_type4_cmc_ode",
    "make_ruled_type_C",
    "closed_form_K_affine",
    "closed_form_H_affine",
    "closed_form_K_type3",
    "closed_form_H_type3",
    "closed_form_K_type4",
    "closed_form_H_type4",
    "affine_translation_form",
    "parabolic_ruled_as_type_c",
]

SINGULAR_TOL = 1e-12
TORSION_WITNESS_TOL = 1e-9
SLOPE_TOL = 1e-9
DOMAIN_SHRINK = 0.9  # keep clear of sqrt/asin boundary singularities

Profile = Union[ex.ExprNode, Callable[[Jet1], Jet1]]


@dataclass(frozen=True)
class AffineMatrix:
    """Regular 2x2 matrix mixing the two translating directions."""

    a11: float
    a12: float
    a21: float
    a22: float

    def __post_init__(self):
        if abs(self.w) <= SINGULAR_TOL:
            raise ValidationError(f"matrix is singular: det={self.w!r}")

    @property
    def w(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21

    @staticmethod
    def identity() -> "AffineMatrix":
        return AffineMatrix(1.0, 0.0, 0.0, 1.0)


@dataclass(eq=False)
class SurfaceFamily:
    """A constructed surface plus its family-specific closed forms."""

    kind: str
    parameters: dict
    surface: Surface
    closed_k: Optional[Callable[[float, float], float]] = None
    closed_h: Optional[Callable[[float, float], float]] = None
    diagnostics: dict = field(default_factory=dict)
    alpha: Optional[Curve] = None
    beta: Optional[Curve] = None


def _jet1_of(fn: Profile, t: float) -> Jet1:
    if isinstance(fn, ex.ExprNode):
        return ex.eval_jet1(fn, t)
    out = fn(Jet1.seed(t))
    return out if isinstance(out, Jet1) else Jet1.constant(out)


def _sub1(f: ex.ExprNode, replacement: ex.ExprNode) -> ex.ExprNode:
    """Compose a one-variable expression with a replacement argument tree."""
    names = ex.free_variables(f)
    if len(names) > 1:
        raise ValidationError(
            f"expected a one-variable expression, got variables {sorted(names)}"
        )
    if not names:
        return f
    return ex.substitute(f, next(iter(names)), replacement)


def _u() -> ex.ExprNode:
    return ex.var("u")


def _v() -> ex.ExprNode:
    return ex.var("v")


def _grid1(lo: float, hi: float, n: int = 21) -> list[float]:
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def _check_admissible(surface: Surface, kind: str):
    result = is_admissible_surface(surface, (11, 11))
    if not result.ok:
        raise ValidationError(f"{kind}: inadmissible at (u, v)={result.witness!r}")


# -- standard and affine graphs --------------------------------------------


def make_standard(
    kind: str,
    f: ex.ExprNode,
    g: ex.ExprNode,
    domain: tuple[tuple[float, float], tuple[float, float]] = ((-1.0, 1.0), (-1.0, 1.0)),
) -> SurfaceFamily:
    """Orthogonal-plane translation surfaces.

    type1: (x, y, f(x) + g(y)); type2: (x + y, g(y), f(x)).
    """
    if kind not in ("type1", "type2"):
        raise ValidationError(f"kind must be type1 or type2, got {kind!r}")
    fu = _sub1(f, _u())
    gv = _sub1(g, _v())
    if kind == "type1":
        surface = Surface(_u(), _v(), ex.add(fu, gv), domain=domain)
        identity = AffineMatrix.identity()
        closed_k = lambda x, y: closed_form_K_affine(identity, f, g, x, y)
        closed_h = lambda x, y: closed_form_H_affine(identity, f, g, x, y)
    else:
        surface = Surface(ex.add(_u(), _v()), gv, fu, domain=domain)
        # Same translation structure as the type-4 graph with a vanishing
        # first profile, so those closed forms apply verbatim.
        zero = ex.const(0.0)
        closed_k = lambda u, v: closed_form_K_type4(zero, f, g, 0.0, u, v)
        closed_h = lambda u, v: closed_form_H_type4(zero, f, g, 0.0, u, v)
    family = SurfaceFamily(
        kind="type1_2_standard",
        parameters={
            "variant": kind,
            "f": ex.to_source(f),
            "g": ex.to_source(g),
            "domain": [list(domain[0]), list(domain[1])],
        },
        surface=surface,
        closed_k=closed_k,
        closed_h=closed_h,
    )
    _check_admissible(surface, "make_standard")
    return family


def make_affine(
    A: AffineMatrix,
    f: ex.ExprNode,
    g: ex.ExprNode,
    domain: tuple[tuple[float, float], tuple[float, float]] = ((-1.0, 1.0), (-1.0, 1.0)),
    kind: str = "affine",
    extra_parameters: dict | None = None,
) -> SurfaceFamily:
    """Affine translation surface (x, y, f(a11 x + a12 y) + g(a21 x + a22 y)).

    The translating curve beta (resp. alpha) is isotropic exactly when
    a12 = 0 (resp. a22 = 0); this is recorded in the parameters.
    """
    arg_f = ex.add(ex.mul(ex.const(A.a11), _u()), ex.mul(ex.const(A.a12), _v()))
    arg_g = ex.add(ex.mul(ex.const(A.a21), _u()), ex.mul(ex.const(A.a22), _v()))
    z = ex.add(_sub1(f, arg_f), _sub1(g, arg_g))
    surface = Surface(_u(), _v(), z, domain=domain)
    parameters = {
        "A": [[A.a11, A.a12], [A.a21, A.a22]],
        "f": ex.to_source(f),
        "g": ex.to_source(g),
        "domain": [list(domain[0]), list(domain[1])],
        "alpha_isotropic": A.a22 == 0.0,
        "beta_isotropic": A.a12 == 0.0,
    }
    if extra_parameters:
        parameters.update(extra_parameters)
    family = SurfaceFamily(
        kind=kind,
        parameters=parameters,
        surface=surface,
        closed_k=lambda x, y: closed_form_K_affine(A, f, g, x, y),
        closed_h=lambda x, y: closed_form_H_affine(A, f, g, x, y),
    )
    _check_admissible(surface, "make_affine")
    return family


def closed_form_K_affine(A: AffineMatrix, f: Profile, g: Profile, x: float, y: float) -> float:
    """K = w^2 f'' g'' / [1 + (a12 f' + a22 g')^2]^2 (squared bracket)."""
    fj = _jet1_of(f, A.a11 * x + A.a12 * y)
    gj = _jet1_of(g, A.a21 * x + A.a22 * y)
    bracket = 1.0 + (A.a12 * fj.c1 + A.a22 * gj.c1) ** 2
    return (A.w * A.w * fj.c2 * gj.c2) / (bracket * bracket)


def closed_form_H_affine(A: AffineMatrix, f: Profile, g: Profile, x: float, y: float) -> float:
    """H = (a12^2 f'' + a22^2 g'') / [1 + (a12 f' + a22 g')^2]^(3/2)."""
    fj = _jet1_of(f, A.a11 * x + A.a12 * y)
    gj = _jet1_of(g, A.a21 * x + A.a22 * y)
    bracket = 1.0 + (A.a12 * fj.c1 + A.a22 * gj.c1) ** 2
    return (A.a12 * A.a12 * fj.c2 + A.a22 * A.a22 * gj.c2) / bracket**1.5


def affine_translation_form(family: SurfaceFamily) -> Surface:
    """The same affine surface in translating-curve parameters:

        r(u, v) = (a22 u / w - a12 v / w,  a11 v / w - a21 u / w,  f(u) + g(v))

    Related to the graph form by x = a22 u / w - a12 v / w,
    y = a11 v / w - a21 u / w (equivalently u = a11 x + a12 y,
    v = a21 x + a22 y).  In these parameters the mixed partials of all
    three coordinates vanish identically.
    """
    p = family.parameters
    if "A" not in p:
        raise ValidationError("family has no affine matrix")
    (a11, a12), (a21, a22) = p["A"]
    A = AffineMatrix(a11, a12, a21, a22)
    f = ex.parse(p["f"], ["t"]) if isinstance(p["f"], str) else p["f"]
    g = ex.parse(p["g"], ["s"]) if isinstance(p["g"], str) else p["g"]
    w = A.w
    x = ex.add(ex.mul(ex.const(a22 / w), _u()), ex.mul(ex.const(-a12 / w), _v()))
    y = ex.add(ex.mul(ex.const(-a21 / w), _u()), ex.mul(ex.const(a11 / w), _v()))
    z = ex.add(_sub1(f, _u()), _sub1(g, _v()))
    (xlo, xhi), (ylo, yhi) = family.surface.domain
    corners_u = [a11 * cx + a12 * cy for cx in (xlo, xhi) for cy in (ylo, yhi)]
    corners_v = [a21 * cx + a22 * cy for cx in (xlo, xhi) for cy in (ylo, yhi)]
    return Surface(
        x, y, z, domain=((min(corners_u), max(corners_u)), (min(corners_v), max(corners_v)))
    )


# -- constant Gaussian curvature -------------------------------------------


def make_constant_K_type1(
    K0: float, c: float, u_domain: tuple[float, float] = (-1.0, 1.0)
) -> SurfaceFamily:
    """Type-1 surface with K identically K0 (K0, c nonzero):

        r(u, s) = (u, p(s), c u^2 / 2 + q(s))

    with q = K0 s^2 / (2 c) and p the arc-length completion
    p = s/2 sqrt(1 - (K0 s / c)^2) + (c / 2 K0) asin(K0 s / c), so that
    (0, p, q) is unit-speed isotropic and K = f'' q'' = K0 on the strip
    |s| <= 0.9 |c / K0|.
    """
    if K0 == 0.0 or c == 0.0:
        raise ValidationError("K0 and c must be nonzero")
    k = K0 / c
    s = _v()
    ks = ex.mul(ex.const(k), s)
    q = ex.mul(ex.const(K0 / (2.0 * c)), ex.pow_(s, ex.const(2.0)))
    p = ex.add(
        ex.mul(
            ex.div(s, ex.const(2.0)),
            ex.call("sqrt", ex.sub(ex.const(1.0), ex.pow_(ks, ex.const(2.0)))),
        ),
        ex.mul(ex.const(c / (2.0 * K0)), ex.call("asin", ks)),
    )
    s_max = DOMAIN_SHRINK * abs(c / K0)
    z = ex.add(ex.mul(ex.const(c / 2.0), ex.pow_(_u(), ex.const(2.0))), q)
    surface = Surface(_u(), p, z, domain=(u_domain, (-s_max, s_max)))
    beta = Curve(ex.const(0.0), p, q, var="v", domain=(-s_max, s_max))
    cu2 = ex.mul(ex.const(c / 2.0), ex.pow_(ex.var("t"), ex.const(2.0)))

    def closed_k(u: float, v: float) -> float:
        # f'' q'' with f the x-profile and q the isotropic height
        return _jet1_of(cu2, u).c2 * ex.eval_jet1(q, v, "v").c2

    family = SurfaceFamily(
        kind="constantK_type1",
        parameters={"K0": K0, "c": c, "u_domain": list(u_domain)},
        surface=surface,
        closed_k=closed_k,
        beta=beta,
    )
    _check_admissible(surface, "make_constant_K_type1")
    return family


# -- constant mean curvature cylinders --------------------------------------


def make_cmc_cylinder(
    H0: float,
    variant: str,
    f: ex.ExprNode | None = None,
    c1: float | None = None,
    A: AffineMatrix | None = None,
    x_domain: tuple[float, float] = (-1.0, 1.0),
) -> SurfaceFamily:
    """Surfaces with doubled mean curvature identically H0 (H0 nonzero).

    variant "B_i" (a12 = 0): z = f(a11 x) - (1/H0) sqrt(1 - (H0 v / a22)^2)
    with v = a21 x + a22 y; f arbitrary, dropping out of H entirely.

    variant "B_ii_1" (a12 != 0): f = c1 u with the compensating drift
    g -> g - c1 a12 v / a22, a generalized cylinder with non-isotropic
    rulings.

    The y-range is derived so |H0 v / a22| stays below 0.9 over the domain.
    """
    if H0 == 0.0:
        raise ValidationError("H0 must be nonzero")
    if A is None:
        A = AffineMatrix.identity()
    if A.a22 == 0.0:
        raise ValidationError("a22 must be nonzero")
    if variant == "B_i":
        if A.a12 != 0.0:
            raise ValidationError("variant B_i requires a12 = 0")
        if f is None:
            f = ex.const(0.0)
        drift = 0.0
    elif variant == "B_ii_1":
        if A.a12 == 0.0:
            raise ValidationError("variant B_ii_1 requires a12 != 0")
        if c1 is None:
            raise ValidationError("variant B_ii_1 requires c1")
        f = ex.mul(ex.const(c1), ex.var("t"))
        drift = -c1 * A.a12 / A.a22
    else:
        raise ValidationError(f"unknown variant {variant!r}")

    t = ex.var("s")
    root = ex.call(
        "sqrt",
        ex.sub(ex.const(1.0), ex.pow_(ex.mul(ex.const(H0 / A.a22), t), ex.const(2.0))),
    )
    g = ex.mul(ex.const(-1.0 / H0), root)
    if drift != 0.0:
        g = ex.add(g, ex.mul(ex.const(drift), t))

    v_max = DOMAIN_SHRINK * abs(A.a22 / H0)
    reach = max(abs(A.a21 * x_domain[0]), abs(A.a21 * x_domain[1]))
    y_max = (v_max - reach) / abs(A.a22)
    if y_max <= 0.0:
        raise ValidationError(
            "x-domain leaves no room for |H0 v / a22| < 1; shrink it or H0"
        )
    domain = (x_domain, (-y_max, y_max))
    params = {"H0": H0, "variant": variant, "x_domain": list(x_domain)}
    if variant == "B_ii_1":
        params["c1"] = c1
    family = make_affine(
        A, f, g, domain, kind="cmc_cylinder_" + variant, extra_parameters=params
    )

    # Residual of the defining profile equation
    # a22^2 g'' / [1 + (a12 f' + a22 g')^2]^(3/2) = H0, checked on the
    # reachable v-range by exact jets.
    corners = [
        A.a21 * cx + A.a22 * cy
        for cx in x_domain
        for cy in (-y_max, y_max)
    ]
    fp_const = c1 if variant == "B_ii_1" else 0.0
    residual = 0.0
    for vv in _grid1(min(corners), max(corners)):
        gj = ex.eval_jet1(g, vv, "s")
        bracket = 1.0 + (A.a12 * fp_const + A.a22 * gj.c1) ** 2
        residual = max(residual, abs(A.a22 * A.a22 * gj.c2 / bracket**1.5 - H0))
    family.diagnostics["cmc_profile_residual"] = residual
    return family


def make_parabolic_ruled(
    A: AffineMatrix,
    c1: float,
    domain: tuple[tuple[float, float], tuple[float, float]] = ((-1.0, 1.0), (-1.0, 1.0)),
) -> SurfaceFamily:
    """Minimal non-cylindrical ruled surface over a parabolic base:

        f(u) = c1 u^2 / (2 a12^2),  g(v) = -c1 v^2 / (2 a22^2)

    (a12 a22 != 0).  H vanishes identically while K does not (unless c1 = 0).
    """
    if A.a12 == 0.0 or A.a22 == 0.0:
        raise ValidationError("parabolic ruled surface needs a12 != 0 and a22 != 0")
    t = ex.var("t")
    s = ex.var("s")
    f = ex.mul(ex.const(c1 / (2.0 * A.a12 * A.a12)), ex.pow_(t, ex.const(2.0)))
    g = ex.mul(ex.const(-c1 / (2.0 * A.a22 * A.a22)), ex.pow_(s, ex.const(2.0)))
    return make_affine(
        A,
        f,
        g,
        domain,
        kind="parabolic_ruled",
        extra_parameters={"c1": c1},
    )


def parabolic_ruled_as_type_c(family: SurfaceFamily):
    """The ruled form of a parabolic-ruled surface.

    Returns ``(type_c_family, shift)`` with the pointwise identity

        r_parabolic(x, y) = r_type_c(x, y + shift(x)),  shift(x) = D x / (2 E)

    where D = (a11/a12)^2 - (a21/a22)^2 and E = a11/a12 - a21/a22 (E != 0
    because the matrix is regular).  The ruled data is x(u) = -D u / (2 E),
    y(u) = 1, z(u) = c1 E u.
    """
    if family.kind != "parabolic_ruled":
        raise ValidationError("expected a parabolic_ruled family")
    (a11, a12), (a21, a22) = family.parameters["A"]
    c1 = family.parameters["c1"]
    d_coef = (a11 / a12) ** 2 - (a21 / a22) ** 2
    e_coef = a11 / a12 - a21 / a22
    t = ex.var("t")
    base = ex.mul(ex.const(-d_coef / (2.0 * e_coef)), t)
    ruled = make_ruled_type_C(
        base, ex.const(1.0), ex.mul(ex.const(c1 * e_coef), t), family.surface.domain
    )
    shift = lambda x: d_coef * x / (2.0 * e_coef)
    return ruled, shift


# -- type 3: isotropic translating curve, space curve ------------------------


def _space_curve_witness(f1: Profile, f2: Profile, u_grid: list[float]) -> float:
    """min |f1'' f2''' - f1''' f2''| over the grid (nonzero torsion proxy)."""
    worst = math.inf
    for u in u_grid:
        j1 = _jet1_of(f1, u)
        j2 = _jet1_of(f2, u)
        worst = min(worst, abs(j1.c2 * j2.c3 - j1.c3 * j2.c2))
    return worst


def make_type3(
    f1: ex.ExprNode,
    f2: ex.ExprNode,
    g1: ex.ExprNode,
    g2: ex.ExprNode,
    u_domain: tuple[float, float] = (0.5, 2.0),
    v_domain: tuple[float, float] = (-0.9, 0.9),
    samples: int = 21,
    kind: str = "type3",
    extra_parameters: dict | None = None,
) -> SurfaceFamily:
    """Translation surface (u, f1(u) + g1(v), f2(u) + g2(v)) whose second
    translating curve (0, g1, g2) is unit-speed isotropic and whose first
    is a space curve."""
    beta = Curve(ex.const(0.0), _sub1(g1, _v()), _sub1(g2, _v()), var="v", domain=v_domain)
    unit = check_isotropic_unit_speed(beta, samples)
    if not unit.ok:
        raise ValidationError(
            f"translating curve is not unit speed: residual {unit.max_residual!r}"
        )
    u_grid = _grid1(*u_domain, samples)
    witness = _space_curve_witness(f1, f2, u_grid)
    if witness <= TORSION_WITNESS_TOL:
        raise ValidationError(
            f"first translating curve is not a space curve: min witness {witness!r}"
        )
    for v in _grid1(*v_domain, samples):
        if abs(ex.eval_jet1(g1, v).c1) <= SLOPE_TOL:
            raise ValidationError(f"g1' vanishes near v={v!r}")
    surface = Surface(
        _u(),
        ex.add(_sub1(f1, _u()), _sub1(g1, _v())),
        ex.add(_sub1(f2, _u()), _sub1(g2, _v())),
        domain=(u_domain, v_domain),
    )
    alpha = Curve(ex.var("u"), _sub1(f1, _u()), _sub1(f2, _u()), var="u", domain=u_domain)
    parameters = {
        "f1": ex.to_source(f1),
        "f2": ex.to_source(f2),
        "g1": ex.to_source(g1),
        "g2": ex.to_source(g2),
        "u_domain": list(u_domain),
        "v_domain": list(v_domain),
    }
    if extra_parameters:
        parameters.update(extra_parameters)
    family = SurfaceFamily(
        kind=kind,
        parameters=parameters,
        surface=surface,
        closed_k=lambda u, v: closed_form_K_type3(f1, f2, g1, g2, u, v),
        closed_h=lambda u, v: closed_form_H_type3(g1, g2, v),
        diagnostics={
            "unit_speed_residual": unit.max_residual,
            "space_curve_witness": witness,
        },
        alpha=alpha,
        beta=beta,
    )
    _check_admissible(surface, "make_type3")
    return family


def closed_form_K_type3(
    f1: Profile, f2: Profile, g1: Profile, g2: Profile, u: float, v: float
) -> float:
    """K = -(g2'' / g1') (f1'' g2' - f2'' g1')."""
    j1 = _jet1_of(f1, u)
    j2 = _jet1_of(f2, u)
    k1 = _jet1_of(g1, v)
    k2 = _jet1_of(g2, v)
    return -(k2.c2 / k1.c1) * (j1.c2 * k2.c1 - j2.c2 * k1.c1)


def closed_form_H_type3(g1: Profile, g2: Profile, v: float) -> float:
    """H = g2'' / g1' (doubled convention)."""
    k1 = _jet1_of(g1, v)
    k2 = _jet1_of(g2, v)
    return k2.c2 / k1.c1


def make_type3_circle(
    H0: float,
    f1: ex.ExprNode,
    f2: ex.ExprNode,
    u_domain: tuple[float, float] = (0.5, 2.0),
) -> SurfaceFamily:
    """Type-3 surface translating a Euclidean circle of radius 1/|H0|:

        g1 = sin(|H0| v) / |H0|,  g2 = cos(|H0| v) / |H0|

    The doubled mean curvature is identically -|H0| with this orientation;
    both profiles satisfy g''' + H0^2 g' = 0.
    """
    if H0 == 0.0:
        raise ValidationError("H0 must be nonzero")
    m = abs(H0)
    s = ex.var("s")
    g1 = ex.div(ex.call("sin", ex.mul(ex.const(m), s)), ex.const(m))
    g2 = ex.div(ex.call("cos", ex.mul(ex.const(m), s)), ex.const(m))
    v_half = DOMAIN_SHRINK * math.pi / (2.0 * m)
    family = make_type3(
        f1,
        f2,
        g1,
        g2,
        u_domain,
        (-v_half, v_half),
        kind="type3_circle",
        extra_parameters={"H0": H0},
    )
    radius_err = 0.0
    ode_res = 0.0
    for v in _grid1(-v_half, v_half):
        k1 = ex.eval_jet1(g1, v)
        k2 = ex.eval_jet1(g2, v)
        radius_err = max(radius_err, abs(math.hypot(k1.c0, k2.c0) - 1.0 / m))
        ode_res = max(
            ode_res,
            abs(k1.c3 + H0 * H0 * k1.c1),
            abs(k2.c3 + H0 * H0 * k2.c1),
        )
    family.diagnostics["circle_radius_residual"] = radius_err
    family.diagnostics["harmonic_ode_residual"] = ode_res
    return family


# -- type 4: planar non-isotropic translating curve, space curve -------------


def make_type4(
    f1: Profile,
    f2: ex.ExprNode,
    g: ex.ExprNode,
    a: float,
    u_domain: tuple[float, float] = (0.5, 2.0),
    v_domain: tuple[float, float] = (-1.0, 1.0),
    grid: tuple[int, int] = (21, 21),
    kind: str = "type4",
    extra_parameters: dict | None = None,
    skip_space_check: bool = False,
) -> SurfaceFamily:
    """Translation surface (u + v, f1(u) + g(v), f2(u) + a v)."""
    u_grid = _grid1(*u_domain, grid[0])
    v_grid = _grid1(*v_domain, grid[1])
    if not skip_space_check:
        witness = _space_curve_witness(f1, f2, u_grid)
        if witness <= TORSION_WITNESS_TOL:
            raise ValidationError(
                f"first translating curve is not a space curve: min witness {witness!r}"
            )
    else:
        witness = None
    g_slopes = [(v, _jet1_of(g, v).c1) for v in v_grid]
    for u in u_grid:
        j1 = _jet1_of(f1, u)
        j2 = _jet1_of(f2, u)
        for v, gp in g_slopes:
            w = math.hypot(j2.c1 - a, j1.c1 - gp)
            if w <= SINGULAR_TOL:
                raise ValidationError(
                    f"degenerate normal (W = {w!r}) at (u, v)=({u!r}, {v!r})"
                )
    if isinstance(f1, ex.ExprNode):
        y = ex.add(_sub1(f1, _u()), _sub1(g, _v()))
        f1_param = ex.to_source(f1)
    else:
        g_v = _sub1(g, _v())

        def y(ju: Jet2, jv: Jet2, _f1=f1, _g=g_v):
            return _f1(ju) + ex.evaluate(_g, {"v": jv})

        f1_param = "<numeric profile>"
    z = ex.add(_sub1(f2, _u()), ex.mul(ex.const(a), _v()))
    surface = Surface(ex.add(_u(), _v()), y, z, domain=(u_domain, v_domain))
    parameters = {
        "f1": f1_param,
        "f2": ex.to_source(f2),
        "g": ex.to_source(g),
        "a": a,
        "u_domain": list(u_domain),
        "v_domain": list(v_domain),
    }
    if extra_parameters:
        parameters.update(extra_parameters)
    diagnostics = {}
    if witness is not None:
        diagnostics["space_curve_witness"] = witness
    family = SurfaceFamily(
        kind=kind,
        parameters=parameters,
        surface=surface,
        closed_k=lambda u, v: closed_form_K_type4(f1, f2, g, a, u, v),
        closed_h=lambda u, v: closed_form_H_type4(f1, f2, g, a, u, v),
        diagnostics=diagnostics,
    )
    _check_admissible(surface, "make_type4")
    return family


def closed_form_K_type4(
    f1: Profile, f2: Profile, g: Profile, a: float, u: float, v: float
) -> float:
    """K = g'' [f1'' (f2' - a)^2 - f2'' (f2' - a)(f1' - g')] / W^4."""
    j1 = _jet1_of(f1, u)
    j2 = _jet1_of(f2, u)
    gj = _jet1_of(g, v)
    d2 = j2.c1 - a
    d1 = j1.c1 - gj.c1
    denom = (d2 * d2 + d1 * d1) ** 2
    return gj.c2 * (j1.c2 * d2 * d2 - j2.c2 * d2 * d1) / denom


def closed_form_H_type4(
    f1: Profile, f2: Profile, g: Profile, a: float, u: float, v: float
) -> float:
    """H = [(f2'-a) g'' + (f2'-a) f1'' - (f1'-g') f2''] / W^3 (doubled)."""
    j1 = _jet1_of(f1, u)
    j2 = _jet1_of(f2, u)
    gj = _jet1_of(g, v)
    d2 = j2.c1 - a
    d1 = j1.c1 - gj.c1
    denom = (d2 * d2 + d1 * d1) ** 1.5
    return (d2 * gj.c2 + d2 * j1.c2 - d1 * j2.c2) / denom


# -- type 4, constant H via numerical profile --------------------------------


class CubicHermite:
    """Piecewise-cubic interpolant with prescribed knot values and slopes.

    Evaluable on floats and jets: the local cubic is evaluated with whatever
    arithmetic the argument supports, so jets of the interpolant are the
    exact jets of the piecewise polynomial.
    """

    def __init__(self, knots: list[float], values: list[float], slopes: list[float]):
        if not (len(knots) == len(values) == len(slopes)) or len(knots) < 2:
            raise ValueError("need matching knot/value/slope lists, length >= 2")
        self.knots = list(knots)
        self.values = list(values)
        self.slopes = list(slopes)

    def __call__(self, x):
        t0 = value_of(x)
        if t0 < self.knots[0] or t0 > self.knots[-1]:
            raise ValidationError(
                f"interpolant evaluated at {t0!r}, outside "
                f"[{self.knots[0]!r}, {self.knots[-1]!r}]"
            )
        i = min(bisect_right(self.knots, t0) - 1, len(self.knots) - 2)
        i = max(i, 0)
        h = self.knots[i + 1] - self.knots[i]
        y0, y1 = self.values[i], self.values[i + 1]
        m0, m1 = self.slopes[i], self.slopes[i + 1]
        d = (y1 - y0) / h
        c2 = (3.0 * d - 2.0 * m0 - m1) / h
        c3 = (m0 + m1 - 2.0 * d) / (h * h)
        t = x - self.knots[i]
        return ((c3 * t + c2) * t + m0) * t + y0


def _rk4_profile(H0, f2, a, c1, u0, u_end, f1_0, f1p_0, steps):
    """Integrate f1'' = [H0 B^(3/2) + (f1'-c1) f2''] / (f2'-a),
    B = (f2'-a)^2 + (f1'-c1)^2, by fixed-step RK4."""
    h = (u_end - u0) / steps

    def rhs(u, f1p):
        j2 = ex.eval_jet1(f2, u)
        d = j2.c1 - a
        if abs(d) <= 1e-6:
            raise ValidationError(f"f2' - a too close to zero at u={u!r}")
        s = f1p - c1
        b = d * d + s * s
        return (H0 * b**1.5 + s * j2.c2) / d

    us = [u0 + i * h for i in range(steps + 1)]
    us[-1] = u_end
    values, slopes = [f1_0], [f1p_0]
    y, yp = f1_0, f1p_0
    for i in range(steps):
        u = us[i]
        k1v, k1p = yp, rhs(u, yp)
        k2v, k2p = yp + 0.5 * h * k1p, rhs(u + 0.5 * h, yp + 0.5 * h * k1p)
        k3v, k3p = yp + 0.5 * h * k2p, rhs(u + 0.5 * h, yp + 0.5 * h * k2p)
        k4v, k4p = yp + h * k3p, rhs(u + h, yp + h * k3p)
        y = y + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        yp = yp + (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        values.append(y)
        slopes.append(yp)
    accels = [rhs(u, yp) for u, yp in zip(us, slopes)]
    return us, values, slopes, accels


def make_type4_cmc_ode(
    H0: float,
    f2: ex.ExprNode,
    a: float,
    c1: float,
    u0: float,
    u_end: float,
    f1_0: float,
    f1p_0: float,
    steps: int = 1000,
    v_domain: tuple[float, float] = (-1.0, 1.0),
) -> SurfaceFamily:
    """Type-4 surface with doubled mean curvature identically H0, g = c1 v.

    The first profile f1 solves the defining second-order ODE, integrated by
    fixed-step RK4 and realized as a cubic Hermite interpolant so the
    surface stays evaluable by jets.  Diagnostics record the step-halving
    drift at u_end, the residual of the first-integral identity
    sgn(f2'-a) H0 (f2 - a u) + C = sigma / sqrt(1 + sigma^2) with
    sigma = (f1' - c1)/(f2' - a), and the space-curve witness recovered by
    finite differences of the integrated profile.
    """
    if H0 == 0.0:
        raise ValidationError("H0 must be nonzero")
    if steps < 100:
        raise ValidationError("need at least 100 steps")
    if not u0 < u_end:
        raise ValidationError("need u0 < u_end")
    us, values, slopes, accels = _rk4_profile(
        H0, f2, a, c1, u0, u_end, f1_0, f1p_0, steps
    )
    us2, values2, _, _ = _rk4_profile(H0, f2, a, c1, u0, u_end, f1_0, f1p_0, 2 * steps)
    drift = abs(values[-1] - values2[-1])

    sign = 1.0 if ex.eval_jet1(f2, us[0]).c1 - a > 0.0 else -1.0
    constant = None
    identity_residual = 0.0
    for u, yp in zip(us, slopes):
        j2 = ex.eval_jet1(f2, u)
        sigma = (yp - c1) / (j2.c1 - a)
        lhs = sign * H0 * (j2.c0 - a * u)
        rhs_val = sigma / math.sqrt(1.0 + sigma * sigma)
        if constant is None:
            constant = rhs_val - lhs
        identity_residual = max(identity_residual, abs(lhs + constant - rhs_val))

    h = us[1] - us[0]
    torsion_witness = math.inf
    for i in range(1, len(us) - 1):
        f1ppp = (accels[i + 1] - accels[i - 1]) / (2.0 * h)
        j2 = ex.eval_jet1(f2, us[i])
        torsion_witness = min(torsion_witness, abs(accels[i] * j2.c3 - f1ppp * j2.c2))
    if torsion_witness <= TORSION_WITNESS_TOL:
        raise ValidationError(
            f"integrated profile loses the space-curve property: witness {torsion_witness!r}"
        )

    f1 = CubicHermite(us, values, slopes)
    g = ex.mul(ex.const(c1), ex.var("s"))
    family = make_type4(
        f1,
        f2,
        g,
        a,
        (u0, u_end),
        v_domain,
        kind="type4_cmc_ode",
        extra_parameters={
            "H0": H0,
            "c1": c1,
            "u0": u0,
            "u_end": u_end,
            "f1_0": f1_0,
            "f1p_0": f1p_0,
            "steps": steps,
        },
        skip_space_check=True,
    )
    family.diagnostics.update(
        {
            "step_halving_drift": drift,
            "first_integral_residual": identity_residual,
            "space_curve_witness_fd": torsion_witness,
        }
    )
    return family


# -- ruled surfaces of conoidal form ----------------------------------------


def make_ruled_type_C(
    x: ex.ExprNode,
    y: ex.ExprNode,
    z: ex.ExprNode,
    domain: tuple[tuple[float, float], tuple[float, float]] = ((-1.0, 1.0), (-1.0, 1.0)),
) -> SurfaceFamily:
    """Ruled surface r(u, v) = (u, x(u) + v y(u), v z(u))."""
    xu = _sub1(x, _u())
    yu = _sub1(y, _u())
    zu = _sub1(z, _u())
    surface = Surface(
        _u(),
        ex.add(xu, ex.mul(_v(), yu)),
        ex.mul(_v(), zu),
        domain=domain,
    )
    family = SurfaceFamily(
        kind="ruled_type_C",
        parameters={
            "x": ex.to_source(x),
            "y": ex.to_source(y),
            "z": ex.to_source(z),
            "domain": [list(domain[0]), list(domain[1])],
        },
        surface=surface,
    )
    _check_admissible(surface, "make_ruled_type_C")
    return family
