import math

import pytest

from galileo3 import expr as ex
from galileo3.curves import check_isotropic_unit_speed
from galileo3.errors import ValidationError
from galileo3.jets import Jet1
from galileo3.surfaces import (
    coordinate_jets,
    curvatures,
    gaussian_curvature,
    mean_curvature,
)
from galileo3.translation import (
    AffineMatrix,
    CubicHermite,
    affine_translation_form,
    closed_form_H_affine,
    closed_form_H_type3,
    closed_form_H_type4,
    closed_form_K_affine,
    closed_form_K_type3,
    closed_form_K_type4,
    make_affine,
    make_cmc_cylinder,
    make_constant_K_type1,
    make_parabolic_ruled,
    make_ruled_type_C,
    make_standard,
    make_type3,
    make_type3_circle,
    make_type4,
    make_type4_cmc_ode,
    parabolic_ruled_as_type_c,
)


def P(source, variables):
    return ex.parse(source, variables)


def points_of(surface, u, v):
    return tuple(j.c00 for j in coordinate_jets(surface, u, v))


def grid_extrema(family, fn, grid=(21, 21)):
    us, vs = family.surface.grid(*grid)
    values = [fn(u, v) for u in us for v in vs]
    return min(values), max(values)


def max_closed_form_gap(family, grid=(21, 21)):
    """max over the grid of |closed K - K| and |closed H - doubled H|."""
    us, vs = family.surface.grid(*grid)
    gap_k = gap_h = 0.0
    for u in us:
        for v in vs:
            k, h = curvatures(family.surface, u, v)
            if family.closed_k is not None:
                gap_k = max(gap_k, abs(family.closed_k(u, v) - k))
            if family.closed_h is not None:
                gap_h = max(gap_h, abs(family.closed_h(u, v) - h.doubled))
    return gap_k, gap_h


class TestAffineMatrix:
    def test_determinant(self):
        assert AffineMatrix(1, 2, 3, 4).w == -2.0

    def test_singular_rejected(self):
        with pytest.raises(ValidationError):
            AffineMatrix(1, 2, 2, 4)


class TestStandard:
    def test_type1_realization(self):
        fam = make_standard("type1", P("x^2", ["x"]), P("y^2", ["y"]))
        assert fam.kind == "type1_2_standard"
        for u, v in ((0.3, -0.7), (1.0, 1.0)):
            assert points_of(fam.surface, u, v) == (u, v, u * u + v * v)

    def test_type2_realization(self):
        fam = make_standard("type2", P("x^2", ["x"]), P("y^3", ["y"]),
                            domain=((0.5, 1.5), (0.5, 1.5)))
        for u, v in ((0.6, 0.9), (1.2, 0.8)):
            assert points_of(fam.surface, u, v) == (u + v, v**3, u * u)

    def test_flat_plane(self):
        fam = make_standard("type1", ex.const(0.0), ex.const(0.0))
        lo, hi = grid_extrema(
            fam, lambda u, v: gaussian_curvature(fam.surface, u, v), (7, 7)
        )
        assert lo == hi == 0.0
        lo, hi = grid_extrema(
            fam, lambda u, v: mean_curvature(fam.surface, u, v).doubled, (7, 7)
        )
        assert lo == hi == 0.0

    def test_unknown_variant_rejected(self):
        with pytest.raises(ValidationError):
            make_standard("type7", ex.const(0.0), ex.const(0.0))

    def test_type2_closed_forms_match_machinery(self):
        fam = make_standard("type2", P("x^2", ["x"]), P("y^3", ["y"]),
                            domain=((0.5, 1.5), (0.5, 1.5)))
        gap_k, gap_h = max_closed_form_gap(fam)
        assert gap_k < 1e-9
        assert gap_h < 1e-9


class TestAffine:
    def test_identity_matches_standard(self):
        fam = make_affine(AffineMatrix.identity(), P("u^2", ["u"]), P("v^2", ["v"]))
        assert points_of(fam.surface, 0.7, -0.2) == (0.7, -0.2, 0.7**2 + 0.2**2)
        assert fam.parameters["beta_isotropic"] is True
        assert fam.parameters["alpha_isotropic"] is False

    def test_shear_expansion(self):
        # f((x+y)) + g(y) with f = t^2/2, g = -s^2/2 collapses to x^2/2 + xy
        fam = make_affine(
            AffineMatrix(1, 1, 0, 1), P("t^2/2", ["t"]), P("-s^2/2", ["s"])
        )
        for x, y in ((0.4, 0.9), (-0.8, 0.3)):
            _, _, z = points_of(fam.surface, x, y)
            assert z == pytest.approx(x * x / 2 + x * y, abs=1e-15)

    def test_linear_profile_is_flat(self):
        fam = make_affine(
            AffineMatrix(0.8, 0.5, 0.3, 1.1), P("2*t+1", ["t"]), P("s^2", ["s"])
        )
        us, vs = fam.surface.grid(11, 11)
        for u in us:
            for v in vs:
                assert abs(gaussian_curvature(fam.surface, u, v)) < 1e-12

    def test_closed_form_values(self):
        ident = AffineMatrix.identity()
        f, g = P("u^2", ["u"]), P("v^2", ["v"])
        assert closed_form_K_affine(ident, f, g, 1.0, 1.0) == pytest.approx(0.16, abs=1e-15)
        assert closed_form_H_affine(ident, f, g, 1.0, 1.0) == pytest.approx(
            2.0 / 5.0**1.5, abs=1e-15
        )
        linear_f, linear_g = P("2*u", ["u"]), P("3*v", ["v"])
        a = AffineMatrix(1.0, 0.7, -0.4, 1.2)
        assert closed_form_K_affine(a, linear_f, linear_g, 0.3, 0.8) == 0.0
        assert closed_form_H_affine(a, linear_f, linear_g, 0.3, 0.8) == 0.0

    def test_closed_forms_match_machinery(self):
        fam = make_affine(
            AffineMatrix(1.0, 0.6, -0.3, 1.2), P("sin(t)", ["t"]), P("s^2", ["s"])
        )
        gap_k, gap_h = max_closed_form_gap(fam)
        assert gap_k < 1e-9
        assert gap_h < 1e-9

    def test_translation_form_matches_graph_form(self):
        a = AffineMatrix(1.0, 0.6, -0.3, 1.2)
        fam = make_affine(a, P("sin(t)", ["t"]), P("s^2", ["s"]))
        tf = affine_translation_form(fam)
        for u, v in ((0.2, -0.4), (0.9, 0.7)):
            x = a.a22 * u / a.w - a.a12 * v / a.w
            y = a.a11 * v / a.w - a.a21 * u / a.w
            assert points_of(tf, u, v) == pytest.approx(
                points_of(fam.surface, x, y), abs=1e-12
            )
        # in translating-curve parameters the mixed partials vanish exactly
        for j in coordinate_jets(tf, 0.3, 0.8):
            assert j.c11 == 0.0


class TestConstantK:
    @pytest.mark.parametrize("k0,c", [(1.0, 1.0), (2.0, 1.0), (-0.5, 2.0)])
    def test_gaussian_curvature_constant(self, k0, c):
        fam = make_constant_K_type1(k0, c)
        us, vs = fam.surface.grid(15, 15)
        for u in us:
            for v in vs:
                assert gaussian_curvature(fam.surface, u, v) == pytest.approx(
                    k0, abs=1e-8
                )

    def test_profile_is_unit_speed(self):
        fam = make_constant_K_type1(1.0, 1.0)
        ok, residual, _ = check_isotropic_unit_speed(fam.beta)
        assert ok
        assert residual < 1e-9

    def test_zero_parameters_rejected(self):
        with pytest.raises(ValidationError):
            make_constant_K_type1(0.0, 1.0)
        with pytest.raises(ValidationError):
            make_constant_K_type1(1.0, 0.0)

    def test_closed_form_tracks_general(self):
        fam = make_constant_K_type1(3.0, 1.0)
        gap_k, _ = max_closed_form_gap(fam)
        assert gap_k < 1e-9


class TestCmcCylinder:
    def test_b_i_constant_mean(self):
        fam = make_cmc_cylinder(0.5, "B_i", f=P("t^3", ["t"]))
        assert fam.surface.domain[1] == pytest.approx((-1.8, 1.8))
        us, vs = fam.surface.grid(15, 15)
        for u in us:
            for v in vs:
                assert mean_curvature(fam.surface, u, v).doubled == pytest.approx(
                    0.5, abs=1e-8
                )

    def test_profile_drops_out(self):
        lumpy = make_cmc_cylinder(0.5, "B_i", f=P("t^3", ["t"]))
        flat = make_cmc_cylinder(0.5, "B_i")
        for u, v in ((0.2, 0.9), (-0.7, -1.2)):
            assert mean_curvature(lumpy.surface, u, v).doubled == pytest.approx(
                mean_curvature(flat.surface, u, v).doubled, abs=1e-12
            )

    def test_profile_equation_residual(self):
        for h0 in (0.25, 0.5, 1.0):
            fam = make_cmc_cylinder(h0, "B_i", f=P("sin(t)", ["t"]))
            assert fam.diagnostics["cmc_profile_residual"] < 1e-9

    def test_b_ii_1_with_general_matrix(self):
        a = AffineMatrix(1.0, 0.5, 0.3, 1.2)
        fam = make_cmc_cylinder(1.0, "B_ii_1", c1=0.7, A=a, x_domain=(-0.5, 0.5))
        assert fam.diagnostics["cmc_profile_residual"] < 1e-9
        us, vs = fam.surface.grid(11, 11)
        for u in us:
            for v in vs:
                assert mean_curvature(fam.surface, u, v).doubled == pytest.approx(
                    1.0, abs=1e-8
                )
                assert abs(gaussian_curvature(fam.surface, u, v)) < 1e-12

    def test_variant_preconditions(self):
        with pytest.raises(ValidationError):
            make_cmc_cylinder(0.5, "B_i", A=AffineMatrix(1.0, 0.5, 0.0, 1.0))
        with pytest.raises(ValidationError):
            make_cmc_cylinder(0.5, "B_ii_1", A=AffineMatrix.identity(), c1=1.0)
        with pytest.raises(ValidationError):
            make_cmc_cylinder(0.0, "B_i")
        with pytest.raises(ValidationError):
            # a21 reach eats the whole safe strip
            make_cmc_cylinder(2.0, "B_i", A=AffineMatrix(1.0, 0.0, 9.0, 1.0))

    def test_closed_forms_match_machinery(self):
        fam = make_cmc_cylinder(0.5, "B_i", f=P("t^3", ["t"]))
        gap_k, gap_h = max_closed_form_gap(fam)
        assert gap_k < 1e-9
        assert gap_h < 1e-9


class TestParabolicRuled:
    def test_minimal_with_nonzero_k(self):
        fam = make_parabolic_ruled(AffineMatrix(1, 1, 0, 1), 1.0)
        us, vs = fam.surface.grid(15, 15)
        for u in us:
            for v in vs:
                assert abs(mean_curvature(fam.surface, u, v).doubled) < 1e-9
        assert gaussian_curvature(fam.surface, 0.0, 0.0) == pytest.approx(-1.0, abs=1e-12)

    def test_expansion_collapses(self):
        fam = make_parabolic_ruled(AffineMatrix(1, 1, 0, 1), 1.0)
        for x, y in ((0.4, -0.6), (0.9, 0.2)):
            _, _, z = points_of(fam.surface, x, y)
            assert z == pytest.approx(x * x / 2 + x * y, abs=1e-15)

    def test_matches_ruled_type_c_after_reparametrization(self):
        fam = make_parabolic_ruled(AffineMatrix(1.2, 0.8, 0.5, 1.5), 0.7)
        ruled, shift = parabolic_ruled_as_type_c(fam)
        for x, y in ((0.3, 0.4), (-0.7, 0.2), (0.9, -0.8)):
            direct = points_of(fam.surface, x, y)
            via_ruled = points_of(ruled.surface, x, y + shift(x))
            assert direct == pytest.approx(via_ruled, abs=1e-12)

    def test_zero_coefficient_degenerates_to_plane(self):
        fam = make_parabolic_ruled(AffineMatrix(1, 1, 0, 1), 0.0)
        for u, v in ((0.3, 0.6), (-0.5, -0.5)):
            k, h = curvatures(fam.surface, u, v)
            assert k == 0.0 and h.doubled == 0.0

    def test_requires_mixing_entries(self):
        with pytest.raises(ValidationError):
            make_parabolic_ruled(AffineMatrix.identity(), 1.0)


class TestType3:
    def test_valid_construction(self):
        fam = make_type3(
            P("u^2", ["u"]), P("u^3", ["u"]), P("sin(v)", ["v"]), P("cos(v)", ["v"]),
            v_domain=(-1.2, 1.2),
        )
        assert fam.diagnostics["space_curve_witness"] == pytest.approx(12.0)
        assert points_of(fam.surface, 1.0, 0.0) == (1.0, 1.0 + 0.0, 1.0 + 1.0)

    def test_non_unit_speed_rejected(self):
        with pytest.raises(ValidationError):
            make_type3(P("u^2", ["u"]), P("u^3", ["u"]), P("v", ["v"]), P("v", ["v"]))

    def test_planar_first_curve_rejected(self):
        with pytest.raises(ValidationError):
            make_type3(
                P("u^2", ["u"]), P("u^2", ["u"]), P("sin(v)", ["v"]), P("cos(v)", ["v"])
            )

    def test_vanishing_g1_slope_rejected(self):
        # grid nodes of (-pi, pi) include +-pi/2 where g1' = cos(v) vanishes
        with pytest.raises(ValidationError):
            make_type3(
                P("u^2", ["u"]), P("u^3", ["u"]), P("sin(v)", ["v"]), P("cos(v)", ["v"]),
                v_domain=(-math.pi, math.pi),
            )

    def test_closed_forms(self):
        f1, f2 = P("u^2", ["u"]), P("u^3", ["u"])
        g1, g2 = P("sin(v)", ["v"]), P("cos(v)", ["v"])
        assert closed_form_H_type3(g1, g2, 0.5) == pytest.approx(-1.0, abs=1e-15)
        expected = -(2.0 * -math.sin(0.5) - 6.0 * math.cos(0.5)) * -1.0
        assert closed_form_K_type3(f1, f2, g1, g2, 1.0, 0.5) == pytest.approx(
            expected, abs=1e-12
        )
        fam = make_type3(f1, f2, g1, g2, v_domain=(-1.2, 1.2))
        gap_k, gap_h = max_closed_form_gap(fam)
        assert gap_k < 1e-9
        assert gap_h < 1e-9

    def test_linear_isotropic_curve_gives_flat_surface(self):
        g1 = ex.mul(ex.const(0.8), ex.var("v"))
        g2 = ex.mul(ex.const(0.6), ex.var("v"))
        fam = make_type3(P("u^2", ["u"]), P("u^3", ["u"]), g1, g2)
        us, vs = fam.surface.grid(11, 11)
        for u in us:
            for v in vs:
                assert abs(gaussian_curvature(fam.surface, u, v)) < 1e-12


class TestType3Circle:
    def test_constant_doubled_mean(self):
        fam = make_type3_circle(1.0, P("u^2", ["u"]), P("u^3", ["u"]))
        us, vs = fam.surface.grid(15, 15)
        for u in us:
            for v in vs:
                assert mean_curvature(fam.surface, u, v).doubled == pytest.approx(
                    -1.0, abs=1e-9
                )

    def test_radius_is_reciprocal_h0(self):
        fam = make_type3_circle(2.0, P("u^2", ["u"]), P("u^3", ["u"]))
        assert fam.diagnostics["circle_radius_residual"] < 1e-12
        assert fam.diagnostics["harmonic_ode_residual"] < 1e-9

    def test_unit_speed_is_trigonometric_identity(self):
        fam = make_type3_circle(1.0, P("u^2", ["u"]), P("u^3", ["u"]))
        ok, residual, _ = check_isotropic_unit_speed(fam.beta)
        assert ok
        assert residual < 1e-12

    def test_negative_h0_allowed(self):
        fam = make_type3_circle(-1.0, P("u^2", ["u"]), P("u^3", ["u"]))
        h = mean_curvature(fam.surface, 1.0, 0.1).doubled
        assert abs(abs(h) - 1.0) < 1e-12


class TestType4:
    def test_valid_construction(self):
        fam = make_type4(P("u^2", ["u"]), P("u^3", ["u"]), P("v^2", ["v"]), 0.0)
        assert points_of(fam.surface, 1.0, 1.0) == (2.0, 2.0, 1.0)

    def test_closed_form_values(self):
        f1, f2, g = P("u^2", ["u"]), P("u^3", ["u"]), P("v^2", ["v"])
        assert closed_form_K_type4(f1, f2, g, 0.0, 1.0, 1.0) == pytest.approx(
            4.0 / 9.0, abs=1e-15
        )
        assert closed_form_H_type4(f1, f2, g, 0.0, 1.0, 1.0) == pytest.approx(
            4.0 / 9.0, abs=1e-15
        )
        fam = make_type4(f1, f2, g, 0.0)
        gap_k, gap_h = max_closed_form_gap(fam)
        assert gap_k < 1e-9
        assert gap_h < 1e-9

    def test_planar_first_curve_rejected(self):
        with pytest.raises(ValidationError):
            make_type4(P("u^2", ["u"]), P("u^2", ["u"]), P("v", ["v"]), 0.0)

    def test_degenerate_normal_detected(self):
        with pytest.raises(ValidationError) as err:
            make_type4(
                P("u^3", ["u"]), P("u^3+u^2", ["u"]), ex.const(0.0), 0.0,
                u_domain=(-1.0, 1.0),
            )
        assert "degenerate" in str(err.value)

    def test_linear_g_is_flat(self):
        g = ex.mul(ex.const(0.5), ex.var("v"))
        fam = make_type4(P("u^2", ["u"]), P("u^3", ["u"]), g, 0.0)
        us, vs = fam.surface.grid(11, 11)
        for u in us:
            for v in vs:
                assert abs(gaussian_curvature(fam.surface, u, v)) < 1e-12


class TestCubicHermite:
    def test_reproduces_cubic_exactly(self):
        f = lambda t: t**3 - 2 * t + 1
        fp = lambda t: 3 * t * t - 2
        knots = [0.0, 0.5, 1.0, 1.5, 2.0]
        h = CubicHermite(knots, [f(t) for t in knots], [fp(t) for t in knots])
        for t in (0.0, 0.3, 0.77, 1.25, 2.0):
            assert h(t) == pytest.approx(f(t), abs=1e-14)
            jet = h(Jet1.seed(t))
            assert jet.c1 == pytest.approx(fp(t), abs=1e-13)
            assert jet.c2 == pytest.approx(6 * t, abs=1e-12)

    def test_out_of_range_rejected(self):
        h = CubicHermite([0.0, 1.0], [0.0, 1.0], [1.0, 1.0])
        with pytest.raises(ValidationError):
            h(1.5)
        with pytest.raises(ValidationError):
            h(-0.1)

    def test_bad_construction(self):
        with pytest.raises(ValueError):
            CubicHermite([0.0], [1.0], [0.0])


class TestType4CmcOde:
    def test_constant_mean_curvature(self):
        fam = make_type4_cmc_ode(
            0.1, P("u^2", ["u"]), 0.0, 0.0, 1.0, 2.0, 0.0, 1.0, steps=1000
        )
        us, vs = fam.surface.grid(21, 21)
        worst = max(
            abs(mean_curvature(fam.surface, u, v).doubled - 0.1)
            for u in us[1:-1]
            for v in vs[1:-1]
        )
        assert worst < 1e-6

    def test_diagnostics(self):
        fam = make_type4_cmc_ode(
            0.1, P("u^2", ["u"]), 0.0, 0.0, 1.0, 2.0, 0.0, 1.0, steps=1000
        )
        assert fam.diagnostics["step_halving_drift"] < 1e-8
        assert fam.diagnostics["first_integral_residual"] < 1e-5
        assert fam.diagnostics["space_curve_witness_fd"] > 1e-9

    def test_profile_near_zero_slope_rejected(self):
        # f2' - a crosses zero inside the integration interval
        with pytest.raises(ValidationError):
            make_type4_cmc_ode(
                0.1, P("u^2", ["u"]), 0.0, 0.0, -1.0, 1.0, 0.0, 1.0, steps=200
            )

    def test_closed_forms_share_profile(self):
        fam = make_type4_cmc_ode(
            0.2, P("u^2", ["u"]), 0.0, 0.5, 1.0, 2.0, 0.0, 1.0, steps=500
        )
        gap_k, gap_h = max_closed_form_gap(fam, (11, 11))
        assert gap_k < 1e-9
        assert gap_h < 1e-9

    def test_step_count_validated(self):
        with pytest.raises(ValidationError):
            make_type4_cmc_ode(
                0.1, P("u^2", ["u"]), 0.0, 0.0, 1.0, 2.0, 0.0, 1.0, steps=10
            )


class TestRuledTypeC:
    def test_minimal_member(self):
        fam = make_ruled_type_C(ex.const(0.0), P("2*u", ["u"]), ex.const(1.0))
        us, vs = fam.surface.grid(11, 11)
        for u in us:
            for v in vs:
                assert abs(mean_curvature(fam.surface, u, v).doubled) < 1e-12
        assert gaussian_curvature(fam.surface, 0.0, 0.0) < 0.0

    def test_cylinder_form(self):
        fam = make_ruled_type_C(P("u^2", ["u"]), ex.const(0.0), ex.const(1.0))
        assert points_of(fam.surface, 0.5, 0.8) == (0.5, 0.25, 0.8)

    def test_linear_shift_form(self):
        fam = make_ruled_type_C(P("u^2", ["u"]), ex.const(1.0), ex.const(1.0))
        assert points_of(fam.surface, 0.5, 0.8) == (0.5, 0.25 + 0.8, 0.8)
