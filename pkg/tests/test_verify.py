import json
import random

import pytest

from galileo3 import expr as ex
from galileo3.errors import ValidationError
from galileo3.translation import (
    AffineMatrix,
    make_standard,
    make_type3_circle,
    make_type4,
)
from galileo3.verify import (
    CONSTANT,
    NON_CONSTANT,
    PROBE_IDS,
    THEOREM_IDS,
    certify_theorem,
    probe_nonexistence,
    sample,
)


def P(source, variables):
    return ex.parse(source, variables)


class TestSample:
    def test_plane_is_constant(self):
        fam = make_standard("type1", ex.const(0.0), ex.const(0.0))
        report = sample(fam, (5, 5), 1e-9)
        assert report.k.verdict == CONSTANT
        assert report.k.spread == 0.0
        assert report.h_doubled.verdict == CONSTANT
        assert not report.failures

    def test_paraboloid_witness_pair(self):
        fam = make_standard("type1", P("x^2", ["x"]), P("y^2", ["y"]))
        report = sample(fam, (11, 11), 1e-9)
        assert report.k.verdict == NON_CONSTANT
        (_, v_lo, k_lo), (_, v_hi, k_hi) = report.k.witness
        # K = 4 / (1 + 4 v^2)^2 for this graph: 4 on the v = 0 line, 0.16 at |v| = 1
        assert k_hi == pytest.approx(4.0, abs=1e-12)
        assert k_lo == pytest.approx(0.16, abs=1e-12)
        assert v_hi == 0.0
        assert abs(v_lo) == 1.0

    def test_circle_family_constant(self):
        fam = make_type3_circle(1.0, P("u^2", ["u"]), P("u^3", ["u"]))
        report = sample(fam, (21, 21))
        assert report.h_doubled.verdict == CONSTANT
        assert report.h_doubled.spread < 1e-9
        assert report.h_doubled.mean == pytest.approx(-1.0, abs=1e-12)
        assert report.cross_check["max"] < 1e-9

    def test_failures_recorded_but_usable(self):
        # type-2 parametrization degenerates at the origin node only
        fam = make_standard(
            "type2", P("x^2", ["x"]), P("y^3", ["y"]), domain=((-1.0, 1.0), (-1.0, 1.0))
        )
        report = sample(fam, (11, 11), 1e-6)
        assert len(report.failures) == 1
        assert report.failures[0][0] == 0.0 and report.failures[0][1] == 0.0
        assert not report.unusable
        assert len(report.nodes) == 120

    def test_unusable_when_many_nodes_fail(self):
        # half the domain leaves log's range
        fam = make_standard(
            "type1", P("log(x)", ["x"]), P("y^2", ["y"]),
            domain=((-1.0, 1.0), (-1.0, 1.0)),
        )
        report = sample(fam, (11, 11), 1e-6)
        assert report.unusable
        assert report.k.verdict == "unusable"

    def test_deterministic(self):
        fam = make_type4(P("u^2", ["u"]), P("u^3", ["u"]), P("v^2", ["v"]), 0.0)
        a = sample(fam, (9, 9)).to_dict()
        b = sample(fam, (9, 9)).to_dict()
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)

    def test_bad_tolerance_rejected(self):
        fam = make_standard("type1", ex.const(0.0), ex.const(0.0))
        with pytest.raises(ValueError):
            sample(fam, (5, 5), 0.0)

    def test_plain_surface_accepted(self):
        fam = make_standard("type1", P("x^2", ["x"]), P("y^2", ["y"]))
        report = sample(fam.surface, (5, 5), 1e-9)
        assert report.cross_check is None


class TestCertificates:
    def test_all_ids_registered(self):
        assert THEOREM_IDS == (
            "H_affine",
            "H_type3",
            "H_type4_cmc",
            "K_affine",
            "K_type3",
            "K_type4",
            "minimal_ruled",
        )

    def test_unknown_theorem(self):
        with pytest.raises(ValidationError):
            certify_theorem("K_unknown", {})

    def test_constant_k_certificate(self):
        cert = certify_theorem("K_affine", {"K0": 1.0, "c": 1.0})
        assert cert.passed
        assert cert.checks["max_deviation_from_K0"]["value"] < 1e-8
        payload = cert.to_dict()
        assert payload["theorem"] == "K_affine"
        assert json.dumps(payload, sort_keys=True)  # JSON-serializable

    def test_cmc_cylinder_certificate_with_matrix(self):
        cert = certify_theorem(
            "H_affine",
            {
                "H0": 1.0,
                "variant": "B_ii_1",
                "c1": 0.7,
                "A": [[1.0, 0.5], [0.3, 1.2]],
                "x_domain": [-0.5, 0.5],
            },
        )
        assert cert.passed

    def test_circle_certificate(self):
        cert = certify_theorem("H_type3", {"H0": 2.0})
        assert cert.passed
        assert cert.checks["circle_radius_residual"]["value"] < 1e-12

    def test_minimal_ruled_certificate(self):
        cert = certify_theorem("minimal_ruled", {"A": [[1.0, 1.0], [0.0, 1.0]], "c1": 1.0})
        assert cert.passed
        assert cert.checks["K_origin_nonzero"]["value"] == pytest.approx(1.0)

    def test_ode_certificate(self):
        cert = certify_theorem("H_type4_cmc", {"H0": 0.1})
        assert cert.passed
        assert cert.checks["interior_max_deviation_from_H0"]["value"] < 1e-6

    def test_invalid_parameters_propagate(self):
        with pytest.raises(ValidationError):
            certify_theorem("K_affine", {"K0": 0.0})


class TestProbes:
    def test_registry(self):
        assert PROBE_IDS == (
            "type3_circle_control",
            "type3_nonconstant",
            "type4_nonconstant",
        )

    def test_unknown_probe(self):
        with pytest.raises(ValidationError):
            probe_nonexistence("bogus")

    def test_type4_probe_spreads(self):
        report = probe_nonexistence("type4_nonconstant")
        assert report.passed
        assert report.spread_k > 0.1
        assert report.spread_h_doubled > 0.1

    def test_type3_probe_spreads(self):
        report = probe_nonexistence("type3_nonconstant")
        assert report.passed
        assert report.spread_k > 0.1
        assert report.spread_h_doubled > 0.1

    def test_negative_control(self):
        report = probe_nonexistence("type3_circle_control")
        assert report.passed
        assert report.spread_h_doubled < 1e-9

    def test_jittered_sampling(self):
        report = probe_nonexistence("type4_nonconstant", rng=random.Random(5))
        assert report.passed
        plain = probe_nonexistence("type4_nonconstant")
        assert report.spread_h_doubled >= plain.spread_h_doubled
