"""Grid verification: constancy reports, theorem certificates, probes.

``sample`` walks a parameter grid, records K and both mean-curvature
conventions per node, cross-checks the family closed forms against the
general machinery, and issues constant/non-constant verdicts with witness
pairs.  ``certify_theorem`` packages the quantitative claim of each
classification statement as a pass/fail certificate.  ``probe_nonexistence``
runs fixed witness families whose curvature spread demonstrates, at desk
scale, that the excluded constant-curvature cases really fail to be
constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import expr as ex
from . import surfaces as sf
from . import translation as tr
from .errors import GeometryError, ValidationError
from .translation import AffineMatrix, SurfaceFamily

__all__ = [
    "ChannelStats",
    "CurvatureReport",
    "TheoremCertificate",
    "ProbeReport",
    "sample",
    "certify_theorem",
    "probe_nonexistence",
    "THEOREM_IDS",
    "PROBE_IDS",
]

DEFAULT_GRID = (21, 21)
DEFAULT_TOL = 1e-8
ODE_TOL = 1e-6

CONSTANT = "constant"
NON_CONSTANT = "non-constant"
UNUSABLE = "unusable"


@dataclass
class ChannelStats:
    """Distribution of one curvature channel over the evaluated nodes."""

    minimum: float
    maximum: float
    mean: float
    spread: float
    verdict: str
    witness: tuple | None  # ((u, v, value), (u, v, value)) when non-constant

    def to_dict(self) -> dict:
        return {
            "min": self.minimum,
            "max": self.maximum,
            "mean": self.mean,
            "spread": self.spread,
            "verdict": self.verdict,
            "witness": [list(w) for w in self.witness] if self.witness else None,
        }


def _channel(values: list, nodes: list, tol: float, usable: bool) -> ChannelStats:
    if not usable or not values:
        return ChannelStats(math.nan, math.nan, math.nan, math.nan, UNUSABLE, None)
    lo = min(range(len(values)), key=values.__getitem__)
    hi = max(range(len(values)), key=values.__getitem__)
    spread = values[hi] - values[lo]
    mean = math.fsum(values) / len(values)
    if spread < tol:
        return ChannelStats(values[lo], values[hi], mean, spread, CONSTANT, None)
    witness = (
        (*nodes[lo], values[lo]),
        (*nodes[hi], values[hi]),
    )
    return ChannelStats(values[lo], values[hi], mean, spread, NON_CONSTANT, witness)


@dataclass
class CurvatureReport:
    grid: tuple[int, int]
    tol: float
    nodes: list  # (u, v) per evaluated node, row-major
    k_values: list
    h_canonical_values: list
    h_doubled_values: list
    k: ChannelStats
    h_canonical: ChannelStats
    h_doubled: ChannelStats
    cross_check: dict | None  # max |closed - general| per channel
    failures: list  # (u, v, message)
    unusable: bool

    def to_dict(self, include_nodes: bool = True) -> dict:
        out = {
            "grid": list(self.grid),
            "tol": self.tol,
            "K": self.k.to_dict(),
            "H_canonical": self.h_canonical.to_dict(),
            "H_paper": self.h_doubled.to_dict(),
            "cross_check": self.cross_check,
            "failures": [[u, v, msg] for (u, v, msg) in self.failures],
            "unusable": self.unusable,
            "evaluated": len(self.nodes),
        }
        if include_nodes:
            out["nodes"] = [
                [u, v, k, hc, hd]
                for (u, v), k, hc, hd in zip(
                    self.nodes,
                    self.k_values,
                    self.h_canonical_values,
                    self.h_doubled_values,
                )
            ]
        return out


def _as_family(target) -> SurfaceFamily:
    if isinstance(target, SurfaceFamily):
        return target
    return SurfaceFamily(kind="surface", parameters={}, surface=target)


def default_tolerance(target) -> float:
    kind = target.kind if isinstance(target, SurfaceFamily) else "surface"
    return ODE_TOL if kind == "type4_cmc_ode" else DEFAULT_TOL


def sample(target, grid: tuple[int, int] = DEFAULT_GRID, tol: float | None = None) -> CurvatureReport:
    """Evaluate K and both mean-curvature conventions on a full grid.

    Nodes that raise degeneracy or domain errors are skipped and recorded;
    the report is marked unusable when more than 20% of nodes fail.
    """
    family = _as_family(target)
    if tol is None:
        tol = default_tolerance(family)
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    nu, nv = grid
    us, vs = family.surface.grid(nu, nv)
    nodes, ks, hcs, hds = [], [], [], []
    failures = []
    cross_k = 0.0
    cross_h = 0.0
    has_closed = family.closed_k is not None or family.closed_h is not None
    for u in us:
        for v in vs:
            try:
                k, h = sf.curvatures(family.surface, u, v)
            except GeometryError as err:
                failures.append((u, v, str(err)))
                continue
            nodes.append((u, v))
            ks.append(k)
            hcs.append(h.canonical)
            hds.append(h.doubled)
            if family.closed_k is not None:
                cross_k = max(cross_k, abs(family.closed_k(u, v) - k))
            if family.closed_h is not None:
                cross_h = max(cross_h, abs(family.closed_h(u, v) - h.doubled))
    total = nu * nv
    unusable = len(failures) > 0.2 * total
    cross = None
    if has_closed:
        cross = {}
        if family.closed_k is not None:
            cross["K"] = cross_k
        if family.closed_h is not None:
            cross["H"] = cross_h
        cross["max"] = max(cross.values())
    usable = not unusable
    return CurvatureReport(
        grid=grid,
        tol=tol,
        nodes=nodes,
        k_values=ks,
        h_canonical_values=hcs,
        h_doubled_values=hds,
        k=_channel(ks, nodes, tol, usable),
        h_canonical=_channel(hcs, nodes, tol, usable),
        h_doubled=_channel(hds, nodes, tol, usable),
        cross_check=cross,
        failures=failures,
        unusable=unusable,
    )


@dataclass
class TheoremCertificate:
    theorem: str
    parameters: dict
    checks: dict  # name -> {"value", "bound", "ok"}
    passed: bool
    grid: tuple[int, int]

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "parameters": self.parameters,
            "checks": self.checks,
            "passed": self.passed,
            "grid": list(self.grid),
        }


def _check(value: float, bound: float, mode: str = "lt") -> dict:
    ok = value < bound if mode == "lt" else value > bound
    return {"value": value, "bound": bound, "mode": mode, "ok": ok}


def _interior(report: CurvatureReport):
    """Doubled-H values away from the boundary rows/columns."""
    us = sorted({u for u, _ in report.nodes})
    vs = sorted({v for _, v in report.nodes})
    u_in = set(us[1:-1])
    v_in = set(vs[1:-1])
    return [
        h
        for (u, v), h in zip(report.nodes, report.h_doubled_values)
        if u in u_in and v in v_in
    ]


def _certify_constant_k(params, grid):
    k0 = params["K0"]
    family = tr.make_constant_K_type1(k0, params.get("c", 1.0))
    report = sample(family, grid, tol=1e-8)
    values = report.k_values
    spread = max(values) - min(values)
    worst = max(abs(k - k0) for k in values)
    checks = {
        "spread_K": _check(spread, 1e-8),
        "max_deviation_from_K0": _check(worst, 1e-8),
        "closed_form_residual": _check(report.cross_check["max"], 1e-9),
    }
    return family, report, checks


def _certify_cmc_cylinder(params, grid):
    h0 = params["H0"]
    variant = params.get("variant", "B_i")
    a = params.get("A")
    matrix = AffineMatrix(*[x for row in a for x in row]) if a else None
    f = ex.parse(params["f"], ["t"]) if params.get("f") else None
    family = tr.make_cmc_cylinder(
        h0,
        variant,
        f=f,
        c1=params.get("c1"),
        A=matrix,
        x_domain=tuple(params.get("x_domain", (-1.0, 1.0))),
    )
    report = sample(family, grid, tol=1e-8)
    values = report.h_doubled_values
    checks = {
        "spread_H": _check(max(values) - min(values), 1e-8),
        "max_deviation_from_H0": _check(max(abs(h - h0) for h in values), 1e-8),
        "profile_equation_residual": _check(
            family.diagnostics["cmc_profile_residual"], 1e-9
        ),
    }
    return family, report, checks


def _certify_flat_type3(params, grid):
    # Unit-speed isotropic line: g1, g2 linear with slopes on the unit circle.
    p_slope, q_slope = params.get("slopes", (0.8, 0.6))
    f1 = ex.parse(params.get("f1", "u^2"), ["u"])
    f2 = ex.parse(params.get("f2", "u^3"), ["u"])
    g1 = ex.mul(ex.const(p_slope), ex.var("v"))
    g2 = ex.mul(ex.const(q_slope), ex.var("v"))
    family = tr.make_type3(f1, f2, g1, g2)
    report = sample(family, grid, tol=1e-8)
    checks = {
        "max_abs_K": _check(max(abs(k) for k in report.k_values), 1e-12),
        "closed_form_residual": _check(report.cross_check["max"], 1e-9),
    }
    return family, report, checks


def _certify_circle_type3(params, grid):
    h0 = params["H0"]
    f1 = ex.parse(params.get("f1", "u^2"), ["u"])
    f2 = ex.parse(params.get("f2", "u^3"), ["u"])
    family = tr.make_type3_circle(h0, f1, f2)
    report = sample(family, grid, tol=1e-9)
    values = report.h_doubled_values
    checks = {
        "spread_H": _check(max(values) - min(values), 1e-9),
        "abs_H_matches_abs_H0": _check(
            max(abs(abs(h) - abs(h0)) for h in values), 1e-9
        ),
        "circle_radius_residual": _check(
            family.diagnostics["circle_radius_residual"], 1e-12
        ),
        "harmonic_ode_residual": _check(
            family.diagnostics["harmonic_ode_residual"], 1e-9
        ),
    }
    return family, report, checks


def _certify_flat_type4(params, grid):
    f1 = ex.parse(params.get("f1", "u^2"), ["u"])
    f2 = ex.parse(params.get("f2", "u^3"), ["u"])
    g = ex.mul(ex.const(params.get("g_slope", 0.5)), ex.var("v"))
    family = tr.make_type4(f1, f2, g, params.get("a", 0.0))
    report = sample(family, grid, tol=1e-8)
    checks = {
        "max_abs_K": _check(max(abs(k) for k in report.k_values), 1e-12),
        "closed_form_residual": _check(report.cross_check["max"], 1e-9),
    }
    return family, report, checks


def _certify_cmc_ode(params, grid):
    h0 = params["H0"]
    family = tr.make_type4_cmc_ode(
        h0,
        ex.parse(params.get("f2", "u^2"), ["u"]),
        params.get("a", 0.0),
        params.get("c1", 0.0),
        params.get("u0", 1.0),
        params.get("u_end", 2.0),
        params.get("f1_0", 0.0),
        params.get("f1p_0", 1.0),
        steps=params.get("steps", 1000),
    )
    report = sample(family, grid, tol=1e-6)
    interior = _interior(report)
    checks = {
        "interior_spread_H": _check(max(interior) - min(interior), 1e-6),
        "interior_max_deviation_from_H0": _check(
            max(abs(h - h0) for h in interior), 1e-6
        ),
        "first_integral_residual": _check(
            family.diagnostics["first_integral_residual"], 1e-5
        ),
        "step_halving_drift": _check(family.diagnostics["step_halving_drift"], 1e-8),
    }
    return family, report, checks


def _certify_minimal_ruled(params, grid):
    a = params.get("A", [[1.0, 1.0], [0.0, 1.0]])
    matrix = AffineMatrix(*[x for row in a for x in row])
    family = tr.make_parabolic_ruled(matrix, params.get("c1", 1.0))
    report = sample(family, grid, tol=1e-9)
    k_origin = abs(family.closed_k(0.0, 0.0))
    max_abs_k = max(abs(k) for k in report.k_values)
    checks = {
        "max_abs_H": _check(max(abs(h) for h in report.h_doubled_values), 1e-9),
        "K_origin_nonzero": _check(k_origin, 0.0, "gt"),
        "max_abs_K_dominates_origin": _check(max_abs_k, 0.9 * k_origin, "gt"),
        "closed_form_residual": _check(report.cross_check["max"], 1e-9),
    }
    return family, report, checks


_CERTIFIERS = {
    "K_affine": _certify_constant_k,
    "H_affine": _certify_cmc_cylinder,
    "K_type3": _certify_flat_type3,
    "H_type3": _certify_circle_type3,
    "K_type4": _certify_flat_type4,
    "H_type4_cmc": _certify_cmc_ode,
    "minimal_ruled": _certify_minimal_ruled,
}

THEOREM_IDS = tuple(sorted(_CERTIFIERS))


def certify_theorem(
    theorem: str, params: dict | None = None, grid: tuple[int, int] = DEFAULT_GRID
) -> TheoremCertificate:
    """Build the referenced constructor, sample it, and check the claim."""
    if theorem not in _CERTIFIERS:
        raise ValidationError(
            f"unknown theorem id {theorem!r}; expected one of {THEOREM_IDS}"
        )
    params = dict(params or {})
    family, report, checks = _CERTIFIERS[theorem](params, grid)
    if report.unusable:
        checks["report_usable"] = {"value": False, "ok": False}
    passed = all(c["ok"] for c in checks.values())
    return TheoremCertificate(
        theorem=theorem,
        parameters=family.parameters,
        checks=checks,
        passed=passed,
        grid=grid,
    )


@dataclass
class ProbeReport:
    probe: str
    grid: tuple[int, int]
    spread_k: float
    spread_h_doubled: float
    min_abs_h_doubled: float
    bounds: dict
    checks: dict
    passed: bool

    def to_dict(self) -> dict:
        return {
            "probe": self.probe,
            "grid": list(self.grid),
            "spread_K": self.spread_k,
            "spread_H_paper": self.spread_h_doubled,
            "min_abs_H_paper": self.min_abs_h_doubled,
            "bounds": self.bounds,
            "checks": self.checks,
            "passed": self.passed,
        }


def _probe_type4():
    return tr.make_type4(
        ex.parse("u^2", ["u"]),
        ex.parse("u^3", ["u"]),
        ex.parse("v^2", ["v"]),
        0.0,
        (0.5, 2.0),
        (-1.0, 1.0),
    )


def _probe_type3():
    # Non-circular unit-speed isotropic pair: p' = sqrt(1 - v^2), q' = v.
    p = ex.parse("v/2*sqrt(1-v^2)+asin(v)/2", ["v"])
    q = ex.parse("v^2/2", ["v"])
    return tr.make_type3(
        ex.parse("u^2", ["u"]),
        ex.parse("u^3", ["u"]),
        p,
        q,
        (0.5, 2.0),
        (-0.9, 0.9),
    )


def _probe_control():
    return tr.make_type3_circle(1.0, ex.parse("u^2", ["u"]), ex.parse("u^3", ["u"]))


# Lower/upper bounds are constants of these fixed instances, not claims
# about all members of the excluded families.
_PROBES = {
    "type4_nonconstant": (_probe_type4, {"min_spread_K": 0.1, "min_spread_H": 0.1}),
    "type3_nonconstant": (_probe_type3, {"min_spread_K": 0.1, "min_spread_H": 0.1}),
    "type3_circle_control": (_probe_control, {"max_spread_H": 1e-9}),
}

PROBE_IDS = tuple(sorted(_PROBES))


def probe_nonexistence(
    probe: str, grid: tuple[int, int] = DEFAULT_GRID, rng=None
) -> ProbeReport:
    """Run a registered probe family and assert its documented bounds.

    ``rng`` (a ``random.Random``) additionally samples jittered interior
    points, so the spread evidence does not depend on the exact grid.
    """
    if probe not in _PROBES:
        raise ValidationError(f"unknown probe {probe!r}; expected one of {PROBE_IDS}")
    builder, bounds = _PROBES[probe]
    family = builder()
    report = sample(family, grid, tol=1e-9)
    ks = list(report.k_values)
    hs = list(report.h_doubled_values)
    if rng is not None:
        (ulo, uhi), (vlo, vhi) = family.surface.domain
        for _ in range(grid[0] * grid[1]):
            u = ulo + (uhi - ulo) * rng.random()
            v = vlo + (vhi - vlo) * rng.random()
            try:
                k, h = sf.curvatures(family.surface, u, v)
            except GeometryError:
                continue
            ks.append(k)
            hs.append(h.doubled)
    spread_k = max(ks) - min(ks)
    spread_h = max(hs) - min(hs)
    checks = {}
    if "min_spread_K" in bounds:
        checks["spread_K"] = _check(spread_k, bounds["min_spread_K"], "gt")
    if "min_spread_H" in bounds:
        checks["spread_H"] = _check(spread_h, bounds["min_spread_H"], "gt")
    if "max_spread_H" in bounds:
        checks["spread_H"] = _check(spread_h, bounds["max_spread_H"], "lt")
    passed = all(c["ok"] for c in checks.values())
    return ProbeReport(
        probe=probe,
        grid=grid,
        spread_k=spread_k,
        spread_h_doubled=spread_h,
        min_abs_h_doubled=min(abs(h) for h in hs),
        bounds=bounds,
        checks=checks,
        passed=passed,
    )
