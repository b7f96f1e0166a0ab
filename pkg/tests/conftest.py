"""Shared test helpers: random expression/surface generators and tolerances.

The generators compose from a pool of numerically tame pieces (bounded
polynomial, trig and scaled-exponential factors, shifted denominators) so
random trees stay inside every elementary-function domain with values and
derivatives of moderate size.  Acceptance and property tests then compare
jet-propagated derivatives against the finite-difference oracle with a
scale-aware tolerance.
"""

from __future__ import annotations

import random

import pytest

from galileo3 import expr as ex
from galileo3.expr import Binary, Call, Constant, Neg, Variable
from galileo3.surfaces import Surface


def scaled_tol(*magnitudes, rel=1e-5, floor=1e-7):
    """max(rel * scale, floor) with scale floored at 1."""
    scale = max(1.0, *(abs(m) for m in magnitudes))
    return max(rel * scale, floor)


def fd3_richardson(fn, x, h=5e-3):
    """Third derivative with one Richardson step; truncation drops to O(h^4)
    while the step stays large enough to keep value-rounding noise small."""
    from galileo3.jets import fd_jet1

    coarse = fd_jet1(fn, x, h3=h)[3]
    fine = fd_jet1(fn, x, h3=h / 2.0)[3]
    return (4.0 * fine - coarse) / 3.0


def assert_close(a, b, tol, label=""):
    assert abs(a - b) <= tol, f"{label}: |{a!r} - {b!r}| = {abs(a - b):.3e} > {tol:.3e}"


def random_expr(rng: random.Random, variables: list[str], depth: int) -> ex.ExprNode:
    """Random tree over safe domains; values stay O(10) for |var| <= 1.5."""

    def coeff(lo=0.3, hi=1.2):
        c = rng.uniform(lo, hi)
        return Constant(round(c, 3))

    def leaf():
        if rng.random() < 0.35:
            return coeff(0.3, 2.2)
        return Variable(rng.choice(variables))

    def linear_arg():
        # a*x + b with |a| <= 1.2 keeps high trig derivatives bounded
        node = Binary("*", coeff(), Variable(rng.choice(variables)))
        if rng.random() < 0.5:
            node = Binary("+", node, coeff(0.0, 1.5))
        return node

    def build(d):
        if d <= 0:
            return leaf()
        choice = rng.random()
        if choice < 0.22:
            return Binary("+", build(d - 1), build(d - 1))
        if choice < 0.40:
            return Binary("-", build(d - 1), build(d - 1))
        if choice < 0.58:
            return Binary("*", build(d - 1), build(d - 1))
        if choice < 0.66:
            # shifted denominator keeps the quotient finite everywhere
            denom = Binary(
                "+",
                Constant(round(rng.uniform(1.5, 3.0), 3)),
                Binary("^", Variable(rng.choice(variables)), Constant(2.0)),
            )
            return Binary("/", build(d - 1), denom)
        if choice < 0.74:
            return Binary(
                "^", leaf() if rng.random() < 0.4 else build(d - 1),
                Constant(float(rng.choice((2, 2, 3)))),
            )
        if choice < 0.80:
            return Neg(build(d - 1))
        if choice < 0.88:
            return Call(rng.choice(("sin", "cos")), linear_arg())
        if choice < 0.93:
            return Call("atan", build(d - 1))
        if choice < 0.97:
            return Call("exp", Binary("*", Constant(round(rng.uniform(0.2, 0.6), 3)), leaf()))
        return Call(
            "sqrt",
            Binary(
                "+",
                Constant(round(rng.uniform(0.5, 2.0), 3)),
                Binary("^", Variable(rng.choice(variables)), Constant(2.0)),
            ),
        )

    return build(depth)


def bounded_jet1_expr(rng: random.Random, depth: int = 4, bound: float = 50.0):
    """(tree, point) whose jet at the point exists with all slots <= bound."""
    for _ in range(200):
        tree = random_expr(rng, ["u"], rng.randint(1, depth))
        point = rng.uniform(-1.4, 1.4)
        try:
            jet = ex.eval_jet1(tree, point, "u")
        except Exception:
            continue
        if max(abs(jet.c0), abs(jet.c1), abs(jet.c2), abs(jet.c3)) <= bound:
            return tree, point, jet
    raise RuntimeError("generator failed to produce a bounded sample")


def random_admissible_surface(rng: random.Random) -> Surface:
    """Random surface with structurally non-isotropic tangent (x = u or u+v)."""
    shape = rng.random()
    u, v = Variable("u"), Variable("v")
    if shape < 0.5:
        # graph over the (x, y)-plane
        z = random_expr(rng, ["u", "v"], rng.randint(1, 3))
        return Surface(u, v, z, domain=((-1.2, 1.2), (-1.2, 1.2)))
    if shape < 0.8:
        # sum of a u-curve and a v-curve, isotropic second direction
        y = Binary("+", random_expr(rng, ["u"], 2), random_expr(rng, ["v"], 2))
        z = Binary("+", random_expr(rng, ["u"], 2), random_expr(rng, ["v"], 2))
        return Surface(u, y, z, domain=((-1.2, 1.2), (-1.2, 1.2)))
    # non-isotropic second direction
    y = Binary("+", random_expr(rng, ["u"], 2), random_expr(rng, ["v"], 2))
    z = Binary("+", random_expr(rng, ["u"], 2), Binary("*", Constant(round(rng.uniform(0.2, 1.0), 3)), v))
    return Surface(Binary("+", u, v), y, z, domain=((-1.2, 1.2), (-1.2, 1.2)))


@pytest.fixture
def rng():
    return random.Random(20260809)
