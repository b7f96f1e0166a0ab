"""Truncated-Taylor (jet) arithmetic with exact derivative propagation.

``Jet1`` carries a value and three derivatives of a univariate function,
enough for curve curvature and torsion.  ``Jet2`` carries a value, both
first partials and the three second partials of a bivariate function,
enough for the second fundamental form.  All arithmetic applies the exact
Leibniz / Faa di Bruno rules, so the only error in any derivative is
floating-point rounding.

``fd_jet1`` / ``fd_jet2`` are the independent finite-difference oracle used
by the test suite to cross-check jet-propagated derivatives.
"""

from __future__ import annotations

import math

from .errors import JetDomainError

__all__ = [
    "Jet1",
    "Jet2",
    "apply_function",
    "arith1",
    "arith2",
    "compose1",
    "compose2",
    "fd_jet1",
    "fd_jet2",
    "integer_power",
    "value_of",
    "FUNCTION_NAMES",
]


def _coerce(other):
    if isinstance(other, (int, float)):
        return float(other)
    return None


class Jet1:
    """Value and first three derivatives of a univariate function."""

    __slots__ = ("c0", "c1", "c2", "c3")

    def __init__(self, c0: float, c1: float = 0.0, c2: float = 0.0, c3: float = 0.0):
        self.c0 = c0
        self.c1 = c1
        self.c2 = c2
        self.c3 = c3

    @staticmethod
    def constant(value: float) -> "Jet1":
        return Jet1(float(value))

    @staticmethod
    def seed(x: float) -> "Jet1":
        """The identity function at x: value x, slope 1, higher derivatives 0."""
        return Jet1(float(x), 1.0)

    def is_constant(self) -> bool:
        return self.c1 == 0.0 and self.c2 == 0.0 and self.c3 == 0.0

    def is_finite(self) -> bool:
        return (
            math.isfinite(self.c0)
            and math.isfinite(self.c1)
            and math.isfinite(self.c2)
            and math.isfinite(self.c3)
        )

    def __repr__(self):
        return f"Jet1({self.c0!r}, {self.c1!r}, {self.c2!r}, {self.c3!r})"

    def __eq__(self, other):
        if not isinstance(other, Jet1):
            return NotImplemented
        return (
            self.c0 == other.c0
            and self.c1 == other.c1
            and self.c2 == other.c2
            and self.c3 == other.c3
        )

    def __hash__(self):
        return hash((self.c0, self.c1, self.c2, self.c3))

    def __add__(self, other):
        s = _coerce(other)
        if s is not None:
            return Jet1(self.c0 + s, self.c1, self.c2, self.c3)
        if not isinstance(other, Jet1):
            return NotImplemented
        return Jet1(self.c0 + other.c0, self.c1 + other.c1, self.c2 + other.c2, self.c3 + other.c3)

    __radd__ = __add__

    def __sub__(self, other):
        s = _coerce(other)
        if s is not None:
            return Jet1(self.c0 - s, self.c1, self.c2, self.c3)
        if not isinstance(other, Jet1):
            return NotImplemented
        return Jet1(self.c0 - other.c0, self.c1 - other.c1, self.c2 - other.c2, self.c3 - other.c3)

    def __rsub__(self, other):
        s = _coerce(other)
        if s is None:
            return NotImplemented
        return Jet1(s - self.c0, -self.c1, -self.c2, -self.c3)

    def __neg__(self):
        return Jet1(-self.c0, -self.c1, -self.c2, -self.c3)

    def __mul__(self, other):
        s = _coerce(other)
        if s is not None:
            return Jet1(self.c0 * s, self.c1 * s, self.c2 * s, self.c3 * s)
        if not isinstance(other, Jet1):
            return NotImplemented
        a, b = self, other
        return Jet1(
            a.c0 * b.c0,
            a.c1 * b.c0 + a.c0 * b.c1,
            a.c2 * b.c0 + 2.0 * a.c1 * b.c1 + a.c0 * b.c2,
            a.c3 * b.c0 + 3.0 * a.c2 * b.c1 + 3.0 * a.c1 * b.c2 + a.c0 * b.c3,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        s = _coerce(other)
        if s is not None:
            if s == 0.0:
                raise JetDomainError("division by zero")
            return Jet1(self.c0 / s, self.c1 / s, self.c2 / s, self.c3 / s)
        if not isinstance(other, Jet1):
            return NotImplemented
        a, b = self, other
        if b.c0 == 0.0:
            raise JetDomainError("division by a jet with zero value")
        # Solve a = q * b slot by slot (Leibniz rule inverted).
        q0 = a.c0 / b.c0
        q1 = (a.c1 - q0 * b.c1) / b.c0
        q2 = (a.c2 - 2.0 * q1 * b.c1 - q0 * b.c2) / b.c0
        q3 = (a.c3 - 3.0 * q2 * b.c1 - 3.0 * q1 * b.c2 - q0 * b.c3) / b.c0
        return Jet1(q0, q1, q2, q3)

    def __rtruediv__(self, other):
        s = _coerce(other)
        if s is None:
            return NotImplemented
        return Jet1.constant(s) / self

    def __pow__(self, exponent):
        return _generic_pow(self, exponent)


class Jet2:
    """Value, first partials and second partials of a bivariate function."""

    __slots__ = ("c00", "c10", "c01", "c20", "c11", "c02")

    def __init__(self, c00, c10=0.0, c01=0.0, c20=0.0, c11=0.0, c02=0.0):
        self.c00 = c00
        self.c10 = c10
        self.c01 = c01
        self.c20 = c20
        self.c11 = c11
        self.c02 = c02

    @staticmethod
    def constant(value: float) -> "Jet2":
        return Jet2(float(value))

    @staticmethod
    def seed_u(x: float) -> "Jet2":
        """The first coordinate function at x: unit derivative in u."""
        return Jet2(float(x), 1.0, 0.0)

    @staticmethod
    def seed_v(y: float) -> "Jet2":
        """The second coordinate function at y: unit derivative in v."""
        return Jet2(float(y), 0.0, 1.0)

    def is_constant(self) -> bool:
        return (
            self.c10 == 0.0
            and self.c01 == 0.0
            and self.c20 == 0.0
            and self.c11 == 0.0
            and self.c02 == 0.0
        )

    def is_finite(self) -> bool:
        return (
            math.isfinite(self.c00)
            and math.isfinite(self.c10)
            and math.isfinite(self.c01)
            and math.isfinite(self.c20)
            and math.isfinite(self.c11)
            and math.isfinite(self.c02)
        )

    def __repr__(self):
        return (
            f"Jet2({self.c00!r}, {self.c10!r}, {self.c01!r}, "
            f"{self.c20!r}, {self.c11!r}, {self.c02!r})"
        )

    def __eq__(self, other):
        if not isinstance(other, Jet2):
            return NotImplemented
        return (
            self.c00 == other.c00
            and self.c10 == other.c10
            and self.c01 == other.c01
            and self.c20 == other.c20
            and self.c11 == other.c11
            and self.c02 == other.c02
        )

    def __hash__(self):
        return hash((self.c00, self.c10, self.c01, self.c20, self.c11, self.c02))

    def __add__(self, other):
        s = _coerce(other)
        if s is not None:
            return Jet2(self.c00 + s, self.c10, self.c01, self.c20, self.c11, self.c02)
        if not isinstance(other, Jet2):
            return NotImplemented
        a, b = self, other
        return Jet2(
            a.c00 + b.c00, a.c10 + b.c10, a.c01 + b.c01,
            a.c20 + b.c20, a.c11 + b.c11, a.c02 + b.c02,
        )

    __radd__ = __add__

    def __sub__(self, other):
        s = _coerce(other)
        if s is not None:
            return Jet2(self.c00 - s, self.c10, self.c01, self.c20, self.c11, self.c02)
        if not isinstance(other, Jet2):
            return NotImplemented
        a, b = self, other
        return Jet2(
            a.c00 - b.c00, a.c10 - b.c10, a.c01 - b.c01,
            a.c20 - b.c20, a.c11 - b.c11, a.c02 - b.c02,
        )

    def __rsub__(self, other):
        s = _coerce(other)
        if s is None:
            return NotImplemented
        return Jet2(s - self.c00, -self.c10, -self.c01, -self.c20, -self.c11, -self.c02)

    def __neg__(self):
        return Jet2(-self.c00, -self.c10, -self.c01, -self.c20, -self.c11, -self.c02)

    def __mul__(self, other):
        s = _coerce(other)
        if s is not None:
            return Jet2(
                self.c00 * s, self.c10 * s, self.c01 * s,
                self.c20 * s, self.c11 * s, self.c02 * s,
            )
        if not isinstance(other, Jet2):
            return NotImplemented
        a, b = self, other
        return Jet2(
            a.c00 * b.c00,
            a.c10 * b.c00 + a.c00 * b.c10,
            a.c01 * b.c00 + a.c00 * b.c01,
            a.c20 * b.c00 + 2.0 * a.c10 * b.c10 + a.c00 * b.c20,
            a.c11 * b.c00 + a.c10 * b.c01 + a.c01 * b.c10 + a.c00 * b.c11,
            a.c02 * b.c00 + 2.0 * a.c01 * b.c01 + a.c00 * b.c02,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        s = _coerce(other)
        if s is not None:
            if s == 0.0:
                raise JetDomainError("division by zero")
            return Jet2(
                self.c00 / s, self.c10 / s, self.c01 / s,
                self.c20 / s, self.c11 / s, self.c02 / s,
            )
        if not isinstance(other, Jet2):
            return NotImplemented
        a, b = self, other
        if b.c00 == 0.0:
            raise JetDomainError("division by a jet with zero value")
        q00 = a.c00 / b.c00
        q10 = (a.c10 - q00 * b.c10) / b.c00
        q01 = (a.c01 - q00 * b.c01) / b.c00
        q20 = (a.c20 - 2.0 * q10 * b.c10 - q00 * b.c20) / b.c00
        q11 = (a.c11 - q10 * b.c01 - q01 * b.c10 - q00 * b.c11) / b.c00
        q02 = (a.c02 - 2.0 * q01 * b.c01 - q00 * b.c02) / b.c00
        return Jet2(q00, q10, q01, q20, q11, q02)

    def __rtruediv__(self, other):
        s = _coerce(other)
        if s is None:
            return NotImplemented
        return Jet2.constant(s) / self

    def __pow__(self, exponent):
        return _generic_pow(self, exponent)


def value_of(x) -> float:
    """Scalar value of a float, Jet1 or Jet2."""
    if isinstance(x, Jet1):
        return x.c0
    if isinstance(x, Jet2):
        return x.c00
    return float(x)


def one_like(x):
    if isinstance(x, Jet1):
        return Jet1.constant(1.0)
    if isinstance(x, Jet2):
        return Jet2.constant(1.0)
    return 1.0


def integer_power(base, n: int):
    """base**n by repeated multiplication; exact in jet space for any base."""
    if n == 0:
        return one_like(base)
    if n < 0:
        return one_like(base) / integer_power(base, -n)
    out = base
    for _ in range(n - 1):
        out = out * base
    return out


def _generic_pow(base, exponent):
    """base**exponent.

    Integer exponents (given as int, or float/constant-jet with integral
    value) use repeated multiplication.  Anything else requires a positive
    base and routes through exp/log.
    """
    if isinstance(exponent, int):
        return integer_power(base, exponent)
    if isinstance(exponent, float):
        if exponent.is_integer():
            return integer_power(base, int(exponent))
        exp_value = exponent
        exp_is_const = True
    elif isinstance(exponent, (Jet1, Jet2)):
        exp_value = value_of(exponent)
        exp_is_const = exponent.is_constant()
        if exp_is_const and float(exp_value).is_integer():
            return integer_power(base, int(exp_value))
    else:
        return NotImplemented
    if value_of(base) <= 0.0:
        raise JetDomainError(
            "non-integer exponent requires a positive base", "^", value_of(base)
        )
    return apply_function("exp", exponent * apply_function("log", base))


# Elementary function tables: value and first three derivatives at x.
# Domain checks raise JetDomainError so callers can attach context.


def _d_sin(x):
    s, c = math.sin(x), math.cos(x)
    return (s, c, -s, -c)


def _d_cos(x):
    s, c = math.sin(x), math.cos(x)
    return (c, -s, -c, s)


def _d_tan(x):
    t = math.tan(x)
    d1 = 1.0 + t * t
    return (t, d1, 2.0 * t * d1, d1 * (2.0 + 6.0 * t * t))


def _d_asin(x):
    if x <= -1.0 or x >= 1.0:
        raise JetDomainError("argument outside (-1, 1)", "asin", x)
    w = 1.0 - x * x
    r = 1.0 / math.sqrt(w)
    return (math.asin(x), r, x * r / w, (1.0 + 2.0 * x * x) * r / (w * w))


def _d_atan(x):
    w = 1.0 + x * x
    return (math.atan(x), 1.0 / w, -2.0 * x / (w * w), (6.0 * x * x - 2.0) / (w * w * w))


def _d_exp(x):
    e = math.exp(x)
    return (e, e, e, e)


def _d_log(x):
    if x <= 0.0:
        raise JetDomainError("argument must be positive", "log", x)
    return (math.log(x), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))


def _d_sqrt(x):
    if x < 0.0:
        raise JetDomainError("argument must be non-negative", "sqrt", x)
    if x == 0.0:
        raise JetDomainError("derivative undefined at zero", "sqrt", x)
    r = math.sqrt(x)
    return (r, 0.5 / r, -0.25 / (r * x), 0.375 / (r * x * x))


def _d_sinh(x):
    s, c = math.sinh(x), math.cosh(x)
    return (s, c, s, c)


def _d_cosh(x):
    s, c = math.sinh(x), math.cosh(x)
    return (c, s, c, s)


_DERIVATIVES = {
    "sin": _d_sin,
    "cos": _d_cos,
    "tan": _d_tan,
    "asin": _d_asin,
    "atan": _d_atan,
    "exp": _d_exp,
    "log": _d_log,
    "sqrt": _d_sqrt,
    "sinh": _d_sinh,
    "cosh": _d_cosh,
}

FUNCTION_NAMES = frozenset(_DERIVATIVES)


def compose1(name: str, inner: Jet1) -> Jet1:
    """Jet of f(inner) for an elementary f, by Faa di Bruno to order 3."""
    f0, f1, f2, f3 = _DERIVATIVES[name](inner.c0)
    g1, g2, g3 = inner.c1, inner.c2, inner.c3
    return Jet1(
        f0,
        f1 * g1,
        f1 * g2 + f2 * g1 * g1,
        f1 * g3 + 3.0 * f2 * g1 * g2 + f3 * g1 * g1 * g1,
    )


def compose2(name: str, inner: Jet2) -> Jet2:
    """Jet of f(inner) for an elementary f, bivariate chain rule to order 2."""
    f0, f1, f2, _ = _DERIVATIVES[name](inner.c00)
    return Jet2(
        f0,
        f1 * inner.c10,
        f1 * inner.c01,
        f1 * inner.c20 + f2 * inner.c10 * inner.c10,
        f1 * inner.c11 + f2 * inner.c10 * inner.c01,
        f1 * inner.c02 + f2 * inner.c01 * inner.c01,
    )


def apply_function(name: str, value):
    """Apply a named elementary function to a float, Jet1 or Jet2."""
    if isinstance(value, Jet1):
        return compose1(name, value)
    if isinstance(value, Jet2):
        return compose2(name, value)
    return _DERIVATIVES[name](float(value))[0]


_ARITH = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
}


def arith1(a: Jet1, b: Jet1, op: str) -> Jet1:
    return _ARITH[op](a, b)


def arith2(a: Jet2, b: Jet2, op: str) -> Jet2:
    return _ARITH[op](a, b)


# Finite-difference oracle.  Central stencils; the third derivative uses a
# 5-point stencil with its own (wider) step because the value noise is
# amplified by 1/h^3.

DEFAULT_FD_STEP = 1e-5
DEFAULT_FD_STEP3 = 1e-3


def fd_jet1(fn, x: float, h: float = DEFAULT_FD_STEP, h3: float = DEFAULT_FD_STEP3):
    """(value, d1, d2, d3) estimates for a black-box univariate function."""
    if h <= 0.0 or h3 <= 0.0:
        raise ValueError("steps must be positive")
    fm, f0, fp = fn(x - h), fn(x), fn(x + h)
    d1 = (fp - fm) / (2.0 * h)
    d2 = (fp - 2.0 * f0 + fm) / (h * h)
    g2, g1, gm1, gm2 = fn(x + 2.0 * h3), fn(x + h3), fn(x - h3), fn(x - 2.0 * h3)
    d3 = (g2 - 2.0 * g1 + 2.0 * gm1 - gm2) / (2.0 * h3 * h3 * h3)
    return (f0, d1, d2, d3)


def fd_jet2(fn, x: float, y: float, h: float = DEFAULT_FD_STEP):
    """(value, du, dv, duu, duv, dvv) estimates for a bivariate function."""
    if h <= 0.0:
        raise ValueError("step must be positive")
    f00 = fn(x, y)
    fp0, fm0 = fn(x + h, y), fn(x - h, y)
    f0p, f0m = fn(x, y + h), fn(x, y - h)
    fpp, fpm = fn(x + h, y + h), fn(x + h, y - h)
    fmp, fmm = fn(x - h, y + h), fn(x - h, y - h)
    du = (fp0 - fm0) / (2.0 * h)
    dv = (f0p - f0m) / (2.0 * h)
    duu = (fp0 - 2.0 * f00 + fm0) / (h * h)
    dvv = (f0p - 2.0 * f00 + f0m) / (h * h)
    duv = (fpp - fpm - fmp + fmm) / (4.0 * h * h)
    return (f00, du, dv, duu, duv, dvv)
