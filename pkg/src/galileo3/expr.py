"""A small scalar expression language for coordinate functions.

Grammar (no implicit multiplication, ``^`` right-associative and binding
tighter than unary minus)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?
    atom   := number | name | name '(' expr ')' | '(' expr ')'

Functions: sin cos tan asin atan exp log sqrt sinh cosh.  Named constants
``pi`` and ``e`` are folded into constants at parse time.  Trees are
immutable; all constants are non-negative by construction (negation is an
explicit node), which makes the canonical printer a strict inverse of the
parser.

Evaluation is a single generic tree walk: binding variables to floats gives
plain values, binding them to ``Jet1``/``Jet2`` seeds gives exact
derivatives.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from . import jets
from .errors import ExprError, ExprEvalError, JetDomainError
from .jets import Jet1, Jet2

__all__ = [
    "Token",
    "ExprNode",
    "Constant",
    "Variable",
    "Neg",
    "Binary",
    "Call",
    "tokenize",
    "parse",
    "to_source",
    "free_variables",
    "substitute",
    "evaluate",
    "eval_value",
    "eval_jet1",
    "eval_jet2",
]

CONSTANTS = {"pi": math.pi, "e": math.e}


@dataclass(frozen=True)
class Token:
    kind: str  # number | identifier | operator | lparen | rparen | comma
    lexeme: str
    position: int  # byte offset


class ExprNode:
    """Base class for AST nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Constant(ExprNode):
    value: float

    def eval(self, env):
        return self.value


@dataclass(frozen=True)
class Variable(ExprNode):
    name: str

    def eval(self, env):
        return env[self.name]


@dataclass(frozen=True)
class Neg(ExprNode):
    child: ExprNode

    def eval(self, env):
        return -self.child.eval(env)


@dataclass(frozen=True)
class Binary(ExprNode):
    op: str  # + - * / ^
    left: ExprNode
    right: ExprNode

    def eval(self, env):
        op = self.op
        lhs = self.left.eval(env)
        rhs = self.right.eval(env)
        if op == "+":
            return lhs + rhs
        if op == "-":
            return lhs - rhs
        if op == "*":
            return lhs * rhs
        if op == "/":
            try:
                return lhs / rhs
            except ZeroDivisionError:
                raise ExprEvalError("division by zero", to_source(self)) from None
            except JetDomainError as ex:
                raise ExprEvalError(str(ex), to_source(self)) from None
        # '^'
        try:
            return _power(lhs, rhs)
        except (ZeroDivisionError, ValueError, OverflowError) as ex:
            raise ExprEvalError(f"power error: {ex}", to_source(self)) from None
        except JetDomainError as ex:
            raise ExprEvalError(str(ex), to_source(self)) from None


@dataclass(frozen=True)
class Call(ExprNode):
    fn: str
    arg: ExprNode

    def eval(self, env):
        value = self.arg.eval(env)
        try:
            return jets.apply_function(self.fn, value)
        except JetDomainError as ex:
            raise ExprEvalError(str(ex), to_source(self)) from None
        except (ValueError, OverflowError) as ex:
            raise ExprEvalError(
                f"{self.fn}: {ex} (argument value {jets.value_of(value)!r})",
                to_source(self),
            ) from None


def _power(base, exponent):
    """^ semantics shared by floats and jets: exact integer powers, exp/log
    for the rest (positive bases only)."""
    if isinstance(base, (Jet1, Jet2)):
        return base ** exponent
    # float base
    if isinstance(exponent, (Jet1, Jet2)):
        if exponent.is_constant():
            exponent = jets.value_of(exponent)
        else:
            if base <= 0.0:
                raise JetDomainError(
                    "non-integer exponent requires a positive base", "^", base
                )
            return jets.apply_function("exp", exponent * math.log(base))
    if float(exponent).is_integer():
        return jets.integer_power(base, int(exponent))
    if base <= 0.0:
        raise JetDomainError("non-integer exponent requires a positive base", "^", base)
    return math.exp(exponent * math.log(base))


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<identifier>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<operator>[-+*/^])
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<comma>,)
""",
    re.VERBOSE,
)


def _byte_offset(source: str, index: int) -> int:
    return len(source[:index].encode("utf-8"))


def tokenize(source: str) -> list[Token]:
    """Scan source into tokens; positions are byte offsets."""
    tokens = []
    i = 0
    n = len(source)
    while i < n:
        m = _TOKEN_RE.match(source, i)
        if m is None:
            raise ExprError(
                f"unexpected character {source[i]!r}", _byte_offset(source, i)
            )
        kind = m.lastgroup
        if kind != "ws":
            lexeme = m.group()
            pos = _byte_offset(source, i)
            if kind == "number" and not math.isfinite(float(lexeme)):
                raise ExprError(f"number literal overflows: {lexeme}", pos)
            tokens.append(Token(kind, lexeme, pos))
        i = m.end()
    return tokens


class _Parser:
    def __init__(self, source: str, variables: list[str]):
        if not 1 <= len(variables) <= 2:
            raise ValueError("variables must list one or two names")
        if len(set(variables)) != len(variables):
            raise ValueError("variable names must be distinct")
        for name in variables:
            if name in jets.FUNCTION_NAMES or name in CONSTANTS:
                raise ValueError(f"variable name {name!r} shadows a builtin")
        self.source = source
        self.variables = set(variables)
        self.tokens = tokenize(source)
        self.index = 0

    def peek(self) -> Token | None:
        if self.index < len(self.tokens):
            return self.tokens[self.index]
        return None

    def advance(self) -> Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def end_position(self) -> int:
        return _byte_offset(self.source, len(self.source))

    def fail(self, message: str, kind: str = "syntax"):
        tok = self.peek()
        pos = tok.position if tok is not None else self.end_position()
        raise ExprError(message, pos, kind)

    def expect_operator(self, ops: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.kind == "operator" and tok.lexeme in ops:
            self.advance()
            return True
        return False

    def parse(self) -> ExprNode:
        node = self.expr()
        tok = self.peek()
        if tok is not None:
            raise ExprError(f"unexpected token {tok.lexeme!r}", tok.position)
        return node

    def expr(self) -> ExprNode:
        node = self.term()
        while True:
            tok = self.peek()
            if tok is not None and tok.kind == "operator" and tok.lexeme in "+-":
                self.advance()
                node = Binary(tok.lexeme, node, self.term())
            else:
                return node

    def term(self) -> ExprNode:
        node = self.factor()
        while True:
            tok = self.peek()
            if tok is not None and tok.kind == "operator" and tok.lexeme in "*/":
                self.advance()
                node = Binary(tok.lexeme, node, self.factor())
            else:
                return node

    def factor(self) -> ExprNode:
        tok = self.peek()
        if tok is not None and tok.kind == "operator" and tok.lexeme == "-":
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self) -> ExprNode:
        node = self.atom()
        if self.expect_operator("^"):
            return Binary("^", node, self.factor())
        return node

    def atom(self) -> ExprNode:
        tok = self.peek()
        if tok is None:
            raise ExprError("unexpected end of input", self.end_position())
        if tok.kind == "number":
            self.advance()
            return Constant(float(tok.lexeme))
        if tok.kind == "identifier":
            self.advance()
            name = tok.lexeme
            follows_paren = (
                self.peek() is not None and self.peek().kind == "lparen"
            )
            if follows_paren:
                if name not in jets.FUNCTION_NAMES:
                    if name in self.variables or name in CONSTANTS:
                        raise ExprError(
                            f"{name!r} is not a function", tok.position, "arity"
                        )
                    raise ExprError(
                        f"unknown identifier {name!r}",
                        tok.position,
                        "unknown-identifier",
                    )
                self.advance()  # (
                arg = self.expr()
                nxt = self.peek()
                if nxt is not None and nxt.kind == "comma":
                    raise ExprError(
                        f"{name} takes exactly one argument", nxt.position, "arity"
                    )
                if nxt is None or nxt.kind != "rparen":
                    self.fail("expected ')'")
                self.advance()
                return Call(name, arg)
            if name in self.variables:
                return Variable(name)
            if name in CONSTANTS:
                return Constant(CONSTANTS[name])
            if name in jets.FUNCTION_NAMES:
                raise ExprError(
                    f"function {name!r} used without arguments", tok.position, "arity"
                )
            raise ExprError(
                f"unknown identifier {name!r}", tok.position, "unknown-identifier"
            )
        if tok.kind == "lparen":
            self.advance()
            node = self.expr()
            nxt = self.peek()
            if nxt is None or nxt.kind != "rparen":
                self.fail("expected ')'")
            self.advance()
            return node
        raise ExprError(f"unexpected token {tok.lexeme!r}", tok.position)


def parse(source: str, variables: list[str]) -> ExprNode:
    """Parse source into an AST over the declared variables."""
    return _Parser(source, list(variables)).parse()


_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 10, 20, 30, 40, 100


def _prec(node: ExprNode) -> int:
    if isinstance(node, Binary):
        if node.op in "+-":
            return _PREC_ADD
        if node.op in "*/":
            return _PREC_MUL
        return _PREC_POW
    if isinstance(node, Neg):
        return _PREC_NEG
    return _PREC_ATOM


def to_source(node: ExprNode) -> str:
    """Canonical printer; re-parsing the output reproduces the tree."""
    if isinstance(node, Constant):
        return repr(node.value)
    if isinstance(node, Variable):
        return node.name
    if isinstance(node, Call):
        return f"{node.fn}({to_source(node.arg)})"
    if isinstance(node, Neg):
        child = to_source(node.child)
        if _prec(node.child) < _PREC_NEG:
            child = f"({child})"
        return f"-{child}"
    if isinstance(node, Binary):
        lhs = to_source(node.left)
        rhs = to_source(node.right)
        if node.op == "^":
            if _prec(node.left) < _PREC_ATOM:
                lhs = f"({lhs})"
            if _prec(node.right) < _PREC_NEG:
                rhs = f"({rhs})"
        else:
            mine = _prec(node)
            if _prec(node.left) < mine:
                lhs = f"({lhs})"
            if _prec(node.right) <= mine:
                rhs = f"({rhs})"
        return f"{lhs}{node.op}{rhs}"
    raise TypeError(f"not an expression node: {node!r}")


def free_variables(node: ExprNode) -> frozenset[str]:
    names: set[str] = set()
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, Variable):
            names.add(n.name)
        elif isinstance(n, Neg):
            stack.append(n.child)
        elif isinstance(n, Binary):
            stack.append(n.left)
            stack.append(n.right)
        elif isinstance(n, Call):
            stack.append(n.arg)
    return frozenset(names)


def substitute(node: ExprNode, name: str, replacement: ExprNode) -> ExprNode:
    """Tree with every occurrence of the variable replaced by another tree."""
    if isinstance(node, Variable):
        return replacement if node.name == name else node
    if isinstance(node, Neg):
        return Neg(substitute(node.child, name, replacement))
    if isinstance(node, Binary):
        return Binary(
            node.op,
            substitute(node.left, name, replacement),
            substitute(node.right, name, replacement),
        )
    if isinstance(node, Call):
        return Call(node.fn, substitute(node.arg, name, replacement))
    return node


def evaluate(node: ExprNode, env: dict):
    """Evaluate with variables bound to floats, Jet1 or Jet2 values."""
    try:
        return node.eval(env)
    except KeyError as ex:
        raise ExprEvalError(f"unbound variable {ex.args[0]!r}", to_source(node)) from None


def _point_of(env: dict) -> dict:
    return {k: jets.value_of(v) for k, v in env.items()}


def _guarded_eval(node: ExprNode, env: dict):
    """Evaluate, attach the parameter point to any failure, reject NaN/Inf."""
    try:
        result = node.eval(env)
    except ExprEvalError as err:
        if err.point is None:
            raise ExprEvalError(err.reason, err.subexpr, _point_of(env)) from None
        raise
    except KeyError as err:
        raise ExprEvalError(
            f"unbound variable {err.args[0]!r}", to_source(node), _point_of(env)
        ) from None
    if isinstance(result, (Jet1, Jet2)):
        ok = result.is_finite()
    else:
        ok = math.isfinite(result)
    if not ok:
        raise ExprEvalError("non-finite result", to_source(node), _point_of(env))
    return result


def eval_value(node: ExprNode, env: dict) -> float:
    """Plain float evaluation with the finiteness guard."""
    return _guarded_eval(node, env)


def eval_jet1(node: ExprNode, at, var: str | None = None) -> Jet1:
    """Value and first three derivatives at a point.

    ``at`` may be a float (seeded automatically) or a prepared Jet1.  The
    variable name is taken from the tree when unambiguous.
    """
    if var is None:
        names = free_variables(node)
        if len(names) > 1:
            raise ValueError(f"expression has arity {len(names)}, expected 1")
        var = next(iter(names)) if names else "_"
    jet = at if isinstance(at, Jet1) else Jet1.seed(at)
    result = _guarded_eval(node, {var: jet})
    if not isinstance(result, Jet1):
        result = Jet1.constant(result)
    return result


def eval_jet2(node: ExprNode, u, v, names: tuple[str, str]) -> Jet2:
    """Value, first and second partials at a point of a two-variable tree."""
    ju = u if isinstance(u, Jet2) else Jet2.seed_u(u)
    jv = v if isinstance(v, Jet2) else Jet2.seed_v(v)
    result = _guarded_eval(node, {names[0]: ju, names[1]: jv})
    if not isinstance(result, Jet2):
        result = Jet2.constant(result)
    return result


# Builders used by constructors and motion transforms.  They normalise
# negative constants so built trees stay printable/re-parsable.


def const(value: float) -> ExprNode:
    v = float(value)
    if v < 0.0:
        return Neg(Constant(-v))
    return Constant(v)


def var(name: str) -> ExprNode:
    return Variable(name)


def add(a: ExprNode, b: ExprNode) -> ExprNode:
    return Binary("+", a, b)


def sub(a: ExprNode, b: ExprNode) -> ExprNode:
    return Binary("-", a, b)


def mul(a: ExprNode, b: ExprNode) -> ExprNode:
    return Binary("*", a, b)


def div(a: ExprNode, b: ExprNode) -> ExprNode:
    return Binary("/", a, b)


def pow_(a: ExprNode, b: ExprNode) -> ExprNode:
    return Binary("^", a, b)


def call(fn: str, arg: ExprNode) -> ExprNode:
    return Call(fn, arg)
