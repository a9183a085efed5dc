"""A small arithmetic expression language for user-supplied integrands.

Grammar (no implicit multiplication):

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' unary)?
    primary := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'

Precedence, loosest to tightest: additive, multiplicative, unary minus,
then '^'.  The power operator is right associative and binds tighter
than unary minus, so "-2^2" is -(2^2) = -4 and "2^3^2" is 2^(3^2).
NUMBER is a decimal literal with optional fraction and exponent.

Identifiers resolve, in order, to a function name when followed by '(',
otherwise to a declared variable or a named constant (pi, e); anything
else is a parse error.  Parse errors carry the byte offset plus what
was expected and found.  Evaluation errors (division by zero, ln of a
non-positive value, overflow to infinity and friends) carry the AST
node and the variable bindings in effect.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Union

from .errors import DyadicIntError

__all__ = [
    "BinOp",
    "Call",
    "Const",
    "EvalError",
    "ExprAst",
    "Neg",
    "Num",
    "ParseError",
    "Var",
    "as_function",
    "as_function2",
    "evaluate",
    "parse",
    "pretty",
]


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "ExprAst"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "ExprAst"


ExprAst = Union[Num, Var, Const, Neg, BinOp, Call]

CONSTANTS = {"pi": math.pi, "e": math.e}

FUNCTIONS = ("sin", "cos", "tan", "exp", "ln", "log2", "sqrt", "abs",
             "asin", "acos", "atan")


class ParseError(DyadicIntError):
    """Syntax error with byte offset, expected description and found text."""

    def __init__(self, offset: int, expected: str, found: str):
        self.offset = offset
        self.expected = expected
        self.found = found
        super().__init__(
            f"at byte {offset}: expected {expected}, found {found}")


class EvalError(DyadicIntError):
    """Evaluation failure carrying the AST node and the bindings in effect."""

    def __init__(self, message: str, node: ExprAst, bindings: Mapping[str, float]):
        self.node = node
        self.bindings = dict(bindings)
        super().__init__(message)


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)

# Nesting deeper than this is almost certainly garbage input; bailing
# out early keeps arbitrary byte strings from overflowing the C stack.
_MAX_DEPTH = 100


def _byte_offset(src: str, pos: int) -> int:
    return len(src[:pos].encode("utf-8", errors="replace"))


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    """Return (kind, text, byte offset) triples plus a trailing 'end'."""
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(_byte_offset(src, pos),
                             "a number, name, operator or parenthesis",
                             repr(src[pos]))
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), _byte_offset(src, m.start())))
        pos = m.end()
    tokens.append(("end", "", _byte_offset(src, len(src))))
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str, int]], variables: frozenset[str]):
        self.tokens = tokens
        self.pos = 0
        self.variables = variables
        self.depth = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, expected: str) -> ParseError:
        kind, text, offset = self.peek()
        found = "end of input" if kind == "end" else repr(text)
        return ParseError(offset, expected, found)

    def _enter(self) -> None:
        self.depth += 1
        if self.depth > _MAX_DEPTH:
            _, _, offset = self.peek()
            raise ParseError(offset, "a shallower expression",
                             f"nesting deeper than {_MAX_DEPTH}")

    def expr(self) -> ExprAst:
        self._enter()
        try:
            node = self.term()
            while self.peek()[0] == "op" and self.peek()[1] in "+-":
                op = self.advance()[1]
                node = BinOp(op, node, self.term())
            return node
        finally:
            self.depth -= 1

    def term(self) -> ExprAst:
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> ExprAst:
        self._enter()
        try:
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                self.advance()
                return Neg(self.unary())
            return self.power()
        finally:
            self.depth -= 1

    def power(self) -> ExprAst:
        node = self.primary()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.advance()
            return BinOp("^", node, self.unary())
        return node

    def primary(self) -> ExprAst:
        kind, text, offset = self.peek()
        if kind == "number":
            self.advance()
            value = float(text)
            if math.isinf(value):
                raise ParseError(offset, "a representable number", repr(text))
            return Num(value)
        if kind == "ident":
            self.advance()
            if self.peek()[0] == "op" and self.peek()[1] == "(":
                if text not in FUNCTIONS:
                    raise ParseError(offset, "a known function name",
                                     repr(text))
                self.advance()
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            if text in self.variables:
                return Var(text)
            if text in CONSTANTS:
                return Const(text)
            raise ParseError(offset, "a declared variable or constant",
                             repr(text))
        if kind == "op" and text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise self.error("a number, name or '('")

    def expect(self, op: str) -> None:
        kind, text, _ = self.peek()
        if kind == "op" and text == op:
            self.advance()
            return
        raise self.error(f"'{op}'")


def parse(src: str, variables: Iterable[str] = ("x",)) -> ExprAst:
    """Parse src into an AST; raises ParseError on any malformed input."""
    parser = _Parser(_tokenize(src), frozenset(variables))
    node = parser.expr()
    if parser.peek()[0] != "end":
        raise parser.error("an operator or end of input")
    return node


def _fail(message: str, node: ExprAst, bindings: Mapping[str, float]) -> EvalError:
    return EvalError(message, node, bindings)


def evaluate(node: ExprAst, bindings: Mapping[str, float]) -> float:
    """Evaluate an AST under the given variable bindings.

    Domain violations and overflow to infinity raise EvalError rather
    than leaking a NaN or infinity into the caller's arithmetic.
    """
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Var):
        try:
            return bindings[node.name]
        except KeyError:
            raise _fail(f"unbound variable {node.name!r}", node, bindings) from None
    if isinstance(node, Neg):
        return -evaluate(node.operand, bindings)
    if isinstance(node, Call):
        arg = evaluate(node.arg, bindings)
        return _apply(node, arg, bindings)
    if isinstance(node, BinOp):
        left = evaluate(node.left, bindings)
        right = evaluate(node.right, bindings)
        op = node.op
        if op == "+":
            value = left + right
        elif op == "-":
            value = left - right
        elif op == "*":
            value = left * right
        elif op == "/":
            if right == 0.0:
                raise _fail("division by zero", node, bindings)
            value = left / right
        else:  # "^"
            try:
                value = math.pow(left, right)
            except OverflowError:
                raise _fail("overflow in power", node, bindings) from None
            except ValueError:
                raise _fail(
                    f"invalid power {left!r} ^ {right!r}", node, bindings
                ) from None
        if math.isinf(value) or math.isnan(value):
            raise _fail(f"result of '{op}' is not finite", node, bindings)
        return value
    raise TypeError(f"not an expression node: {node!r}")


def _apply(node: Call, arg: float, bindings: Mapping[str, float]) -> float:
    name = node.fn
    if name == "ln" or name == "log2":
        if arg <= 0.0:
            raise _fail(f"{name} of non-positive value {arg!r}", node, bindings)
        return math.log(arg) if name == "ln" else math.log2(arg)
    if name == "sqrt":
        if arg < 0.0:
            raise _fail(f"sqrt of negative value {arg!r}", node, bindings)
        return math.sqrt(arg)
    if name in ("asin", "acos"):
        if not -1.0 <= arg <= 1.0:
            raise _fail(f"{name} argument {arg!r} outside [-1, 1]", node, bindings)
        return math.asin(arg) if name == "asin" else math.acos(arg)
    if name == "exp":
        try:
            return math.exp(arg)
        except OverflowError:
            raise _fail(f"exp overflow at {arg!r}", node, bindings) from None
    fn = {"sin": math.sin, "cos": math.cos, "tan": math.tan,
          "abs": abs, "atan": math.atan}[name]
    try:
        value = fn(arg)
    except ValueError:
        raise _fail(f"{name} of invalid value {arg!r}", node, bindings) from None
    if math.isinf(value) or math.isnan(value):
        raise _fail(f"{name} result is not finite", node, bindings)
    return value


def pretty(node: ExprAst) -> str:
    """Fully parenthesized rendering; parse(pretty(ast)) reproduces ast."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, (Var, Const)):
        return node.name
    if isinstance(node, Neg):
        return f"(-{pretty(node.operand)})"
    if isinstance(node, BinOp):
        return f"({pretty(node.left)} {node.op} {pretty(node.right)})"
    if isinstance(node, Call):
        return f"{node.fn}({pretty(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


def as_function(node: ExprAst, var: str = "x") -> Callable[[float], float]:
    """Close an AST over a single variable name."""

    def fn(value: float) -> float:
        return evaluate(node, {var: value})

    return fn


def as_function2(node: ExprAst, vars_: tuple[str, str] = ("x", "y")) -> Callable[[float, float], float]:
    """Close an AST over two variable names."""
    first, second = vars_

    def fn(x: float, y: float) -> float:
        return evaluate(node, {first: x, second: y})

    return fn
