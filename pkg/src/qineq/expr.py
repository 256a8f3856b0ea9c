"""Single-variable expression language for the integrands f and g.

Grammar (whitespace insignificant)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')'

``^`` is right-associative and binds tighter than unary minus, so
``-x^2`` is ``-(x^2)`` and ``2^3^2`` is ``2^(3^2)``.  There is no implicit
multiplication.

Evaluation is total-or-error: a successful result is always a finite float,
anything else raises :class:`DomainError` or :class:`NonFinite`.
"""

from __future__ import annotations

import math
import re
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Union

__all__ = [
    "BinOp",
    "Call",
    "DomainError",
    "EvalError",
    "ExprSyntaxError",
    "Expression",
    "FUNCTIONS",
    "Neg",
    "NonFinite",
    "Num",
    "UnknownFunction",
    "Var",
    "evaluate",
    "parse",
    "to_source",
]

INTEGER_TOL = 1e-12


class EvalError(ArithmeticError):
    """Base class for evaluation failures; carries the failing point."""

    def __init__(self, point: float, reason: str, subexpr: str = ""):
        self.point = point
        self.reason = reason
        self.subexpr = subexpr
        where = f" in {subexpr!r}" if subexpr else ""
        super().__init__(f"{reason} at x={point!r}{where}")


class DomainError(EvalError):
    """The expression is undefined at the point (ln of non-positive, etc.)."""


class NonFinite(EvalError):
    """The evaluation overflowed or produced NaN."""


class ExprSyntaxError(ValueError):
    """Malformed source.  ``offset`` is a byte offset into the UTF-8 text."""

    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        self.offset = offset
        self.expected = expected
        exp = f"; expected one of {sorted(expected)}" if expected else ""
        super().__init__(f"{message} at offset {offset}{exp}")


class UnknownFunction(ValueError):
    def __init__(self, name: str, offset: int):
        self.name = name
        self.offset = offset
        super().__init__(f"unknown identifier {name!r} at offset {offset}")


# --------------------------------------------------------------------------
# AST
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: Node


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: Node
    right: Node


@dataclass(frozen=True)
class Call:
    name: str
    arg: Node


Node = Union[Num, Var, Neg, BinOp, Call]


def _ln(v: float) -> float:
    if v <= 0.0:
        raise ValueError("ln of non-positive")
    return math.log(v)


def _sqrt(v: float) -> float:
    if v < 0.0:
        raise ValueError("sqrt of negative")
    return math.sqrt(v)


def _exp(v: float) -> float:
    return math.exp(v)  # OverflowError is mapped to NonFinite


FUNCTIONS: dict[str, Callable[[float], float]] = {
    "ln": _ln,
    "exp": _exp,
    "sqrt": _sqrt,
    "abs": abs,
    "sin": math.sin,
    "cos": math.cos,
}


# --------------------------------------------------------------------------
# Tokenizer / parser
# --------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)

_BINARY_FOLLOW = frozenset({"+", "-", "*", "/", "^", ")", "<end>"})
_OPERAND_START = frozenset({"<number>", "x", "<function>", "(", "-"})


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'num' | 'ident' | 'op' | 'end'
    text: str
    offset: int  # byte offset


def _tokenize(source: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    byte_pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", byte_pos)
        text = m.group()
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, text, byte_pos))
        byte_pos += len(text.encode("utf-8"))
        pos = m.end()
    toks.append(_Tok("end", "", byte_pos))
    return toks


class _Parser:
    def __init__(self, source: str):
        self.toks = _tokenize(source)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _fail(self, expected: frozenset[str]):
        t = self.tok
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise ExprSyntaxError(f"unexpected {found}", t.offset, expected)

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            self._fail(_BINARY_FOLLOW - {")"})
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.i += 1
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.i += 1
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Num(float(t.text))
        if t.kind == "ident":
            if t.text == "x":
                self.i += 1
                return Var()
            if t.text not in FUNCTIONS:
                raise UnknownFunction(t.text, t.offset)
            self.i += 1
            self._expect("(")
            arg = self.expr()
            self._expect(")")
            return Call(t.text, arg)
        if t.kind == "op" and t.text == "(":
            self.i += 1
            node = self.expr()
            self._expect(")")
            return node
        self._fail(_OPERAND_START - {"-"})

    def _expect(self, text: str) -> None:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return
        if text == ")":
            self._fail(frozenset({")", "+", "-", "*", "/", "^"}))
        self._fail(frozenset({text}))


# --------------------------------------------------------------------------
# Printing
# --------------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    return 5


def _fmt_num(v: float) -> str:
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


def to_source(node: Node) -> str:
    """Render ``node`` with the minimum parentheses needed to re-parse it
    to the identical tree."""
    if isinstance(node, Num):
        return _fmt_num(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Call):
        return f"{node.name}({to_source(node.arg)})"
    if isinstance(node, Neg):
        inner = to_source(node.operand)
        return f"-({inner})" if _prec(node.operand) < 3 else f"-{inner}"
    p = _PREC[node.op]
    left, right = to_source(node.left), to_source(node.right)
    if node.op == "^":
        if _prec(node.left) <= 4:
            left = f"({left})"
        if _prec(node.right) < 3:
            right = f"({right})"
        return f"{left}^{right}"
    if _prec(node.left) < p:
        left = f"({left})"
    if _prec(node.right) <= p:
        right = f"({right})"
    return f"{left} {node.op} {right}"


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------


def _pow(a: float, b: float) -> float:
    if a < 0.0:
        rb = round(b)
        if abs(b - rb) > INTEGER_TOL:
            raise ValueError("non-integer power of negative")
        b = float(rb)
    elif a == 0.0 and b < 0.0:
        raise ValueError("division by zero")
    return math.pow(a, b)


def _compile(node: Node) -> Callable[[float], float]:
    """Compile to nested closures.  Errors surface as ValueError (domain),
    ZeroDivisionError or OverflowError and are translated by the caller."""
    if isinstance(node, Num):
        c = node.value
        return lambda x: c
    if isinstance(node, Var):
        return lambda x: x
    if isinstance(node, Neg):
        inner = _compile(node.operand)
        return lambda x: -inner(x)
    if isinstance(node, Call):
        fn = FUNCTIONS[node.name]
        arg = _compile(node.arg)
        return lambda x: fn(arg(x))
    lf, rf = _compile(node.left), _compile(node.right)
    if node.op == "+":
        return lambda x: lf(x) + rf(x)
    if node.op == "-":
        return lambda x: lf(x) - rf(x)
    if node.op == "*":
        return lambda x: lf(x) * rf(x)
    if node.op == "/":
        return lambda x: lf(x) / rf(x)
    return lambda x: _pow(lf(x), rf(x))


def _locate(node: Node, x: float) -> tuple[str, str, bool]:
    """Slow path: find the innermost failing subexpression.

    Returns (reason, subexpression source, is_domain_error)."""

    def walk(n: Node) -> float:
        if isinstance(n, Num):
            return n.value
        if isinstance(n, Var):
            return x
        if isinstance(n, Neg):
            v = -walk(n.operand)
        elif isinstance(n, Call):
            a = walk(n.arg)
            try:
                v = FUNCTIONS[n.name](a)
            except ValueError as exc:
                raise _Located(str(exc), n, True) from None
            except OverflowError:
                raise _Located(f"{n.name} overflow", n, False) from None
        else:
            a, b = walk(n.left), walk(n.right)
            try:
                if n.op == "+":
                    v = a + b
                elif n.op == "-":
                    v = a - b
                elif n.op == "*":
                    v = a * b
                elif n.op == "/":
                    if b == 0.0:
                        raise _Located("division by zero", n, True)
                    v = a / b
                else:
                    v = _pow(a, b)
            except ValueError as exc:
                raise _Located(str(exc), n, True) from None
            except OverflowError:
                raise _Located("overflow", n, False) from None
        if not math.isfinite(v):
            raise _Located("non-finite result", n, False)
        return v

    try:
        walk(node)
    except _Located as loc:
        return loc.reason, to_source(loc.node), loc.domain
    return "non-finite result", to_source(node), False


class _Located(Exception):
    def __init__(self, reason: str, node: Node, domain: bool):
        self.reason, self.node, self.domain = reason, node, domain


@dataclass(frozen=True)
class Expression:
    """A parsed expression.  Immutable; calling it evaluates at a point."""

    root: Node
    source: str = field(default="", compare=False)
    _fn: Callable[[float], float] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_fn", _compile(self.root))
        if not self.source:
            object.__setattr__(self, "source", to_source(self.root))

    def __call__(self, x: float) -> float:
        try:
            v = self._fn(x)
        except (ValueError, ZeroDivisionError, OverflowError):
            v = math.nan
        if v != v or v in (math.inf, -math.inf):
            reason, sub, domain = _locate(self.root, x)
            cls = DomainError if domain else NonFinite
            raise cls(x, reason, sub)
        return v

    def __str__(self) -> str:
        return to_source(self.root)


def parse(source: str) -> Expression:
    """Parse ``source`` into an :class:`Expression`.

    Raises :class:`ExprSyntaxError` or :class:`UnknownFunction`.
    """
    return Expression(_Parser(source).parse(), source.strip())


def evaluate(e: Expression, x: float) -> float:
    return e(x)
