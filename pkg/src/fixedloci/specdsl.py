"""A small expression language for building and comparing series.

    expr := term (("+"|"-") term)*
    term := pow (("*"|"/") pow)*
    pow  := atom ("^" integer)?
    atom := integer | "q" | "t" | call | "(" expr ")"
    call := name "(" args? ")"
    args := arg ("," arg)*    arg := int | "[" int ("," int)* "]"

Builtin arguments accept an optional leading minus sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from . import fermionic as F
from .census import Cocharacter, DimensionSource, h0_series, poincare_series
from .characters import MinimalModelLabel, virasoro_char
from .qseries import (
    MINUS,
    PLUS,
    RECIPROCAL,
    BivariateSeries,
    TruncatedSeries,
    q_binomial,
    residue_product,
)

INT, LIST = "int", "list"

# name -> argument shapes
BUILTINS: dict[str, tuple[str, ...]] = {
    "posq": (INT,),
    "etaq": (INT,),
    "resprod": (INT, LIST),
    "virasoro": (INT, INT, INT, INT),
    "jfun": (INT, INT, INT),
    "efun": (INT, INT, INT),
    "rho": (INT, INT),
    "h0": (INT, INT, INT, LIST),
    "poincare": (INT, INT, INT, LIST),
    "qbin": (INT, INT),
}


class DslSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(expected))
        super().__init__(f"{line}:{column}: {message} (expected {', '.join(self.expected)})")


class EvalError(ValueError):
    pass


# ---------------------------------------------------------------------------
# AST; positions are informational and excluded from equality


@dataclass(frozen=True)
class Num:
    value: int
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Ast"
    right: "Ast"
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Pow:
    base: "Ast"
    exponent: int
    pos: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple
    pos: tuple = field(default=(0, 0), compare=False)


Ast = Union[Num, Var, BinOp, Pow, Call]


# ---------------------------------------------------------------------------
# lexer


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", a punctuation character, or "end"
    text: str
    line: int
    column: int


_PUNCT = set("+-*/^()[],")


def tokenize(text: str) -> list[Token]:
    out = []
    i, line, col = 0, 1, 1
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(Token("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in _PUNCT:
            out.append(Token(ch, ch, line, col))
            i, col = i + 1, col + 1
            continue
        raise DslSyntaxError(f"unexpected character {ch!r}", line, col, {"expression"})
    out.append(Token("end", "", line, col))
    return out


# ---------------------------------------------------------------------------
# parser

_ATOM_START = {"integer", "q", "t", "(", *BUILTINS}


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.k = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.k]

    def fail(self, expected, message: Optional[str] = None):
        t = self.tok
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise DslSyntaxError(message or f"unexpected {found}", t.line, t.column, expected)

    def take(self, kind: str) -> Token:
        if self.tok.kind != kind:
            self.fail({kind})
        t = self.tok
        self.k += 1
        return t

    def parse(self) -> Ast:
        node = self.expr()
        if self.tok.kind != "end":
            self.fail({"+", "-", "*", "/", "^", "end of input"})
        return node

    def expr(self) -> Ast:
        node = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.take(self.tok.kind)
            node = BinOp(op.text, node, self.term(), (op.line, op.column))
        return node

    def term(self) -> Ast:
        node = self.power()
        while self.tok.kind in ("*", "/"):
            op = self.take(self.tok.kind)
            node = BinOp(op.text, node, self.power(), (op.line, op.column))
        return node

    def power(self) -> Ast:
        node = self.atom()
        if self.tok.kind == "^":
            op = self.take("^")
            if self.tok.kind != "int":
                self.fail({"integer"})
            node = Pow(node, int(self.take("int").text), (op.line, op.column))
        return node

    def atom(self) -> Ast:
        t = self.tok
        pos = (t.line, t.column)
        if t.kind == "int":
            self.k += 1
            return Num(int(t.text), pos)
        if t.kind == "(":
            self.k += 1
            node = self.expr()
            if self.tok.kind != ")":
                self.fail({")", "+", "-", "*", "/", "^"})
            self.k += 1
            return node
        if t.kind == "name":
            if t.text in ("q", "t"):
                self.k += 1
                return Var(t.text, pos)
            if t.text not in BUILTINS:
                self.fail(_ATOM_START - {"integer", "q", "t", "("}, f"unknown builtin {t.text!r}")
            self.k += 1
            return self.call(t.text, pos)
        self.fail(_ATOM_START)

    def signed_int(self) -> int:
        sign = 1
        if self.tok.kind == "-":
            self.k += 1
            sign = -1
        if self.tok.kind != "int":
            self.fail({"integer"} if sign < 0 else {"integer", "-"})
        return sign * int(self.take("int").text)

    def arg(self):
        if self.tok.kind == "[":
            self.k += 1
            items = [self.signed_int()]
            while self.tok.kind == ",":
                self.k += 1
                items.append(self.signed_int())
            if self.tok.kind != "]":
                self.fail({",", "]"})
            self.k += 1
            return tuple(items)
        if self.tok.kind not in ("int", "-"):
            self.fail({"integer", "-", "["})
        return self.signed_int()

    def call(self, name: str, pos) -> Call:
        self.take("(")
        args = []
        if self.tok.kind != ")":
            args.append(self.arg())
            while self.tok.kind == ",":
                self.k += 1
                args.append(self.arg())
        if self.tok.kind != ")":
            self.fail({",", ")"})
        close = self.tok
        self.k += 1
        shape = BUILTINS[name]
        if len(args) != len(shape):
            raise DslSyntaxError(
                f"{name} takes {len(shape)} argument(s), got {len(args)}", close.line, close.column, {"arity " + str(len(shape))}
            )
        for a, kind in zip(args, shape):
            if (kind == LIST) != isinstance(a, tuple):
                raise DslSyntaxError(
                    f"{name}: argument kinds are ({', '.join(shape)})", close.line, close.column, set(shape)
                )
        return Call(name, tuple(args), pos)


def parse(text: str) -> Ast:
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# canonical printer

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _fmt_arg(a) -> str:
    if isinstance(a, tuple):
        return "[" + ",".join(str(x) for x in a) + "]"
    return str(a)


def to_text(node: Ast) -> str:
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.name}(" + ",".join(_fmt_arg(a) for a in node.args) + ")"
    if isinstance(node, Pow):
        base = to_text(node.base)
        if isinstance(node.base, (BinOp, Pow)):
            base = f"({base})"
        return f"{base}^{node.exponent}"
    p = _PREC[node.op]
    left = to_text(node.left)
    if isinstance(node.left, BinOp) and _PREC[node.left.op] < p:
        left = f"({left})"
    right = to_text(node.right)
    if isinstance(node.right, BinOp) and _PREC[node.right.op] <= p:
        right = f"({right})"
    return f"{left} {node.op} {right}"


# ---------------------------------------------------------------------------
# evaluation


def uses_t(node: Ast) -> bool:
    if isinstance(node, Var):
        return node.name == "t"
    if isinstance(node, Call):
        return node.name == "poincare"
    if isinstance(node, Pow):
        return uses_t(node.base)
    if isinstance(node, BinOp):
        return uses_t(node.left) or uses_t(node.right)
    return False


def _builtin(name: str, args: tuple, order: int, t_order: Optional[int], source):
    if name == "posq":
        return residue_product(1, {0}, PLUS, _positive(name, args[0]), order)
    if name == "etaq":
        return residue_product(1, {0}, MINUS, _positive(name, args[0]), order)
    if name == "resprod":
        return residue_product(_positive(name, args[0]), args[1], RECIPROCAL, 1, order)
    if name == "virasoro":
        return virasoro_char(MinimalModelLabel(*args), order)
    if name == "jfun":
        return F.andrews_J(*args, order)
    if name == "efun":
        return F.corteel_E(*args, order)
    if name == "rho":
        return F.fermionic_rho_sum(*args, order)
    if name == "qbin":
        return q_binomial(args[0], args[1], order)
    r, a, b, w = args
    c = Cocharacter(a, b, w)
    if name == "h0":
        return h0_series(r, c, order, source)
    return poincare_series(r, c, t_order, source)


def _positive(name: str, v: int) -> int:
    if v < 1:
        raise EvalError(f"{name}: argument must be positive, got {v}")
    return v


def evaluate(
    node: Ast,
    order: int,
    t_order: Optional[int] = None,
    source: Optional[DimensionSource] = None,
) -> Union[TruncatedSeries, BivariateSeries]:
    """Exact value to q-order ``order``; bivariate when ``t`` or ``poincare`` occurs.

    In bivariate mode q-degrees are capped at ``order``.
    """
    if order < 0:
        raise EvalError("order must be nonnegative")
    bivariate = uses_t(node)
    if bivariate and t_order is None:
        raise EvalError("expression uses t; a t-order is required")

    def lift(s):
        if bivariate and isinstance(s, TruncatedSeries):
            return BivariateSeries.from_series(s, t_order)
        if bivariate and s.q_cap is None:
            return BivariateSeries.from_polys(s.coeffs, s.t_order, order)
        return s

    def ev(n: Ast):
        if isinstance(n, Num):
            return lift(TruncatedSeries.monomial(0, order, n.value))
        if isinstance(n, Var):
            if n.name == "q":
                return lift(TruncatedSeries.monomial(1, order))
            return BivariateSeries.t_monomial(1, t_order, order)
        if isinstance(n, Call):
            return lift(_builtin(n.name, n.args, order, t_order, source))
        if isinstance(n, Pow):
            return ev(n.base) ** n.exponent
        a, b = ev(n.left), ev(n.right)
        if n.op == "+":
            return a + b
        if n.op == "-":
            return a - b
        if n.op == "*":
            return a * b
        try:
            return a / b
        except ZeroDivisionError as exc:
            raise EvalError(f"{n.pos[0]}:{n.pos[1]}: division by a non-unit ({exc})") from None

    return ev(node)


def evaluate_text(text: str, order: int, t_order: Optional[int] = None, source=None):
    return evaluate(parse(text), order, t_order, source)
