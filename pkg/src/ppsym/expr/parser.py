"""Recursive-descent parser for the expression grammar.

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ('^' factor)? | '-' factor
    atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
            | ident "'" '[' int (',' int)* ']' '(' expr (',' expr)* ')'

The last production spells a partial derivative of a function symbol, so that
printed derivative terms parse back. Error positions are 1-based columns.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .nodes import (
    BUILTINS,
    ArityError,
    Expr,
    ExprError,
    FunctionSymbol,
    Num,
    Real,
    Symbol,
    add,
    apply,
    builtin,
    deriv_apply,
    mul,
    neg,
    pow_,
    MINUS_ONE,
)

PPWAVE_COORDS = ("u", "v", "y", "z")

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^(),'\[\]]))"
)


class ParseError(ExprError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class UnknownIdentifier(ParseError):
    pass


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int  # 1-based column


def tokenize(source: str) -> list:
    tokens = []
    i = 0
    n = len(source)
    while i < n:
        if source[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(source, i)
        if not m or m.end() == i:
            raise ParseError(f"unexpected character {source[i]!r}", i + 1)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(_Tok(kind, m.group(kind), start + 1))
        i = m.end()
    tokens.append(_Tok("end", "", n + 1))
    return tokens


@dataclass
class ParseContext:
    """Symbol table for a parse.

    ``functions`` maps declared function names to arities. With ``strict``
    on, identifiers outside ``symbols`` / ``functions`` / the chart are
    rejected; otherwise unknown applications declare a function on first use.
    """

    symbols: set = field(default_factory=set)
    functions: dict = field(default_factory=dict)
    strict: bool = False
    ppwave_chart: bool = True


def _chart_abbreviation(name: str):
    y, z = Symbol("y"), Symbol("z")
    if name == "r":
        return pow_(add([pow_(y, Num(2)), pow_(z, Num(2))]), Num(Fraction(1, 2)))
    if name == "theta":
        return builtin("arctan2", [z, y])
    return None


class _Parser:
    def __init__(self, source: str, ctx: ParseContext):
        self.tokens = tokenize(source)
        self.i = 0
        self.ctx = ctx

    @property
    def tok(self) -> _Tok:
        return self.tokens[self.i]

    def advance(self) -> _Tok:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.tok
        if t.text != text or t.kind == "end":
            found = "end of input" if t.kind == "end" else repr(t.text)
            raise ParseError(f"expected {text!r}, found {found}", t.pos)
        return self.advance()

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return e

    def expr(self) -> Expr:
        terms = [self.term()]
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            t = self.term()
            terms.append(t if op == "+" else neg(t))
        return terms[0] if len(terms) == 1 else add(terms)

    def term(self) -> Expr:
        factors = [self.factor()]
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            f = self.factor()
            factors.append(f if op == "*" else pow_(f, MINUS_ONE))
        return factors[0] if len(factors) == 1 else mul(factors)

    def factor(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return neg(self.factor())
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            exponent = self.factor()
            try:
                return pow_(base, exponent)
            except ZeroDivisionError as exc:
                raise ParseError(str(exc), self.tok.pos) from None
        return base

    def args(self) -> list:
        self.expect("(")
        out = [self.expr()]
        while self.tok.text == "," and self.tok.kind == "op":
            self.advance()
            out.append(self.expr())
        self.expect(")")
        return out

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.advance()
            if any(ch in t.text for ch in ".eE"):
                return Real(float(t.text))
            return Num(int(t.text))
        if t.kind == "ident":
            self.advance()
            name = t.text
            nxt = self.tok
            if nxt.kind == "op" and nxt.text == "'":
                return self.derivative(name, t.pos)
            if nxt.kind == "op" and nxt.text == "(":
                return self.application(name, t.pos)
            return self.identifier(name, t.pos)
        if t.kind == "op" and t.text == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise ParseError(f"unexpected {found}", t.pos)

    def identifier(self, name: str, pos: int) -> Expr:
        if name in BUILTINS:
            raise ParseError(f"builtin {name!r} used without arguments", pos)
        if self.ctx.ppwave_chart:
            abbrev = _chart_abbreviation(name)
            if abbrev is not None:
                return abbrev
        if self.ctx.strict and name not in self.ctx.symbols and name not in PPWAVE_COORDS:
            raise UnknownIdentifier(f"unknown identifier {name!r}", pos)
        return Symbol(name)

    def function(self, name: str, nargs: int, pos: int) -> FunctionSymbol:
        arity = self.ctx.functions.get(name)
        if arity is None:
            if self.ctx.strict:
                raise UnknownIdentifier(f"unknown function {name!r}", pos)
            self.ctx.functions[name] = arity = nargs
        if arity != nargs:
            raise ParseError(f"{name} expects {arity} arguments, got {nargs}", pos)
        return FunctionSymbol(name, arity)

    def application(self, name: str, pos: int) -> Expr:
        args = self.args()
        if name in BUILTINS:
            try:
                return builtin(name, args)
            except ArityError as exc:
                raise ParseError(str(exc), pos) from None
        return apply(self.function(name, len(args), pos), args)

    def derivative(self, name: str, pos: int) -> Expr:
        self.expect("'")
        self.expect("[")
        index = [self._int()]
        while self.tok.text == ",":
            self.advance()
            index.append(self._int())
        self.expect("]")
        args = self.args()
        fn = self.function(name, len(args), pos)
        if len(index) != fn.arity:
            raise ParseError(f"derivative index of {name} needs {fn.arity} entries", pos)
        return deriv_apply(fn, index, args)

    def _int(self) -> int:
        t = self.tok
        if t.kind != "num" or not t.text.isdigit():
            raise ParseError("expected a derivative order", t.pos)
        self.advance()
        return int(t.text)


def parse(source: str, ctx: ParseContext | None = None) -> Expr:
    """Parse ``source`` into a canonical expression.

    In the pp-wave chart (the default) ``r`` and ``theta`` expand to
    ``sqrt(y^2+z^2)`` and ``arctan2(z, y)``.
    """
    return _Parser(source, ctx or ParseContext()).parse()
