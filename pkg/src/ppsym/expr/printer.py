"""Render expressions in the parser's input grammar (round-trips through parse)."""
from __future__ import annotations

from fractions import Fraction

from .nodes import Add, Apply, Builtin, DerivApply, Expr, Mul, Num, Pow, Real, Symbol

_PREC_ADD, _PREC_MUL, _PREC_UNARY, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _number(value) -> tuple:
    if isinstance(value, float):
        text = repr(value)
        if text in ("inf", "-inf", "nan"):
            raise ValueError(f"cannot print non-finite constant {text}")
        if value < 0:
            return "-" + text[1:], _PREC_UNARY
        return text, _PREC_ATOM
    value = Fraction(value)
    if value.denominator == 1:
        if value < 0:
            return f"-{-value.numerator}", _PREC_UNARY
        return str(value.numerator), _PREC_ATOM
    if value < 0:
        return f"-{-value.numerator}/{value.denominator}", _PREC_MUL
    return f"{value.numerator}/{value.denominator}", _PREC_MUL


def _wrap(text: str, prec: int, needed: int) -> str:
    return f"({text})" if prec < needed else text


def _render(e: Expr) -> tuple:
    if isinstance(e, (Num, Real)):
        return _number(e.value)
    if isinstance(e, Symbol):
        return e.name, _PREC_ATOM
    if isinstance(e, Add):
        parts = []
        for i, t in enumerate(e.terms):
            text, prec = _render(t)
            if i == 0:
                parts.append(text)
            elif text.startswith("-") and prec >= _PREC_MUL:
                parts.append(" - " + text[1:])
            else:
                parts.append(" + " + _wrap(text, prec, _PREC_MUL))
        return "".join(parts), _PREC_ADD
    if isinstance(e, Mul):
        factors = list(e.factors)
        sign = ""
        if isinstance(factors[0], (Num, Real)):
            c = factors[0].value
            if c == -1:
                sign = "-"
                factors = factors[1:]
            elif c < 0:
                sign = "-"
                factors[0] = Num(-c) if isinstance(factors[0], Num) else Real(-c)
        texts = []
        for f in factors:
            text, prec = _render(f)
            texts.append(_wrap(text, prec, _PREC_POW if isinstance(f, (Num, Real)) else _PREC_UNARY + 1))
        body = "*".join(texts)
        return sign + body, (_PREC_MUL if not sign else _PREC_UNARY)
    if isinstance(e, Pow):
        b, bp = _render(e.base)
        x, xp = _render(e.exponent)
        b = _wrap(b, bp, _PREC_ATOM)
        x = _wrap(x, xp, _PREC_ATOM)
        return f"{b}^{x}", _PREC_POW
    if isinstance(e, Apply):
        return f"{e.fn.name}({', '.join(to_string(a) for a in e.args)})", _PREC_ATOM
    if isinstance(e, DerivApply):
        idx = ",".join(str(i) for i in e.index)
        return f"{e.fn.name}'[{idx}]({', '.join(to_string(a) for a in e.args)})", _PREC_ATOM
    if isinstance(e, Builtin):
        return f"{e.name}({', '.join(to_string(a) for a in e.args)})", _PREC_ATOM
    raise TypeError(f"unknown node {type(e).__name__}")


def to_string(e: Expr) -> str:
    return _render(e)[0]
