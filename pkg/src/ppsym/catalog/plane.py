"""Closed-form profile functions for plane waves with constant coefficients."""
from __future__ import annotations

from fractions import Fraction

from ..expr import ONE, ZERO, Expr, as_expr, cos, evaluate, exp, free_symbols, mul, neg, sin, sqrt, sym
from ..expr.evaluate import Environment
from .model import CatalogError

_u = sym("u")


def _constant(value, name: str):
    if isinstance(value, Expr):
        if free_symbols(value):
            raise CatalogError(f"{name} depends on {sorted(free_symbols(value))}; use the rewrite-rule path")
        return value
    return as_expr(Fraction(value))


def _num(e: Expr) -> float:
    return float(evaluate(e, Environment(coordinates={})))


def _root(x: Expr) -> Expr:
    # pow_ folds perfect rational squares to exact values
    return sqrt(x)


def _modes(lam: Expr) -> tuple:
    """Two independent solutions of ``f'' = -lam f``."""
    value = _num(lam)
    if value == 0:
        return ONE, _u
    if value > 0:
        w = _root(lam)
        return cos(mul([w, _u])), sin(mul([w, _u]))
    w = _root(neg(lam))
    return exp(mul([w, _u])), exp(neg(mul([w, _u])))


def solve_plane_wave_basis(A, B, C) -> list:
    """Four independent ``(d, e)`` with ``d'' + C d + B e = 0``, ``e'' + A e + B d = 0``.

    The coefficient matrix ``[[C, B], [B, A]]`` is symmetric, so it always has
    an orthogonal eigenbasis; each eigenpair contributes two modes.
    """
    A, B, C = _constant(A, "A"), _constant(B, "B"), _constant(C, "C")
    half_sum = mul([as_expr(Fraction(1, 2)), A + C])
    half_diff = mul([as_expr(Fraction(1, 2)), C - A])
    if _num(B) == 0:
        pairs = [(C, (ONE, ZERO)), (A, (ZERO, ONE))]
    else:
        disc = _root(half_diff * half_diff + B * B)
        pairs = []
        for lam in (half_sum + disc, half_sum - disc):
            pairs.append((lam, (B, lam - C)))
    out = []
    for lam, (p, q) in pairs:
        for f in _modes(lam):
            out.append((mul([p, f]), mul([q, f])))
    return out
