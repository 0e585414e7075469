"""Basic simplification: distribution plus the constructors' own canonicalization.

The basic tier folds constants, collects like terms and merges powers. It does
not know trigonometric identities and cannot prove general zero-equivalence;
that is left to the sampled numeric tier in :mod:`ppsym.expr.zero`.
"""
from __future__ import annotations

from itertools import product

from .nodes import Add, Expr, Mul, Num, Pow, add, mul, rebuild

MAX_EXPAND_POWER = 8


def _terms(e: Expr):
    return e.terms if isinstance(e, Add) else (e,)


def expand(e: Expr) -> Expr:
    memo: dict = {}

    def go(n: Expr) -> Expr:
        hit = memo.get(n)
        if hit is not None:
            return hit
        if not n.children:
            out = n
        elif isinstance(n, Mul):
            out = _distribute([go(f) for f in n.factors])
        elif isinstance(n, Pow):
            base, ex = go(n.base), go(n.exponent)
            if (
                isinstance(base, Add)
                and isinstance(ex, Num)
                and ex.value.denominator == 1
                and 1 < ex.value <= MAX_EXPAND_POWER
            ):
                out = _distribute([base] * int(ex.value))
            else:
                out = rebuild(n, [base, ex])
                if isinstance(out, Mul):
                    out = _distribute(list(out.factors))
        else:
            out = rebuild(n, [go(c) for c in n.children])
        memo[n] = out
        return out

    return go(e)


def _distribute(factors) -> Expr:
    groups = [_terms(f) for f in factors]
    if all(len(g) == 1 for g in groups):
        return mul(factors)
    return add([mul(list(combo)) for combo in product(*groups)])


def simplify_basic(e: Expr) -> Expr:
    return expand(e)
