"""Partial differentiation, substitution and function instantiation."""
from __future__ import annotations

from typing import Mapping

from .nodes import (
    ONE,
    ZERO,
    Add,
    Apply,
    ArityError,
    Builtin,
    DerivApply,
    Expr,
    FunctionSymbol,
    Mul,
    Num,
    Pow,
    Real,
    Symbol,
    add,
    as_expr,
    builtin,
    deriv_apply,
    free_symbols,
    mul,
    neg,
    pow_,
    rebuild,
)


def formal_args(arity: int) -> tuple:
    """Formal argument names used in instantiation bodies and rewrite rules."""
    return tuple(f"x{k}" for k in range(1, arity + 1))


def differentiate(e: Expr, var: str) -> Expr:
    """Exact partial derivative of ``e`` with respect to the symbol ``var``."""
    if isinstance(var, Symbol):
        var = var.name
    return _Differentiator(var).d(e)


class _Differentiator:
    def __init__(self, var: str):
        self.var = var
        self.memo: dict = {}

    def d(self, e: Expr) -> Expr:
        hit = self.memo.get(e)
        if hit is None:
            hit = self.memo[e] = self._d(e)
        return hit

    def _d(self, e: Expr) -> Expr:
        if isinstance(e, (Num, Real)):
            return ZERO
        if isinstance(e, Symbol):
            return ONE if e.name == self.var else ZERO
        if isinstance(e, Add):
            return add([self.d(t) for t in e.terms])
        if isinstance(e, Mul):
            parts = []
            fs = e.factors
            for i, f in enumerate(fs):
                df = self.d(f)
                if df is ZERO or df == ZERO:
                    continue
                parts.append(mul(list(fs[:i]) + [df] + list(fs[i + 1:])))
            return add(parts)
        if isinstance(e, Pow):
            b, x = e.base, e.exponent
            db, dx = self.d(b), self.d(x)
            if dx == ZERO:
                if db == ZERO:
                    return ZERO
                return mul([x, pow_(b, add([x, Num(-1)])), db])
            # b^x (x' ln b + x b'/b)
            return mul([e, add([mul([dx, builtin("ln", [b])]), mul([x, db, pow_(b, Num(-1))])])])
        if isinstance(e, (Apply, DerivApply)):
            base_index = e.index if isinstance(e, DerivApply) else (0,) * e.fn.arity
            parts = []
            for k, a in enumerate(e.args):
                da = self.d(a)
                if da == ZERO:
                    continue
                idx = list(base_index)
                idx[k] += 1
                parts.append(mul([deriv_apply(e.fn, idx, e.args), da]))
            return add(parts)
        if isinstance(e, Builtin):
            return self._builtin(e)
        raise TypeError(f"cannot differentiate {type(e).__name__}")

    def _builtin(self, e: Builtin) -> Expr:
        a = e.args[0]
        if e.name == "arctan2":
            # arctan2(p, q) is the angle of (q, p)
            p, q = e.args
            dp, dq = self.d(p), self.d(q)
            if dp == ZERO and dq == ZERO:
                return ZERO
            num = add([mul([q, dp]), neg(mul([p, dq]))])
            den = add([pow_(p, Num(2)), pow_(q, Num(2))])
            return mul([num, pow_(den, Num(-1))])
        da = self.d(a)
        if da == ZERO:
            return ZERO
        name = e.name
        if name == "sin":
            outer = builtin("cos", [a])
        elif name == "cos":
            outer = neg(builtin("sin", [a]))
        elif name == "tan":
            outer = add([ONE, pow_(e, Num(2))])
        elif name == "exp":
            outer = e
        elif name == "ln":
            outer = pow_(a, Num(-1))
        elif name == "arctan":
            outer = pow_(add([ONE, pow_(a, Num(2))]), Num(-1))
        else:
            raise TypeError(f"no derivative rule for {name}")
        return mul([outer, da])


def differentiate_multi(e: Expr, variables, orders) -> Expr:
    """Apply ``orders[k]`` derivatives with respect to ``variables[k]``."""
    for var, n in zip(variables, orders):
        for _ in range(n):
            e = differentiate(e, var)
    return e


def _binding_map(bindings: Mapping) -> dict:
    out = {}
    for k, v in bindings.items():
        name = k.name if isinstance(k, Symbol) else k
        out[name] = as_expr(v)
    return out


def substitute(e: Expr, bindings: Mapping) -> Expr:
    """Simultaneous, non-recursive replacement of symbols, re-canonicalized."""
    table = _binding_map(bindings)
    if not table:
        return e
    memo: dict = {}

    def go(n: Expr) -> Expr:
        hit = memo.get(n)
        if hit is not None:
            return hit
        if isinstance(n, Symbol):
            out = table.get(n.name, n)
        elif n.children:
            kids = [go(c) for c in n.children]
            if all(k is c for k, c in zip(kids, n.children)):
                out = n
            else:
                out = rebuild(n, kids)
        else:
            out = n
        memo[n] = out
        return out

    return go(e)


def _normalize_instantiation(inst: Mapping) -> dict:
    table = {}
    for key, body in inst.items():
        name = key.name if isinstance(key, FunctionSymbol) else key
        body = as_expr(body)
        if isinstance(key, FunctionSymbol):
            allowed = set(formal_args(key.arity))
            extra = {s for s in free_symbols(body) if s.startswith("x") and s[1:].isdigit()} - allowed
            if extra:
                raise ArityError(f"body for {name} uses {sorted(extra)} beyond arity {key.arity}")
        table[name] = body
    return table


def instantiate(e: Expr, inst: Mapping) -> Expr:
    """Replace applications of the given function symbols by closed-form bodies.

    Bodies are written in the formal arguments ``x1 .. xn``; derivative
    applications receive the correspondingly differentiated body.
    """
    table = _normalize_instantiation(inst)
    if not table:
        return e
    deriv_cache: dict = {}
    memo: dict = {}

    def body_for(fn: FunctionSymbol, index: tuple) -> Expr:
        key = (fn.name, index)
        hit = deriv_cache.get(key)
        if hit is None:
            body = table[fn.name]
            extra = {s for s in free_symbols(body) if s.startswith("x") and s[1:].isdigit()}
            if extra - set(formal_args(fn.arity)):
                raise ArityError(f"body for {fn.name} does not match arity {fn.arity}")
            hit = differentiate_multi(body, formal_args(fn.arity), index)
            deriv_cache[key] = hit
        return hit

    def go(n: Expr) -> Expr:
        hit = memo.get(n)
        if hit is not None:
            return hit
        if isinstance(n, (Apply, DerivApply)) and n.fn.name in table:
            args = [go(a) for a in n.args]
            index = n.index if isinstance(n, DerivApply) else (0,) * n.fn.arity
            body = body_for(n.fn, index)
            out = substitute(body, dict(zip(formal_args(n.fn.arity), args)))
        elif n.children:
            kids = [go(c) for c in n.children]
            out = n if all(k is c for k, c in zip(kids, n.children)) else rebuild(n, kids)
        else:
            out = n
        memo[n] = out
        return out

    return go(e)


def gradient(e: Expr, coords) -> list:
    return [differentiate(e, c) for c in coords]
