"""Numeric evaluation of expressions (scalar or vectorized over numpy arrays)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .calculus import differentiate_multi, formal_args
from .nodes import (
    Add,
    Apply,
    Builtin,
    DerivApply,
    HALF,
    Expr,
    ExprError,
    Mul,
    Num,
    Pow,
    Real,
    Symbol,
    as_expr,
)


class EvaluationError(ExprError):
    pass


class DomainError(EvaluationError):
    pass


class UnresolvedSymbol(EvaluationError):
    pass


class NumericFailure(EvaluationError):
    pass


@dataclass(frozen=True)
class Environment:
    """Values for everything an expression may reference.

    ``functions`` maps a function name to a closed-form body in ``x1 .. xn``;
    ``jets`` maps ``(function name, multi-index)`` to the value of that
    derivative for functions left uninstantiated.
    """

    coordinates: Mapping = field(default_factory=dict)
    parameters: Mapping = field(default_factory=dict)
    functions: Mapping = field(default_factory=dict)
    jets: Mapping = field(default_factory=dict)

    def lookup(self, name: str):
        in_c = name in self.coordinates
        in_p = name in self.parameters
        if in_c and in_p:
            raise UnresolvedSymbol(f"symbol {name!r} is both a coordinate and a parameter")
        if in_c:
            return self.coordinates[name]
        if in_p:
            return self.parameters[name]
        raise UnresolvedSymbol(f"no value for symbol {name!r}")


def _check_finite(value, what: str):
    if not np.all(np.isfinite(value)):
        raise NumericFailure(f"non-finite value from {what}")
    return value


class _Evaluator:
    def __init__(self, env: Environment):
        self.env = env
        self.memo: dict = {}
        self.body_cache: dict = {}

    def ev(self, e: Expr):
        hit = self.memo.get(e)
        if hit is None:
            hit = self.memo[e] = self._ev(e)
        return hit

    def _ev(self, e: Expr):
        if isinstance(e, Num):
            return float(e.value)
        if isinstance(e, Real):
            return e.value
        if isinstance(e, Symbol):
            return self.env.lookup(e.name)
        if isinstance(e, Add):
            total = self.ev(e.terms[0])
            for t in e.terms[1:]:
                total = total + self.ev(t)
            return total
        if isinstance(e, Mul):
            total = self.ev(e.factors[0])
            for f in e.factors[1:]:
                total = total * self.ev(f)
            return total
        if isinstance(e, Pow):
            return self._pow(e)
        if isinstance(e, Builtin):
            return self._builtin(e)
        if isinstance(e, (Apply, DerivApply)):
            return self._function(e)
        raise TypeError(f"cannot evaluate {type(e).__name__}")

    def _pow(self, e: Pow):
        b = self.ev(e.base)
        x = self.ev(e.exponent)
        integral = isinstance(e.exponent, Num) and e.exponent.value.denominator == 1
        if integral:
            n = int(e.exponent.value)
            if n < 0 and np.any(np.asarray(b) == 0):
                raise DomainError("division by zero")
            if n == -1:
                return 1.0 / b
            if n == 2:
                return b * b
            return np.power(b, float(n)) if np.ndim(b) else float(b) ** n
        if np.any(np.asarray(b) < 0):
            raise DomainError("fractional power of a negative number")
        if np.any(np.asarray(b) == 0) and np.any(np.asarray(x) < 0):
            raise DomainError("division by zero")
        if e.exponent == HALF:
            return np.sqrt(b)
        return np.power(b, x)

    def _builtin(self, e: Builtin):
        args = [self.ev(a) for a in e.args]
        name = e.name
        if name == "ln":
            if np.any(np.asarray(args[0]) <= 0):
                raise DomainError("ln of a non-positive number")
            return np.log(args[0])
        if name == "exp":
            return np.exp(args[0])
        if name == "sin":
            return np.sin(args[0])
        if name == "cos":
            return np.cos(args[0])
        if name == "tan":
            return np.tan(args[0])
        if name == "arctan":
            return np.arctan(args[0])
        if name == "arctan2":
            return np.arctan2(args[0], args[1])
        raise TypeError(f"unknown builtin {name}")

    def _function(self, e):
        fn = e.fn
        index = e.index if isinstance(e, DerivApply) else (0,) * fn.arity
        body = self.env.functions.get(fn.name)
        if body is None:
            key = (fn.name, index)
            if key not in self.env.jets:
                raise UnresolvedSymbol(f"no jet value for {fn.name}{list(index)}")
            return self.env.jets[key]
        key = (fn.name, index)
        d = self.body_cache.get(key)
        if d is None:
            d = self.body_cache[key] = differentiate_multi(as_expr(body), formal_args(fn.arity), index)
        args = [self.ev(a) for a in e.args]
        sub = Environment(
            coordinates=dict(zip(formal_args(fn.arity), args)),
            parameters=self.env.parameters,
        )
        return _Evaluator(sub).ev(d)


def evaluate(e: Expr, env: Environment):
    """Evaluate ``e``; array-valued environment entries broadcast elementwise."""
    with np.errstate(all="ignore"):
        value = _Evaluator(env).ev(e)
    return _check_finite(value, "evaluation")


def evaluate_terms(e: Expr, env: Environment):
    """Evaluate the top-level additive terms of ``e`` separately."""
    terms = e.terms if isinstance(e, Add) else (e,)
    ev = _Evaluator(env)
    with np.errstate(all="ignore"):
        values = [ev.ev(t) for t in terms]
    for v in values:
        _check_finite(v, "evaluation")
    return values
