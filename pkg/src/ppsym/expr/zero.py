"""Two-tier zero testing: basic simplification first, then seeded sampling."""
from __future__ import annotations

from dataclasses import dataclass

from .nodes import Expr, is_zero_literal
from .simplify import simplify_basic


@dataclass(frozen=True)
class SymbolicZero:
    def __bool__(self):
        return True


@dataclass(frozen=True)
class NumericZero:
    max_residual: float

    def __bool__(self):
        return True


@dataclass(frozen=True)
class NonZero:
    witness: dict
    value: float
    max_residual: float

    def __bool__(self):
        return False


def is_zero(e: Expr, sampler, tol=None, functions=None):
    """Decide ``e == 0`` on the sampler's domain.

    Evaluation errors at a sample point propagate as ``EvaluationError``.
    """
    from ..verify.sampling import Tolerance, residual_check

    s = simplify_basic(e)
    if is_zero_literal(s):
        return SymbolicZero()
    res = residual_check(s, sampler, tol or Tolerance(), functions=functions)
    if res.passed:
        return NumericZero(res.max_scaled)
    return NonZero(res.witness, res.witness["value"], res.max_scaled)
