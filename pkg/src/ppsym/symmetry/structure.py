"""Structure constants of a vector-field basis, fitted on sampled points."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..expr import Expr, ExprError, apply_rewrites, evaluate, simplify_basic
from ..geometry import COORDS, VectorField, commutator
from ..verify.sampling import Sampler, Tolerance

MIN_FIT_POINTS = 8
MAX_DENOMINATOR = 64


class RankDeficiency(ExprError):
    pass


@dataclass
class StructureTable:
    """``[X_I, X_J] = sum_K C[(I, J)][K] X_K``; entries are Fractions or floats."""

    names: tuple
    constants: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    tol_rel: float = 1e-9

    def c(self, i: int, j: int) -> list:
        if i == j:
            return [Fraction(0)] * len(self.names)
        if i < j:
            return self.constants[(i, j)]
        return [-x for x in self.constants[(j, i)]]

    def in_span(self, i: int, j: int) -> bool:
        if i == j:
            return True
        key = (i, j) if i < j else (j, i)
        return self.residuals[key] <= self.tol_rel

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def jacobi_residual(self) -> float:
        n = len(self.names)
        worst = 0.0
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        s = 0.0
                        for m in range(n):
                            s += float(self.c(i, j)[m]) * float(self.c(m, k)[l])
                            s += float(self.c(j, k)[m]) * float(self.c(m, i)[l])
                            s += float(self.c(k, i)[m]) * float(self.c(m, j)[l])
                        worst = max(worst, abs(s))
        return worst

    def nonzero(self) -> dict:
        """``{(name_I, name_J): {name_K: C}}`` for ``I < J`` with nonzero entries."""
        out = {}
        for (i, j), row in sorted(self.constants.items()):
            entries = {self.names[k]: v for k, v in enumerate(row) if v != 0}
            if entries:
                out[(self.names[i], self.names[j])] = entries
        return out


def _round(value: float, tol: float):
    frac = Fraction(value).limit_denominator(MAX_DENOMINATOR)
    if abs(float(frac) - value) <= tol * max(1.0, abs(value)):
        return frac
    return value


def _join(fields) -> Expr:
    from ..expr import add

    return add([c for f in fields for c in f])


def fit_structure_constants(basis, sampler: Sampler, tol: Tolerance = Tolerance(), names=None, rules=()) -> StructureTable:
    """Least-squares fit of every commutator onto the span of ``basis``.

    Coefficients within tolerance of a rational with denominator at most 64
    are rounded; the reported residual is computed after rounding.
    """
    basis = list(basis)
    names = tuple(names or (f"X{i + 1}" for i in range(len(basis))))
    if sampler.count < MIN_FIT_POINTS:
        sampler = sampler.with_count(MIN_FIT_POINTS)
    table = StructureTable(names, tol_rel=tol.tol_rel)
    if not basis:
        return table
    brackets = {}
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            brackets[(i, j)] = commutator(basis[i], basis[j], COORDS)
    def lowered(f: VectorField) -> VectorField:
        if not rules:
            return f
        return VectorField(tuple(simplify_basic(apply_rewrites(c, rules)) for c in f))

    basis_l = [lowered(f) for f in basis]
    brackets = {k: lowered(v) for k, v in brackets.items()}
    env = sampler.environment(_join(basis_l + list(brackets.values())))

    def sample(f: VectorField):
        return np.concatenate([np.broadcast_to(evaluate(c, env), (sampler.count,)) for c in f]).astype(float)

    M = np.array([sample(f) for f in basis_l]).T
    if np.linalg.matrix_rank(M) < len(basis):
        raise RankDeficiency("basis fields are linearly dependent on the sample")
    for key, br in brackets.items():
        b = sample(br)
        coef, *_ = np.linalg.lstsq(M, b, rcond=None)
        rounded = [_round(float(c), 1e-9) for c in coef]
        cvec = np.array([float(c) for c in rounded])
        contrib = M * cvec
        resid = np.abs(b - contrib.sum(axis=1))
        scale = np.maximum(np.abs(b), np.max(np.abs(contrib), axis=1))
        scaled = resid / (tol.floor + scale)
        table.constants[key] = rounded
        table.residuals[key] = float(scaled.max()) if scaled.size else 0.0
    return table
