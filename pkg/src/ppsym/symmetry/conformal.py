"""Conformal Killing classification and the reduced Klein-Gordon symmetry condition."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..expr import ZERO, Expr, add, apply_rewrites, as_expr, differentiate, mul, neg, rational, simplify_basic
from ..geometry import Metric, VectorField, covariant_hessian, divergence, laplace_beltrami, lie_derivative_metric
from ..verify.sampling import ResidualResult, Sampler, Tolerance, zero_residual

N_DIM = 4


class ConformalKind(str, Enum):
    KILLING = "Killing"
    HOMOTHETIC = "Homothetic"
    SPECIAL = "SpecialConformal"
    PROPER = "ProperConformal"
    NONE = "NotConformal"

    @property
    def is_conformal(self) -> bool:
        return self is not ConformalKind.NONE


# Refinement order: finer classes come first.
_ORDER = [ConformalKind.KILLING, ConformalKind.HOMOTHETIC, ConformalKind.SPECIAL, ConformalKind.PROPER, ConformalKind.NONE]


def kind_rank(kind: ConformalKind) -> int:
    return _ORDER.index(kind)


@dataclass
class ConformalClass:
    kind: ConformalKind
    psi: Expr
    max_residual: float
    witness: dict | None = None
    component_residuals: dict = field(default_factory=dict)


def _rw(e: Expr, rules) -> Expr:
    return simplify_basic(apply_rewrites(e, rules)) if rules else e


def conformal_factor(g: Metric, xi: VectorField, rules=()) -> Expr:
    """``psi = xi^i_;i / n``."""
    return _rw(mul([rational(1, N_DIM), divergence(g, xi)]), rules)


def ckv_residuals(g: Metric, xi: VectorField, psi: Expr, rules=()) -> dict:
    """Components ``(L_xi g)_ij - 2 psi g_ij`` for ``i <= j``."""
    lie = lie_derivative_metric(g, xi)
    out = {}
    for i in range(g.dim):
        for j in range(i, g.dim):
            e = add([lie[i][j], neg(mul([as_expr(2), psi, g[i, j]]))])
            out[(g.coords[i], g.coords[j])] = _rw(e, rules)
    return out


def _worst(results) -> tuple:
    worst, witness = 0.0, None
    for r in results:
        if r.max_scaled > worst or (witness is None and r.witness is not None):
            worst = max(worst, r.max_scaled)
            if r.witness is not None:
                witness = r.witness
    return worst, witness


def classify_conformal(g: Metric, xi: VectorField, sampler: Sampler, tol: Tolerance = Tolerance(), rules=()) -> ConformalClass:
    """Classify ``xi`` as KV / HV / sp.CKV / proper CKV / not conformal."""
    psi = conformal_factor(g, xi, rules)
    comps = ckv_residuals(g, xi, psi, rules)
    checks = {f"{a}{b}": zero_residual(e, sampler, tol) for (a, b), e in comps.items()}
    residuals = {k: r.max_scaled for k, r in checks.items()}
    worst, witness = _worst(checks.values())
    if not all(r.passed for r in checks.values()):
        return ConformalClass(ConformalKind.NONE, psi, worst, witness, residuals)
    if zero_residual(psi, sampler, tol).passed:
        return ConformalClass(ConformalKind.KILLING, ZERO, worst, None, residuals)
    grad = [_rw(differentiate(psi, c), rules) for c in g.coords]
    if all(zero_residual(d, sampler, tol).passed for d in grad):
        return ConformalClass(ConformalKind.HOMOTHETIC, psi, worst, None, residuals)
    hess = covariant_hessian(g, psi)
    if all(zero_residual(_rw(hess[i][j], rules), sampler, tol).passed for i in range(g.dim) for j in range(i, g.dim)):
        return ConformalClass(ConformalKind.SPECIAL, psi, worst, None, residuals)
    return ConformalClass(ConformalKind.PROPER, psi, worst, None, residuals)


def kg_symmetry_residual(g: Metric, xi: VectorField, psi, V, rules=()) -> Expr:
    """Left side of the reduced Klein-Gordon symmetry condition.

    For ``Delta_g Psi + V Psi = 0`` the condition is
    ``xi^k V_,k + 2 psi V + ((2-n)/2) Delta_g psi = 0``, which for n = 4 is
    ``xi^k V_,k + 2 psi V - Delta_g psi``. The Laplacian term only matters
    for non-harmonic conformal factors.
    """
    psi, V = as_expr(psi), as_expr(V)
    drift = add([mul([xi[k], differentiate(V, c)]) for k, c in enumerate(g.coords)])
    lap = laplace_beltrami(g, psi)
    coeff = rational(2 - N_DIM, 2)
    return _rw(add([drift, mul([as_expr(2), psi, V]), mul([coeff, lap])]), rules)
