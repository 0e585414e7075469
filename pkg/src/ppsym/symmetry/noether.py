"""Point-symmetry lift, Noether gauge, first-jet Noether condition and currents.

Jet variables are plain symbols: ``Psi`` for the field, ``Psi_u`` .. ``Psi_z``
for first derivatives and ``Psi_uv`` etc. (chart order) for second ones.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..expr import ONE, ZERO, Expr, add, as_expr, differentiate, is_zero_literal, mul, neg, rational, substitute, sym
from ..geometry import Metric, VectorField

N_DIM = 4
PSI = "Psi"


def d1(c: str) -> str:
    return f"{PSI}_{c}"


def d2(a: str, b: str, coords) -> str:
    i, j = sorted((coords.index(a), coords.index(b)))
    return f"{PSI}_{coords[i]}{coords[j]}"


def first_jet_names(coords) -> list:
    return [PSI] + [d1(c) for c in coords]


def second_jet_names(coords) -> list:
    return [d2(a, b, coords) for i, a in enumerate(coords) for b in coords[i:]]


@dataclass(frozen=True)
class SymmetryCandidate:
    """``X = xi^i d_i + (eta_coeff * Psi) d_Psi``."""

    xi: VectorField
    eta_coeff: Expr

    @property
    def eta(self) -> Expr:
        return mul([self.eta_coeff, sym(PSI)])


def lift_to_point_symmetry(xi: VectorField, psi) -> SymmetryCandidate:
    """Psi-coefficient ``((2-n)/2) psi``, i.e. ``-psi`` for n = 4."""
    return SymmetryCandidate(xi, mul([rational(2 - N_DIM, 2), as_expr(psi)]))


def noether_gauge(g: Metric, psi) -> tuple:
    """Covector ``A_i = ((2-n)/4) sqrt|g| psi_,i Psi^2``."""
    psi = as_expr(psi)
    factor = mul([rational(2 - N_DIM, 4), g.volume, sym(PSI), sym(PSI)])
    return tuple(mul([factor, differentiate(psi, c)]) for c in g.coords)


def raise_index(g: Metric, covector) -> tuple:
    inv = g.inverse
    return tuple(
        add([mul([inv[i][j], covector[j]]) for j in range(g.dim) if not is_zero_literal(inv[i][j])])
        for i in range(g.dim)
    )


def lagrangian(g: Metric, V) -> Expr:
    """``L = 1/2 sqrt|g| (g^ij Psi_i Psi_j - V Psi^2)``."""
    inv = g.inverse
    kin = add([
        mul([inv[i][j], sym(d1(a)), sym(d1(b))])
        for i, a in enumerate(g.coords)
        for j, b in enumerate(g.coords)
        if not is_zero_literal(inv[i][j])
    ])
    return mul([rational(1, 2), g.volume, add([kin, neg(mul([as_expr(V), sym(PSI), sym(PSI)]))])])


def total_derivative(F: Expr, c: str, coords) -> Expr:
    """``D_c F`` on the jet space up to second order."""
    terms = [differentiate(F, c), mul([sym(d1(c)), differentiate(F, PSI)])]
    for b in coords:
        dF = differentiate(F, d1(b))
        if not is_zero_literal(dF):
            terms.append(mul([sym(d2(c, b, coords)), dF]))
    return add(terms)


def prolongation_coefficients(cand: SymmetryCandidate, coords) -> list:
    """``eta_i = D_i(eta) - Psi_,k D_i(xi^k)`` for a field-independent ``xi``."""
    eta = cand.eta
    out = []
    for c in coords:
        terms = [total_derivative(eta, c, coords)]
        for k, b in enumerate(coords):
            dxi = differentiate(cand.xi[k], c)
            if not is_zero_literal(dxi):
                terms.append(neg(mul([sym(d1(b)), dxi])))
        out.append(add(terms))
    return out


def noether_condition_residual(g: Metric, V, cand: SymmetryCandidate, A_lower) -> Expr:
    """``X^[1] L + L D_i xi^i - D_i A^i`` as a first-jet expression.

    ``A_lower`` is the covector ``A_i``; it is raised with the inverse metric.
    """
    coords = g.coords
    L = lagrangian(g, V)
    eta_i = prolongation_coefficients(cand, coords)
    terms = [mul([cand.xi[k], differentiate(L, c)]) for k, c in enumerate(coords) if not is_zero_literal(cand.xi[k])]
    terms.append(mul([cand.eta, differentiate(L, PSI)]))
    terms += [mul([eta_i[k], differentiate(L, d1(c))]) for k, c in enumerate(coords)]
    div_xi = add([total_derivative(cand.xi[k], c, coords) for k, c in enumerate(coords)])
    terms.append(mul([L, div_xi]))
    A_up = raise_index(g, A_lower)
    terms += [neg(total_derivative(A_up[k], c, coords)) for k, c in enumerate(coords)]
    return add(terms)


def momenta(g: Metric, V) -> list:
    L = lagrangian(g, V)
    return [differentiate(L, d1(c)) for c in g.coords]


def noether_current(g: Metric, V, cand: SymmetryCandidate, A_lower, form: str = "conserved") -> tuple:
    """Current ``I^i`` with ``H^i_j = p^i Psi_,j - L delta^i_j``.

    ``form="conserved"`` returns ``xi^j H^i_j - eta p^i + A^i``;
    ``form="printed"`` returns ``xi^j H^i_j + eta p^i - A^i``, which is not
    conserved once ``eta`` or ``A`` is nonzero.
    """
    if form not in ("conserved", "printed"):
        raise ValueError(f"unknown current form {form!r}")
    coords = g.coords
    L = lagrangian(g, V)
    p = momenta(g, V)
    A_up = raise_index(g, A_lower)
    sign = -1 if form == "conserved" else 1
    out = []
    for i, ci in enumerate(coords):
        terms = []
        for j, cj in enumerate(coords):
            if is_zero_literal(cand.xi[j]):
                continue
            H = add([mul([p[i], sym(d1(cj))]), neg(L) if i == j else ZERO])
            terms.append(mul([cand.xi[j], H]))
        terms.append(mul([as_expr(sign), cand.eta, p[i]]))
        terms.append(mul([as_expr(-sign), A_up[i]]))
        out.append(add(terms))
    return tuple(out)


def euler_lagrange(g: Metric, V) -> Expr:
    """``dL/dPsi - D_i(dL/dPsi_i)``; vanishes on solutions of the field equation."""
    L = lagrangian(g, V)
    terms = [differentiate(L, PSI)]
    terms += [neg(total_derivative(differentiate(L, d1(c)), c, g.coords)) for c in g.coords]
    return add(terms)


def current_divergence(g: Metric, current) -> Expr:
    return add([total_derivative(current[k], c, g.coords) for k, c in enumerate(g.coords)])


def onshell_solution(g: Metric, V, solve_for=("u", "v")) -> tuple:
    """Express one second derivative through the field equation.

    Returns ``(name, value)`` such that substituting ``value`` for the jet
    symbol ``name`` puts any expression on shell.
    """
    a, b = solve_for
    target = d2(a, b, g.coords)
    E = euler_lagrange(g, V)
    coeff = differentiate(E, target)
    if is_zero_literal(coeff):
        raise ValueError(f"field equation does not contain {target}")
    rest = substitute(E, {target: ZERO})
    return target, mul([neg(rest), coeff ** -1])


def onshell_divergence_residual(g: Metric, V, current, solve_for=("u", "v")) -> Expr:
    """``D_i I^i`` with the solved second derivative substituted."""
    name, value = onshell_solution(g, V, solve_for)
    return substitute(current_divergence(g, current), {name: value})
