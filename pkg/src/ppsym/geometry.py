"""Metric-level differential geometry on the chart (u, v, y, z)."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .expr import (
    ONE,
    ZERO,
    Expr,
    ExprError,
    add,
    as_expr,
    differentiate,
    is_zero_literal,
    mul,
    neg,
    parse,
    pow_,
    rational,
    simplify_basic,
    sym,
    to_string,
)

COORDS = ("u", "v", "y", "z")
N_DIM = 4

ScalarField = Expr


class GeometryError(ExprError):
    pass


@dataclass(frozen=True)
class VectorField:
    """Components ``xi^i`` in chart order."""

    components: tuple

    def __post_init__(self):
        comps = tuple(as_expr(c) for c in self.components)
        if len(comps) != N_DIM:
            raise GeometryError(f"a vector field needs {N_DIM} components, got {len(comps)}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_dict(cls, **parts) -> "VectorField":
        unknown = set(parts) - set(COORDS)
        if unknown:
            raise GeometryError(f"unknown chart directions {sorted(unknown)}")
        return cls(tuple(parts.get(c, ZERO) for c in COORDS))

    @classmethod
    def parse(cls, text: str, ctx=None) -> "VectorField":
        body = text.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise GeometryError("vector fields are written as [e_u, e_v, e_y, e_z]")
        parts = _split_top_level(body[1:-1])
        return cls(tuple(parse(p, ctx) for p in parts))

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(tuple(add([a, b]) for a, b in zip(self, other)))

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + other.scale(-1)

    def __neg__(self) -> "VectorField":
        return self.scale(-1)

    def scale(self, factor) -> "VectorField":
        f = as_expr(factor)
        return VectorField(tuple(mul([f, c]) for c in self))

    def __rmul__(self, factor):
        return self.scale(factor)

    def simplified(self) -> "VectorField":
        return VectorField(tuple(simplify_basic(c) for c in self))

    def is_structurally_zero(self) -> bool:
        return all(is_zero_literal(simplify_basic(c)) for c in self)

    def to_text(self) -> str:
        return "[" + ", ".join(to_string(c) for c in self) + "]"


def _split_top_level(text: str) -> list:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p for p in parts if p.strip()] if any(p.strip() for p in parts) else []


def combine(coefficients, fields) -> VectorField:
    out = VectorField((ZERO,) * N_DIM)
    for c, f in zip(coefficients, fields):
        out = out + f.scale(c)
    return out


@dataclass(frozen=True)
class Metric:
    """Symmetric component matrix over ``coords``.

    ``sqrt_det`` holds ``sqrt|g|`` once known; pp-wave builds set it to 1
    after checking ``det g = -1``.
    """

    components: tuple
    coords: tuple = COORDS
    sqrt_det: Expr | None = None
    H: Expr | None = None

    def __post_init__(self):
        rows = tuple(tuple(as_expr(x) for x in row) for row in self.components)
        n = len(self.coords)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise GeometryError("metric must be square over the chart")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise GeometryError("metric components must be symmetric")
        object.__setattr__(self, "components", rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.components[i][j]

    @property
    def dim(self) -> int:
        return len(self.coords)

    @cached_property
    def inverse(self) -> tuple:
        return inverse_metric(self)

    @cached_property
    def determinant(self) -> Expr:
        return simplify_basic(_det(self.components))

    @cached_property
    def volume(self) -> Expr:
        if self.sqrt_det is not None:
            return self.sqrt_det
        d = self.determinant
        # Lorentzian signature: |g| = -det g
        return pow_(neg(d), rational(1, 2))

    @cached_property
    def christoffel(self) -> tuple:
        return christoffel(self)


def _det(m) -> Expr:
    n = len(m)
    if n == 1:
        return m[0][0]
    terms = []
    for j in range(n):
        if is_zero_literal(m[0][j]):
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        sign = ONE if j % 2 == 0 else as_expr(-1)
        terms.append(mul([sign, m[0][j], _det(minor)]))
    return add(terms)


def build_ppwave_metric(H) -> Metric:
    """Line element ``-2 du dv - 2H du^2 + dy^2 + dz^2``; ``H`` must not depend on v."""
    H = as_expr(H)
    if not is_zero_literal(simplify_basic(differentiate(H, "v"))):
        raise GeometryError("the profile H must be independent of v")
    m = [[ZERO] * 4 for _ in range(4)]
    m[0][0] = mul([as_expr(-2), H])
    m[0][1] = m[1][0] = as_expr(-1)
    m[2][2] = m[3][3] = ONE
    det = simplify_basic(_det(m))
    if det != as_expr(-1):
        raise GeometryError("pp-wave determinant is not -1")
    return Metric(tuple(tuple(r) for r in m), COORDS, sqrt_det=ONE, H=H)


def inverse_metric(g: Metric) -> tuple:
    """Inverse via cofactors; raises if the determinant simplifies to zero."""
    n = g.dim
    det = g.determinant
    if is_zero_literal(det):
        raise GeometryError("metric is symbolically singular")
    inv_det = pow_(det, as_expr(-1))
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = [r[:i] + r[i + 1:] for k, r in enumerate(g.components) if k != j]
            cof = _det(minor) if n > 1 else ONE
            sign = ONE if (i + j) % 2 == 0 else as_expr(-1)
            row.append(simplify_basic(mul([sign, cof, inv_det])))
        rows.append(tuple(row))
    return tuple(rows)


def identity_residuals(g: Metric) -> list:
    """Entries of ``g^{ik} g_{kj} - delta^i_j``."""
    inv = g.inverse
    out = []
    for i in range(g.dim):
        for j in range(g.dim):
            s = add([mul([inv[i][k], g[k, j]]) for k in range(g.dim)])
            out.append(simplify_basic(add([s, neg(ONE if i == j else ZERO)])))
    return out


class _Partials:
    def __init__(self, coords):
        self.coords = coords
        self.cache: dict = {}

    def __call__(self, e: Expr, k: int) -> Expr:
        key = (e, k)
        hit = self.cache.get(key)
        if hit is None:
            hit = self.cache[key] = differentiate(e, self.coords[k])
        return hit


def christoffel(g: Metric) -> tuple:
    """``Gamma[i][j][k] = 1/2 g^{il}(g_{lj,k} + g_{lk,j} - g_{jk,l})``."""
    n = g.dim
    inv = g.inverse
    d = _Partials(g.coords)
    lower = [[[None] * n for _ in range(n)] for _ in range(n)]
    for l in range(n):
        for j in range(n):
            for k in range(j, n):
                val = add([d(g[l, j], k), d(g[l, k], j), neg(d(g[j, k], l))])
                lower[l][j][k] = lower[l][k][j] = val
    half = rational(1, 2)
    gamma = []
    for i in range(n):
        block = [[None] * n for _ in range(n)]
        for j in range(n):
            for k in range(j, n):
                terms = [mul([half, inv[i][l], lower[l][j][k]]) for l in range(n) if not is_zero_literal(inv[i][l])]
                block[j][k] = block[k][j] = simplify_basic(add(terms))
        gamma.append(tuple(tuple(r) for r in block))
    return tuple(gamma)


def gradient_components(g: Metric, f: Expr) -> list:
    return [differentiate(f, c) for c in g.coords]


def laplace_beltrami(g: Metric, f) -> Expr:
    """``(1/sqrt|g|) d_i(sqrt|g| g^{ij} d_j f)``."""
    f = as_expr(f)
    inv = g.inverse
    vol = g.volume
    df = gradient_components(g, f)
    terms = []
    for i, ci in enumerate(g.coords):
        flux = add([mul([vol, inv[i][j], df[j]]) for j in range(g.dim) if not is_zero_literal(inv[i][j])])
        terms.append(differentiate(flux, ci))
    total = add(terms)
    if vol != ONE:
        total = mul([pow_(vol, as_expr(-1)), total])
    return total


def ppwave_laplacian(H, f) -> Expr:
    """Closed form ``-2 f_uv + 2H f_vv + f_yy + f_zz`` for pp-wave metrics."""
    f = as_expr(f)
    fv = differentiate(f, "v")
    return add([
        mul([as_expr(-2), differentiate(fv, "u")]),
        mul([as_expr(2), as_expr(H), differentiate(fv, "v")]),
        differentiate(differentiate(f, "y"), "y"),
        differentiate(differentiate(f, "z"), "z"),
    ])


def flat_transverse_laplacian(f) -> Expr:
    f = as_expr(f)
    return add([differentiate(differentiate(f, "y"), "y"), differentiate(differentiate(f, "z"), "z")])


def lie_derivative_metric(g: Metric, xi: VectorField) -> tuple:
    """``(L_xi g)_ij = xi^k g_ij,k + g_kj xi^k_,i + g_ik xi^k_,j``."""
    n = g.dim
    d = _Partials(g.coords)
    dxi = [[d(xi[k], i) for i in range(n)] for k in range(n)]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            terms = [mul([xi[k], d(g[i, j], k)]) for k in range(n) if not is_zero_literal(xi[k])]
            for k in range(n):
                if not is_zero_literal(g[k, j]):
                    terms.append(mul([g[k, j], dxi[k][i]]))
                if not is_zero_literal(g[i, k]):
                    terms.append(mul([g[i, k], dxi[k][j]]))
            out[i][j] = out[j][i] = add(terms)
    return tuple(tuple(r) for r in out)


def covariant_hessian(g: Metric, f) -> tuple:
    """``f_;ij = f_,ij - Gamma^k_ij f_,k``."""
    f = as_expr(f)
    n = g.dim
    gam = g.christoffel
    df = gradient_components(g, f)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            terms = [differentiate(df[i], g.coords[j])]
            for k in range(n):
                if not is_zero_literal(gam[k][i][j]):
                    terms.append(neg(mul([gam[k][i][j], df[k]])))
            out[i][j] = out[j][i] = add(terms)
    return tuple(tuple(r) for r in out)


def divergence(g: Metric, xi: VectorField) -> Expr:
    """``xi^i_;i = (1/sqrt|g|) d_i(sqrt|g| xi^i)``."""
    vol = g.volume
    total = add([differentiate(mul([vol, xi[i]]), c) for i, c in enumerate(g.coords)])
    if vol != ONE:
        total = mul([pow_(vol, as_expr(-1)), total])
    return total


def apply_field(xi: VectorField, f, coords=COORDS) -> Expr:
    """Directional derivative ``xi^i f_,i``."""
    f = as_expr(f)
    return add([mul([xi[i], differentiate(f, c)]) for i, c in enumerate(coords) if not is_zero_literal(xi[i])])


def commutator(X: VectorField, Y: VectorField, coords=COORDS) -> VectorField:
    """``[X,Y]^i = X^j d_j Y^i - Y^j d_j X^i``."""
    return VectorField(tuple(
        add([apply_field(X, Y[i], coords), neg(apply_field(Y, X[i], coords))]) for i in range(len(coords))
    ))


# Polar and rotated-frame fields in Cartesian components.

_u, _v, _y, _z = (sym(c) for c in COORDS)


def d_u() -> VectorField:
    return VectorField.from_dict(u=ONE)


def d_v() -> VectorField:
    return VectorField.from_dict(v=ONE)


def d_y() -> VectorField:
    return VectorField.from_dict(y=ONE)


def d_z() -> VectorField:
    return VectorField.from_dict(z=ONE)


def d_theta() -> VectorField:
    return VectorField.from_dict(y=neg(_z), z=_y)


def r_dr() -> VectorField:
    return VectorField.from_dict(y=_y, z=_z)


def radius() -> Expr:
    return pow_(add([pow_(_y, as_expr(2)), pow_(_z, as_expr(2))]), rational(1, 2))


def d_r() -> VectorField:
    inv_r = pow_(radius(), as_expr(-1))
    return VectorField.from_dict(y=mul([_y, inv_r]), z=mul([_z, inv_r]))


def d_tprime(eta, sigma) -> VectorField:
    """``d_t'`` for ``t' = eta y + sigma z``, ``s' = eta z - sigma y``."""
    eta, sigma = as_expr(eta), as_expr(sigma)
    zeta2 = add([pow_(eta, as_expr(2)), pow_(sigma, as_expr(2))])
    inv = pow_(zeta2, as_expr(-1))
    return VectorField.from_dict(y=mul([eta, inv]), z=mul([sigma, inv]))


def d_sprime(eta, sigma) -> VectorField:
    eta, sigma = as_expr(eta), as_expr(sigma)
    zeta2 = add([pow_(eta, as_expr(2)), pow_(sigma, as_expr(2))])
    inv = pow_(zeta2, as_expr(-1))
    return VectorField.from_dict(y=neg(mul([sigma, inv])), z=mul([eta, inv]))
