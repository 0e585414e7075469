import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ppsym.expr import is_zero, parse, simplify_basic, to_string
from ppsym.geometry import (
    GeometryError,
    VectorField,
    build_ppwave_metric,
    christoffel,
    commutator,
    covariant_hessian,
    divergence,
    flat_transverse_laplacian,
    identity_residuals,
    laplace_beltrami,
    lie_derivative_metric,
    ppwave_laplacian,
)
from ppsym.verify import Sampler

from .conftest import num

H_TEXT = "u^2*sin(y) + y*z^3 + ln(u)*z"
COORDS = ("u", "v", "y", "z")
BOX = Sampler.box({"u": (0.5, 2.0), "v": (-1.0, 1.0), "y": (0.5, 2.0), "z": (0.5, 2.0)}, count=16)


def metric_matrix(H: float) -> np.ndarray:
    return np.array([[-2 * H, -1, 0, 0], [-1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], dtype=float)


def fd_christoffel(point: np.ndarray, h=1e-5) -> np.ndarray:
    """Christoffel symbols from numpy finite differences of the metric."""
    Hf = parse(H_TEXT)

    def g_at(p):
        return metric_matrix(num(Hf, u=p[0], v=p[1], y=p[2], z=p[3]))

    dg = np.zeros((4, 4, 4))  # dg[k] = d_k g
    for k in range(4):
        e = np.zeros(4)
        e[k] = h
        dg[k] = (g_at(point + e) - g_at(point - e)) / (2 * h)
    inv = np.linalg.inv(g_at(point))
    out = np.zeros((4, 4, 4))
    for i in range(4):
        for j in range(4):
            for k in range(4):
                out[i, j, k] = 0.5 * sum(inv[i, l] * (dg[k][l, j] + dg[j][l, k] - dg[l][j, k]) for l in range(4))
    return out


def test_christoffel_against_finite_differences():
    g = build_ppwave_metric(parse(H_TEXT))
    gamma = christoffel(g)
    point = np.array([1.2, 0.3, 0.8, 1.4])
    ref = fd_christoffel(point)
    for i in range(4):
        for j in range(4):
            for k in range(4):
                got = num(gamma[i][j][k], **dict(zip(COORDS, point)))
                assert got == pytest.approx(ref[i, j, k], abs=1e-7)


def test_christoffel_is_symmetric():
    gamma = christoffel(build_ppwave_metric(parse("H(u,y,z)")))
    for i in range(4):
        for j in range(4):
            for k in range(4):
                assert to_string(gamma[i][j][k]) == to_string(gamma[i][k][j])


def test_inverse_metric_identity():
    g = build_ppwave_metric(parse("H(u,y,z)"))
    for r in identity_residuals(g):
        assert to_string(simplify_basic(r)) == "0"


def test_profile_must_not_depend_on_v():
    with pytest.raises(GeometryError):
        build_ppwave_metric(parse("u*v"))


@pytest.mark.parametrize("f", ["v^2*y + sin(u*z)", "exp(u)*v*r", "ln(u + y)*cos(v*z)"])
def test_laplacian_matches_closed_form(f):
    H = parse(H_TEXT)
    g = build_ppwave_metric(H)
    diff = laplace_beltrami(g, parse(f)) - ppwave_laplacian(H, parse(f))
    assert is_zero(diff, BOX)


def test_flat_laplacian_of_harmonic():
    assert is_zero(flat_transverse_laplacian(parse("y^2 - z^2 + ln(r)")), BOX)


def test_killing_field_of_flat_space():
    # a transverse rotation is an isometry whatever u-dependence H has, if H is radial
    g = build_ppwave_metric(parse("exp(u)*r^2"))
    rot = VectorField.parse("[0, 0, -z, y]")
    for row in lie_derivative_metric(g, rot):
        for c in row:
            assert is_zero(c, BOX)
    assert to_string(simplify_basic(divergence(g, rot))) == "0"


def test_commutator_of_coordinate_fields():
    a = VectorField.parse("[0, y, u, 0]")
    b = VectorField.parse("[0, 0, 1, 0]")
    br = commutator(a, b)
    # [y d_v + u d_y, d_y] = -d_v
    assert [to_string(simplify_basic(c)) for c in br] == ["0", "-1", "0", "0"]


@given(st.floats(-2, 2), st.floats(-2, 2))
@settings(max_examples=25, deadline=None)
def test_commutator_is_antisymmetric(a, b):
    X = VectorField.parse(f"[u*{a}, y, z^2, {b}*y]")
    Y = VectorField.parse("[1, u*z, sin(u), 0]")
    total = commutator(X, Y) + commutator(Y, X)
    assert all(to_string(simplify_basic(c)) == "0" for c in total)


def test_hessian_of_linear_function_vanishes_in_flat_space():
    g = build_ppwave_metric(parse("0"))
    hess = covariant_hessian(g, parse("3*u + 2*y - v"))
    assert all(to_string(simplify_basic(c)) == "0" for row in hess for c in row)


def test_vector_field_needs_four_components():
    with pytest.raises(Exception):
        VectorField.parse("[u, 0, 0]")
