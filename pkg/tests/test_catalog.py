import numpy as np
import pytest

from ppsym.catalog import (
    CLASS_IDS,
    POTENTIAL_BODIES,
    CatalogError,
    canonical_id,
    get_class,
    instantiate_potential,
    solve_plane_wave_basis,
    vacuum_check,
    verify_class,
)
from ppsym.expr import differentiate, parse, simplify_basic, to_string
from ppsym.geometry import VectorField, build_ppwave_metric
from ppsym.symmetry import ConformalKind, classify_conformal
from ppsym.verify import Sampler

from .conftest import central_diff, num

BOX = Sampler.box({"u": (0.5, 2.0), "v": (-1.0, 1.0), "y": (0.5, 2.0), "z": (0.5, 2.0)}, count=24)


def test_catalog_ids():
    assert len(CLASS_IDS) == 32
    assert len(set(CLASS_IDS)) == 32
    assert {"1", "6i", "8(delta=0)", "2ii(Theta=0)", "14"} <= set(CLASS_IDS)


def test_unknown_id():
    with pytest.raises(CatalogError):
        canonical_id("nosuch")


@pytest.mark.parametrize("cid", CLASS_IDS)
def test_every_class_builds(cid):
    cls = get_class(cid)
    assert cls.generators[0].name == "k"
    assert cls.names == tuple(g.name for g in cls.generators)
    build_ppwave_metric(cls.H)


# plane waves ---------------------------------------------------------------------

@pytest.mark.parametrize("A, B, C", [(0, 0, 0), (1, 0, 4), (1, "1/2", -2), (-1, 0, -3), (2, 1, 2)])
def test_plane_basis_solves_its_system(A, B, C):
    from fractions import Fraction

    a, b, c = (float(Fraction(x)) for x in (A, B, C))
    basis = solve_plane_wave_basis(Fraction(A), Fraction(B), Fraction(C))
    assert len(basis) == 4
    u0 = 0.7
    rows = []
    for d, e in basis:
        dd = differentiate(differentiate(d, "u"), "u")
        ee = differentiate(differentiate(e, "u"), "u")
        vd, ve = num(d, u=u0), num(e, u=u0)
        assert num(dd, u=u0) + c * vd + b * ve == pytest.approx(0, abs=1e-12)
        assert num(ee, u=u0) + a * ve + b * vd == pytest.approx(0, abs=1e-12)
        rows.append([vd, ve, num(differentiate(d, "u"), u=u0), num(differentiate(e, "u"), u=u0)])
    # four independent solutions of a fourth-order system
    assert abs(np.linalg.det(np.array(rows))) > 1e-6


def test_zero_coefficients_give_polynomial_basis():
    basis = solve_plane_wave_basis(0, 0, 0)
    texts = sorted((to_string(simplify_basic(d)), to_string(simplify_basic(e))) for d, e in basis)
    assert texts == sorted([("1", "0"), ("u", "0"), ("0", "1"), ("0", "u")])


def test_plane_wave_killing_pairs_y_coefficient_with_d():
    # H = (y^2 + 4 z^2)/2. The field d d_y + d' y d_v is Killing when d'' = -d,
    # i.e. the y^2 coefficient drives d; the other pairing fails.
    g = build_ppwave_metric(parse("(y^2 + 4*z^2)/2"))
    good = VectorField.parse("[0, -sin(u)*y, cos(u), 0]")
    swapped = VectorField.parse("[0, -2*sin(2*u)*y, cos(2*u), 0]")
    assert classify_conformal(g, good, BOX).kind is ConformalKind.KILLING
    assert classify_conformal(g, swapped, BOX).kind is ConformalKind.NONE


def test_plane_class_keeps_printed_rules():
    cls = get_class("10")
    assert cls.printed_rules is not None
    assert cls.rules_amendment is not None
    rep = verify_class("10", noether=False)
    statuses = {c.subject: c.status for c in rep.claims if c.kind == "conformal-class"}
    assert statuses["k"] == "pass"
    assert statuses["X1a"] == "amended-pass"


# conformal factors against a finite-difference divergence ------------------------------

def fd_psi(field: VectorField, point: dict) -> float:
    # sqrt|g| = 1 for pp-waves, so psi is a quarter of the flat divergence
    total = 0.0
    for comp, c in zip(field, ("u", "v", "y", "z")):
        total += central_diff(lambda **p: num(comp, **p), point, c)
    return total / 4


@pytest.mark.parametrize("cid, name, psi", [
    ("6ii", "S5", "u"),
    ("10", "H6", "1"),
    ("5ii", "C4", "2/(2-1/2)*u^((1/2+2)/(2-1/2))"),
    ("6i", "C4", "sqrt(8/5)/2*cos(sqrt(8/5)*u)"),
])
def test_corrected_conformal_factor(cid, name, psi):
    gen = next(g for g in get_class(cid).generators if g.name == name)
    for point in ({"u": 0.8, "v": 0.1, "y": 1.2, "z": 0.6}, {"u": 1.7, "v": -0.4, "y": 0.9, "z": 1.9}):
        assert fd_psi(gen.field, point) == pytest.approx(num(psi, **point), rel=1e-7)


def test_printed_psi_6ii_is_off_by_half():
    gen = next(g for g in get_class("6ii").generators if g.name == "S5")
    assert gen.psi_printed_text == "u/2"
    assert fd_psi(gen.field, {"u": 1.5, "v": 0.0, "y": 1.0, "z": 1.0}) == pytest.approx(1.5, rel=1e-7)


# potentials ---------------------------------------------------------------------------

def test_potential_bodies_are_three():
    assert len(POTENTIAL_BODIES) == 3


def test_instantiate_potential_class_1():
    V = instantiate_potential(get_class("1"), "x1 + x2*x3")
    assert num(V, u=1.0, y=2.0, z=3.0) == pytest.approx(7.0)


def test_instantiate_potential_unknown_name():
    with pytest.raises(CatalogError):
        instantiate_potential(get_class("1"), "x1", name="nope")


def test_vacuum_check():
    assert vacuum_check(parse("y^2 - z^2"))
    assert not vacuum_check(parse("y^2 + z^2"))


# whole-class runs -------------------------------------------------------------------------

def test_class_6i_proper_conformal_pair():
    rep = verify_class("6i", noether=False)
    kinds = {c.subject: c.detail.get("amended_verdict", c.detail.get("printed_verdict"))
             for c in rep.claims if c.kind == "conformal-class"}
    assert kinds["C4"] == kinds["C5"] == "ProperConformal"
    wave = {c.subject: c.status for c in rep.claims if c.kind == "wave-psi"}
    assert wave == {"C4": "pass", "C5": "pass"}
    assert rep.ok


def test_parameter_override_changes_class():
    a = get_class("6i")
    b = get_class("6i", {"N": 2})
    assert to_string(a.H) != to_string(b.H)
    assert verify_class("6i", noether=False, params={"N": 2}).ok


def test_amended_claims_link_discrepancies():
    rep = verify_class("6ii", noether=False)
    keys = {f"{d.class_id}:{d.claim}:{d.subject}" for d in rep.discrepancies}
    for c in rep.claims:
        if c.status == "amended-pass":
            assert c.discrepancy in keys
