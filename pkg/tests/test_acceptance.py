"""Acceptance criteria 1-10. Each test records one PASS/FAIL line, echoed in the terminal summary."""
import time

import numpy as np
import pytest

from ppsym.catalog import CLASS_IDS, get_class
from ppsym.expr import NumericZero, SymbolicZero, differentiate, is_zero, parse, simplify_basic, to_string
from ppsym.geometry import build_ppwave_metric, christoffel, laplace_beltrami
from ppsym.verify import Sampler, Tolerance, run_suite

from .conftest import record

TOL = 1e-9
BOX = Sampler.box({"u": (0.5, 2.0), "v": (-1.0, 1.0), "y": (0.5, 2.0), "z": (0.5, 2.0)}, seed=42, count=32)


def claims(report, kind):
    return [c for c in report.claims if c.kind == kind]


def linked(report):
    return {f"{d.class_id}:{d.claim}:{d.subject}": d for d in report.discrepancies}


def amended_ok(report, c) -> bool:
    """An amended claim is acceptable only with a discrepancy record holding a correction."""
    d = linked(report).get(c.discrepancy)
    return d is not None and d.corrected is not None


def test_criterion_1_connection():
    start = time.perf_counter()
    H = parse("H(u,y,z)")
    gamma = christoffel(build_ppwave_metric(H))
    elapsed = time.perf_counter() - start
    Hu, Hy, Hz = (to_string(simplify_basic(differentiate(H, c))) for c in ("u", "y", "z"))
    # (upper, lower, lower) with coordinates ordered u, v, y, z
    expected = {(1, 0, 0): Hu, (2, 0, 0): Hy, (3, 0, 0): Hz, (1, 0, 2): Hy, (1, 2, 0): Hy, (1, 0, 3): Hz, (1, 3, 0): Hz}
    got = {}
    for i in range(4):
        for j in range(4):
            for k in range(4):
                text = to_string(simplify_basic(gamma[i][j][k]))
                if text != "0":
                    got[(i, j, k)] = text
    ok = got == expected and elapsed < 1.0
    record(1, ok, f"{len(got)} nonzero symbols, match={got == expected}, {elapsed:.3f}s")
    assert ok


def test_criterion_2_laplacian():
    start = time.perf_counter()
    rng = np.random.default_rng(42)
    H = parse("H(u,y,z)")
    g = build_ppwave_metric(H)
    templates = [
        "{a}*u*v + {b}*y^2", "sin({a}*v)*exp({b}*y)", "v^2*ln(u + {a}) + z^3", "cos(u*z)*v*{a} + {b}",
        "exp({a}*u + {b}*v)*y*z", "F(u, v, y, z)*{a}", "(v^3 + {a}*y)/(u + 1)", "arctan({a}*y + z)*v^2",
        "sqrt(1 + {a}*v^2 + y^2)", "G(u, y)*v^2 + {b}*F(v, z)",
    ]
    bad = []
    for t in templates:
        a, b = (round(float(x), 3) for x in rng.uniform(0.2, 1.5, 2))
        f = parse(t.format(a=a, b=b))
        fv = differentiate(f, "v")
        closed = (-2 * differentiate(fv, "u") + 2 * H * differentiate(fv, "v")
                  + differentiate(differentiate(f, "y"), "y") + differentiate(differentiate(f, "z"), "z"))
        verdict = is_zero(laplace_beltrami(g, f) - closed, BOX, Tolerance())
        if not isinstance(verdict, (SymbolicZero, NumericZero)):
            bad.append(t)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 1.0
    record(2, ok, f"{len(templates) - len(bad)}/{len(templates)} scalars agree, {elapsed:.3f}s")
    assert ok


def test_criterion_3_killing_coverage(full_report):
    start = time.perf_counter()
    run_suite(CLASS_IDS, seed=42, noether=False)
    elapsed = time.perf_counter() - start
    kvs = [c for c in claims(full_report, "conformal-class") if c.detail["expected"] == "Killing"]
    failures = [c for c in kvs if c.status == "fail"]
    loose = [c for c in kvs if c.max_residual >= TOL]
    unexplained = [c for c in kvs if c.status == "amended-pass" and not amended_ok(full_report, c)]
    amended = sum(c.status == "amended-pass" for c in kvs)
    ok = not failures and not loose and not unexplained and elapsed < 30.0
    record(3, ok, f"{len(kvs)} KVs over {len(CLASS_IDS)} entries, {amended} amended, "
                  f"{len(failures)} failed, catalog run {elapsed:.1f}s")
    assert ok


PRINTED_PSI_CLASSES = ("2i", "2ii", "2iii", "5i", "5ii", "6i", "6ii", "6iii", "6iv", "8i", "8iii", "10", "10i", "10ii")


def test_criterion_4_conformal_factors(full_report):
    factors = claims(full_report, "conformal-factor")
    by_class = {cid: [c for c in factors if c.class_id == cid] for cid in PRINTED_PSI_CLASSES}
    missing = [cid for cid, cs in by_class.items() if not cs]
    failing = [c for c in factors if c.status == "fail" or c.max_residual >= TOL]
    unexplained = [c for c in factors if c.status == "amended-pass" and not amended_ok(full_report, c)]
    h6 = next(c for c in factors if c.class_id == "10" and c.subject == "H6")
    h6_ok = h6.status == "amended-pass" and linked(full_report)[h6.discrepancy].corrected == "1"
    ok = not missing and not failing and not unexplained and h6_ok
    amended = sum(c.status == "amended-pass" for c in factors)
    record(4, ok, f"{len(factors)} factors checked, {amended} amended, psi_6(10) -> 1: {h6_ok}")
    assert ok


def test_criterion_5_wave_equation(full_report):
    wave = {(c.class_id, c.subject): c for c in claims(full_report, "wave-psi")}
    explicit = [("5ii", "C4"), ("6i", "C4"), ("6i", "C5")]
    explicit_ok = all(k in wave and wave[k].status == "pass" for k in explicit)
    conformal = [c for c in claims(full_report, "conformal-class")
                 if c.status != "fail" and c.detail.get("amended_verdict", c.detail["printed_verdict"]) != "Killing"]
    uncovered = [c for c in conformal if (c.class_id, c.subject) not in wave]
    failing = [c for c in wave.values() if c.status != "pass"]
    ok = explicit_ok and not uncovered and not failing
    record(5, ok, f"{len(wave)} conformal factors harmonic, explicit claims {explicit_ok}")
    assert ok


def test_criterion_6_commutators(full_report):
    comm = claims(full_report, "commutator")
    failing = [c for c in comm if c.status == "fail" or c.max_residual >= TOL]
    unexplained = [c for c in comm if c.status == "amended-pass" and not amended_ok(full_report, c)]
    fitted = {c.class_id for c in comm if c.subject == "structure constants"}
    jacobi = {c.class_id for c in comm if c.subject == "Jacobi identity" and c.status == "pass"}
    unfitted = [cid for cid in CLASS_IDS if cid not in fitted]
    # classes without a fit must still carry their per-entry bracket checks and a note
    unfitted_ok = all(full_report.classes[cid].notes and any(c.class_id == cid for c in comm) for cid in unfitted)
    ok = not failing and not unexplained and fitted <= jacobi and unfitted_ok
    record(6, ok, f"{len(comm)} commutator claims, {len(fitted)} fitted algebras with Jacobi, "
                  f"{len(unfitted)} checked entry-wise ({', '.join(unfitted)})")
    assert ok


def wave_count_mismatches():
    return {cid: (get_class(cid).wave_count_printed, n) for cid, n in _derived_counts.items()
            if n != get_class(cid).wave_count_printed}


_derived_counts: dict = {}


@pytest.mark.xfail(strict=True, reason="derived counts for 1i and 8ii differ from the printed column")
def test_criterion_7_wave_symmetry_counts(full_report):
    _derived_counts.update({cid: rep.wave_count for cid, rep in full_report.classes.items()})
    mismatched = wave_count_mismatches()
    max_plane = max(_derived_counts[c] for c in ("10i", "10ii", "11", "12", "13", "14"))
    ok = not mismatched and max_plane == 7
    shown = ", ".join(f"{cid} printed {p} derived {d}" for cid, (p, d) in sorted(mismatched.items()))
    record(7, ok, f"{len(_derived_counts) - len(mismatched)}/{len(_derived_counts)} rows equal; "
                  f"max {max_plane} for 10i-14; differing: {shown or 'none'}")
    assert ok


def test_criterion_7_differences_are_recorded(full_report):
    counts = {c.class_id: c for c in claims(full_report, "wave-count")}
    for cid, rep in full_report.classes.items():
        c = counts[cid]
        if rep.wave_count == get_class(cid).wave_count_printed:
            assert c.status == "pass"
        else:
            assert c.status == "amended-pass"
            assert linked(full_report)[c.discrepancy].corrected == str(rep.wave_count)


PURE_KV = ("1", "1i", "3", "4", "5", "6", "7", "8", "9", "13")


def test_criterion_8_potential_families(full_report):
    fams = claims(full_report, "kg-potential")
    pure = [c for c in fams if c.class_id in PURE_KV]
    pure_ok = all(c.status != "fail" for c in pure) and all(
        sum(c.class_id == cid for c in pure) >= 3 for cid in PURE_KV)
    unexplained = [c for c in fams if c.status == "amended-pass" and not amended_ok(full_report, c)]
    failing = [c for c in fams if c.status == "fail" and c.discrepancy is None]
    passing = sum(c.status == "pass" for c in fams)
    ok = pure_ok and not unexplained and not failing and passing >= 20
    amended = sum(c.status == "amended-pass" for c in fams)
    record(8, ok, f"{passing} family checks pass as printed, {amended} pass after amendment, "
                  f"{len(fams) - passing - amended} fail")
    assert ok


def test_criterion_9_noether(full_report):
    passing = [c for c in claims(full_report, "kg-potential") if c.status != "fail"]
    cond = {(c.class_id, c.subject): c for c in claims(full_report, "noether-condition")}
    div = {(c.class_id, c.subject): c for c in claims(full_report, "noether-divergence")}
    missing = [c for c in passing if (c.class_id, c.subject) not in cond or (c.class_id, c.subject) not in div]
    bad = [c for c in list(cond.values()) + list(div.values())
           if c.status != "pass" or c.max_residual >= TOL or c.count != 64]
    worst = max([c.max_residual for c in list(cond.values()) + list(div.values())], default=0.0)
    ok = not missing and not bad
    record(9, ok, f"{len(cond)} condition and {len(div)} divergence checks at 64 jet points, worst {worst:.2e}")
    assert ok


def test_criterion_10_determinism(full_report):
    again = run_suite(CLASS_IDS, seed=42, noether=True, workers=2)
    first, second = full_report.to_json(), again.to_json()
    ok = first == second
    record(10, ok, f"two seed-42 runs, {len(first)} bytes each, identical={ok}")
    assert ok
