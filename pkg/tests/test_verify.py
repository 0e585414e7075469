import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ppsym.expr import parse
from ppsym.verify import (
    SCHEMA_VERSION,
    Exclusion,
    Sampler,
    Tolerance,
    residual_check,
    run_suite,
    zero_residual,
)
from ppsym.verify.sampling import reevaluate_witness

BOUNDS = {"u": (0.5, 2.0), "v": (-1.0, 1.0), "y": (0.5, 2.0), "z": (0.5, 2.0)}


def test_tolerance_must_be_positive():
    with pytest.raises(ValueError):
        Tolerance(tol_abs=0.0)


def test_sampler_is_seeded():
    a = Sampler.box(BOUNDS, seed=7).points()
    b = Sampler.box(BOUNDS, seed=7).points()
    c = Sampler.box(BOUNDS, seed=8).points()
    assert all(np.array_equal(a[k], b[k]) for k in a)
    assert not np.array_equal(a["u"], c["u"])
    assert all(lo <= a[k].min() and a[k].max() <= hi for k, (lo, hi) in BOUNDS.items())


def test_exclusion_keeps_count():
    s = Sampler.box(BOUNDS, count=20, exclusions=(Exclusion(parse("y - z"), 0.3),))
    pts = s.points()
    assert len(pts["y"]) == 20
    assert np.all(np.abs(pts["y"] - pts["z"]) > 0.3)


def test_scaled_residual_by_hand():
    # terms sin^2, cos^2, -1, u/10^6: the sum is u/10^6 and the largest term has size 1
    s = Sampler.box({"u": (1.0, 2.0)}, count=8)
    r = residual_check(parse("sin(u)^2 + cos(u)^2 - 1 + u/1000000"), s)
    u = s.points()["u"]
    expected = np.max(1e-6 * u / (1e-3 + 1.0))
    assert r.max_scaled == pytest.approx(expected, rel=1e-9)
    assert not r.passed


@given(st.floats(1e-14, 1e-3), st.floats(1e-14, 1e-3), st.integers(0, 2**16))
@settings(max_examples=60, deadline=None)
def test_tightening_tolerance_only_removes_passes(t1, t2, seed):
    tight, loose = sorted((t1, t2))
    e = parse("exp(ln(u)) - u + u*y*1e-8")
    s = Sampler.box(BOUNDS, seed=seed, count=8)
    a = residual_check(e, s, Tolerance(tol_rel=tight)).passed
    b = residual_check(e, s, Tolerance(tol_rel=loose)).passed
    assert (not a) or b


@given(st.integers(0, 2**20))
@settings(max_examples=30, deadline=None)
def test_witness_reevaluates_exactly(seed):
    e = parse("sin(u)*y - z/3 + 1e-4*v")
    r = zero_residual(e, Sampler.box(BOUNDS, seed=seed, count=16))
    assert not r.passed
    assert reevaluate_witness(e, r.witness) == r.witness["value"]


def test_witness_with_function_jets():
    e = parse("F(u)*y")
    r = zero_residual(e, Sampler.box(BOUNDS, count=8))
    assert "F" in r.witness["jets"]
    assert reevaluate_witness(e, r.witness) == r.witness["value"]


# suites ---------------------------------------------------------------------------

def test_empty_suite():
    rep = run_suite([])
    assert rep.summary == {"pass": 0, "fail": 0, "amended": 0}
    assert json.loads(rep.to_json())["claims"] == []


def test_class_1_suite():
    rep = run_suite(["1"], noether=False)
    kinds = {(c.kind, c.subject): c for c in rep.claims}
    assert kinds[("conformal-class", "k")].detail["printed_verdict"] == "Killing"
    assert rep.classes["1"].wave_count == 1
    assert kinds[("wave-count", "wave symmetries")].status == "pass"
    assert not any(c.kind == "wave-psi" for c in rep.claims)


def test_suite_is_order_and_worker_independent():
    ids = ["6ii", "1i", "5i"]
    a = run_suite(ids, noether=False).to_json()
    b = run_suite(list(reversed(ids)), noether=False, workers=2).to_json()
    assert a == b


def test_suite_deduplicates_ids():
    assert run_suite(["1", "1"], noether=False).to_json() == run_suite(["1"], noether=False).to_json()


def test_suite_monotone_in_tolerance():
    loose = run_suite(["5ii", "6i"], noether=False)
    tight = run_suite(["5ii", "6i"], noether=False, tol=Tolerance(tol_rel=1e-15, tol_abs=1e-18))
    before = {(c.class_id, c.kind, c.subject): c.passed for c in loose.claims}
    for c in tight.claims:
        key = (c.class_id, c.kind, c.subject)
        if key in before and c.passed:
            assert before[key]


def test_json_schema():
    doc = json.loads(run_suite(["1i"], noether=False).to_json())
    assert doc["schema_version"] == SCHEMA_VERSION
    assert set(doc) == {"schema_version", "seed", "tolerances", "claims", "summary", "discrepancies"}
    claim = doc["claims"][0]
    assert set(claim) == {"class_id", "kind", "subject", "status", "max_residual", "witness", "seed", "count",
                          "detail", "discrepancy"}
    assert doc["discrepancies"][0]["class_id"] == "1i"
