"""Machine verification of one catalog class."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..expr import (
    Expr,
    add,
    apply_rewrites,
    as_expr,
    differentiate,
    evaluate,
    function_symbols,
    instantiate,
    is_zero,
    mul,
    neg,
    simplify_basic,
    to_string,
)
from ..expr.evaluate import DomainError, NumericFailure
from ..expr.zero import NonZero
from ..geometry import COORDS, Metric, VectorField, build_ppwave_metric, combine, commutator, flat_transverse_laplacian, laplace_beltrami
from ..symmetry import (
    ConformalKind,
    RankDeficiency,
    classify_conformal,
    conformal_factor,
    fit_structure_constants,
    kg_symmetry_residual,
    lift_to_point_symmetry,
    noether_condition_residual,
    noether_current,
    noether_gauge,
    onshell_divergence_residual,
)
from ..symmetry.noether import first_jet_names, second_jet_names
from ..verify.report import ClaimReport
from ..verify.sampling import ResidualResult, Sampler, Tolerance, zero_residual
from .classes import get_class
from .model import POTENTIAL_BODIES, Discrepancy, PPWaveClass

NOETHER_POINTS = 64
JET_BOX = (-1.0, 1.0)


@dataclass
class ClassReport:
    class_id: str
    claims: list = field(default_factory=list)
    discrepancies: list = field(default_factory=list)
    wave_count: int = 0
    structure: object = None
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.claims)


def instantiate_potential(cls: PPWaveClass, body: str, constants: dict | None = None, corrected: bool = True, name: str | None = None) -> Expr:
    """Potential family of ``cls`` with the outer function ``V`` set to ``body``.

    ``body`` is written in ``x1, x2, x3``. ``constants`` overrides c1..c6,
    which requires rebuilding the class with those values.
    """
    from ..expr import parse, ParseContext
    from .model import CatalogError

    if constants:
        params = {k: v for k, v in cls.params.items()}
        params.update({k: Fraction(v) for k, v in constants.items()})
        cls = get_class(cls.id, {k: v for k, v in params.items() if not isinstance(v, Expr)})
    if not cls.potentials:
        raise CatalogError(f"class {cls.id} has no potential family")
    fam = cls.potentials[-1] if name is None else next((p for p in cls.potentials if p.name == name), None)
    if fam is None:
        raise CatalogError(f"class {cls.id} has no potential {name!r}")
    expr = fam.potential if corrected else fam.printed
    value = instantiate(expr, {"V": parse(body, ParseContext())})
    try:
        evaluate(simplify_basic(value), _probe_env(cls, value))
    except ZeroDivisionError as exc:
        raise CatalogError(f"potential {fam.name} of class {cls.id} divides by zero for these constants") from exc
    return value


def _probe_env(cls, e):
    sampler = Sampler.box({k: (float(a), float(b)) for k, (a, b) in cls.box.items()}, count=2)
    return sampler.environment(e)


class _Checker:
    def __init__(self, cls: PPWaveClass, seed: int, tol: Tolerance, count: int, noether: bool):
        self.cls = cls
        self.seed = seed
        self.tol = tol
        self.count = count
        self.noether = noether
        self.rules = cls.rules
        self.g = build_ppwave_metric(cls.H)
        bounds = {k: (float(a), float(b)) for k, (a, b) in cls.box.items()}
        self.bounds = bounds
        self.sampler = Sampler.box(bounds, seed=seed, count=count, exclusions=cls.exclusions)
        self.report = ClassReport(cls.id)
        self.fields = {}
        self.psis = {}
        self.kinds = {}

    # helpers ---------------------------------------------------------------
    def lower(self, e: Expr) -> Expr:
        return simplify_basic(apply_rewrites(e, self.rules)) if self.rules else e

    def zero(self, e: Expr, sampler: Sampler | None = None) -> ResidualResult:
        sampler = sampler or self.sampler
        try:
            return zero_residual(self.lower(e), sampler, self.tol)
        except (DomainError, NumericFailure) as exc:
            # a formula leaving its real domain inside the box counts as a failure
            return ResidualResult(False, float("inf"), sampler.count, {"error": str(exc)})

    def zero_field(self, X: VectorField) -> ResidualResult:
        results = []
        for comp, c in zip(COORDS, X):
            r = self.zero(c)
            if r.witness is not None:
                r.witness["component"] = comp
            results.append(r)
        failed = [r for r in results if not r.passed]
        pool = failed or results
        return max(pool, key=lambda r: r.max_scaled)

    def claim(self, kind, subject, status, result: ResidualResult | None = None, detail=None, disc=None, count=None):
        c = ClaimReport(
            class_id=self.cls.id,
            kind=kind,
            subject=subject,
            status=status,
            max_residual=float(result.max_scaled) if result is not None else 0.0,
            witness=result.witness if (result is not None and status == "fail") else None,
            seed=self.seed,
            count=count if count is not None else (result.count if result is not None else 0),
            detail=detail or {},
            discrepancy=disc,
        )
        self.report.claims.append(c)
        return c

    def discrepancy(self, claim, subject, printed, corrected, note, evidence, status="amended") -> str:
        key = f"{self.cls.id}:{claim}:{subject}"
        if not any(f"{d.class_id}:{d.claim}:{d.subject}" == key for d in self.report.discrepancies):
            self.report.discrepancies.append(
                Discrepancy(self.cls.id, claim, subject, printed, corrected, note, evidence, status)
            )
        return key

    @staticmethod
    def evidence(result: ResidualResult | None, extra=None) -> dict:
        out = {}
        if result is not None:
            out["max_scaled_residual"] = float(result.max_scaled)
            if result.witness is not None:
                out["witness"] = result.witness
        if extra:
            out.update(extra)
        return out

    # generators ------------------------------------------------------------
    def generators(self):
        printed_rules = self.cls.printed_rules if self.cls.printed_rules is not None else self.rules
        for gen in self.cls.generators:
            printed = classify_conformal(self.g, gen.printed_field, self.sampler, self.tol, printed_rules)
            printed_ok = printed.kind is gen.expected
            detail = {"expected": gen.expected.value, "printed_verdict": printed.kind.value}
            amend = gen.field_amendment
            if amend is None and not printed_ok and self.cls.rules_amendment is not None:
                # the field is fine once its profile functions obey the amended constraints
                amend = self.cls.rules_amendment
            if amend is None:
                field_in_use, verdict = gen.printed_field, printed
                status = "pass" if printed_ok else "fail"
                result = ResidualResult(printed_ok, printed.max_residual, self.count, printed.witness)
                disc = None
                if not printed_ok:
                    disc = self.discrepancy(
                        "conformal-class", gen.name, gen.printed_field.to_text(), None,
                        f"printed field classifies as {printed.kind.value}, expected {gen.expected.value}",
                        self.evidence(result), status="unresolved",
                    )
            else:
                field_in_use = gen.field
                verdict = classify_conformal(self.g, field_in_use, self.sampler, self.tol, self.rules)
                ok = verdict.kind is gen.expected
                detail["amended_verdict"] = verdict.kind.value
                status = "amended-pass" if ok else "fail"
                result = ResidualResult(ok, verdict.max_residual, self.count, verdict.witness)
                ev = self.evidence(ResidualResult(printed_ok, printed.max_residual, self.count, printed.witness))
                ev["printed_verdict"] = printed.kind.value
                disc = self.discrepancy("conformal-class", gen.name, amend.printed, amend.corrected, amend.note, ev)
            self.claim("conformal-class", gen.name, status, result, detail, disc)
            self.fields[gen.name] = field_in_use
            self.kinds[gen.name] = verdict.kind
            psi = conformal_factor(self.g, field_in_use, self.rules)
            self.psis[gen.name] = psi
            self.conformal_factor(gen, psi)
            if verdict.kind.is_conformal and verdict.kind is not ConformalKind.KILLING:
                r = self.zero(laplace_beltrami(self.g, psi))
                self.claim("wave-psi", gen.name, "pass" if r.passed else "fail", r, {"psi": to_string(psi)})

    def conformal_factor(self, gen, psi):
        if gen.printed_psi is None and gen.psi_amendment is None:
            return
        detail = {"computed_psi": to_string(simplify_basic(psi))}
        if gen.printed_psi is not None:
            r = self.zero(add([psi, neg(gen.printed_psi)]))
            detail["printed_psi"] = gen.psi_printed_text
        else:
            r = ResidualResult(False, float("inf"), self.count, None)
            detail["printed_psi"] = None
        if gen.psi_amendment is None:
            disc = None
            if not r.passed:
                disc = self.discrepancy("conformal-factor", gen.name, gen.psi_printed_text or "", None,
                                        "printed conformal factor disagrees with the divergence", self.evidence(r),
                                        status="unresolved")
            self.claim("conformal-factor", gen.name, "pass" if r.passed else "fail", r, detail, disc)
            return
        rc = self.zero(add([psi, neg(gen.corrected_psi)]))
        amend = gen.psi_amendment
        ev = self.evidence(r if gen.printed_psi is not None else None, {"computed_psi": detail["computed_psi"]})
        disc = self.discrepancy("conformal-factor", gen.name, amend.printed, amend.corrected, amend.note, ev)
        detail["corrected_psi"] = amend.corrected
        self.claim("conformal-factor", gen.name, "amended-pass" if rc.passed else "fail", rc, detail, disc)

    # commutators -------------------------------------------------------------
    def _bracket_residual(self, left, right, value) -> VectorField:
        br = commutator(self.fields[left], self.fields[right], COORDS)
        parts = [self.fields[name].scale(coeff) for name, coeff in value]
        expected = parts[0] if parts else VectorField((0, 0, 0, 0))
        for p in parts[1:]:
            expected = expected + p
        return br - expected

    def commutators(self):
        listed = set()
        for entry in self.cls.commutators:
            listed.add((entry.left, entry.right))
            listed.add((entry.right, entry.left))
            subject = f"[{entry.left},{entry.right}]"
            r = self.zero_field(self._bracket_residual(entry.left, entry.right, entry.printed))
            detail = {"printed": entry.printed_text}
            if entry.amendment is None:
                disc = None
                if not r.passed:
                    disc = self.discrepancy("commutator", subject, entry.printed_text, None,
                                            "bracket differs from the printed value", self.evidence(r), "unresolved")
                self.claim("commutator", subject, "pass" if r.passed else "fail", r, detail, disc)
            else:
                rc = self.zero_field(self._bracket_residual(entry.left, entry.right, entry.corrected))
                a = entry.amendment
                disc = self.discrepancy("commutator", subject, a.printed, a.corrected, a.note, self.evidence(r))
                detail["corrected"] = a.corrected
                self.claim("commutator", subject, "amended-pass" if rc.passed else "fail", rc, detail, disc)
            if any(function_symbols(c) for _, c in entry.value):
                # non-constant-looking coefficients must still be constants on shell
                for name, coeff in entry.value:
                    r = self.zero(differentiate(coeff, "u"))
                    self.claim("commutator", f"{subject} coefficient constant", "pass" if r.passed else "fail", r)
        for a, b in sorted(self.cls.closure_pairs):
            br = commutator(self.fields[a], self.fields[b], COORDS)
            v = classify_conformal(self.g, br, self.sampler, self.tol, self.rules)
            ok = v.kind is ConformalKind.KILLING
            res = ResidualResult(ok, v.max_residual, self.count, v.witness)
            self.claim("commutator", f"[{a},{b}] closes", "pass" if ok else "fail", res, {"verdict": v.kind.value})
        self.fit(listed)

    def fit(self, listed):
        names = self.cls.names
        fields = [self.fields[n] for n in names]
        inst = self.cls.fit_functions
        if inst:
            fields = [VectorField(tuple(simplify_basic(instantiate(c, inst)) for c in f)) for f in fields]
        elif self.rules and any(function_symbols(c) & {r.fn for r in self.rules} for f in fields for c in f):
            self.report.notes.append(f"structure-constant fit skipped: {self.cls.fit_note}")
            return
        try:
            table = fit_structure_constants(fields, self.sampler, self.tol, names, self.rules)
        except RankDeficiency as exc:
            r = ResidualResult(False, float("inf"), self.count, None)
            self.claim("commutator", "structure constants", "fail", r, {"error": str(exc)})
            return
        self.report.structure = table
        worst = table.max_residual
        mismatches = {}
        env = self.sampler.with_count(1).environment(as_expr(0))
        expected = {}
        for entry in self.cls.commutators:
            vec = [0.0] * len(names)
            for name, coeff in entry.value:
                c = instantiate(coeff, inst) if inst else coeff
                vec[names.index(name)] += float(np.asarray(evaluate(simplify_basic(c), env)).reshape(-1)[0])
            expected[(entry.left, entry.right)] = vec
        for (i, j), row in table.constants.items():
            key = (names[i], names[j])
            if key in expected:
                exp_row = expected[key]
            elif (key[1], key[0]) in expected:
                exp_row = [-x for x in expected[(key[1], key[0])]]
            else:
                continue
            for k, (got, want) in enumerate(zip(row, exp_row)):
                if abs(float(got) - want) > 1e-9 * max(1.0, abs(want)):
                    mismatches[f"[{key[0]},{key[1]}].{names[k]}"] = {"fitted": float(got), "expected": want}
        ok = worst <= self.tol.tol_rel and not mismatches
        detail = {
            "constants": {f"[{a},{b}]": {k: _fmt(v) for k, v in e.items()} for (a, b), e in table.nonzero().items()},
        }
        if mismatches:
            detail["mismatches"] = mismatches
        if self.cls.fit_note:
            detail["note"] = self.cls.fit_note
        self.claim("commutator", "structure constants", "pass" if ok else "fail",
                   ResidualResult(ok, worst, table_count(self.sampler), None), detail)
        jac = table.jacobi_residual()
        jok = jac <= 1e-9
        self.claim("commutator", "Jacobi identity", "pass" if jok else "fail",
                   ResidualResult(jok, jac, table_count(self.sampler), None))

    # potentials ---------------------------------------------------------------
    def combination(self, fam):
        coeffs = [c for _, c in fam.combination]
        xi = combine(coeffs, [self.fields[n] for n, _ in fam.combination])
        psi = add([mul([c, self.psis[n]]) for n, c in fam.combination])
        return xi, simplify_basic(psi)

    def potentials(self):
        from ..expr import ParseContext, parse

        for fam in self.cls.potentials:
            xi, psi = self.combination(fam)
            for index, body_text in enumerate(POTENTIAL_BODIES, start=1):
                body = parse(body_text, ParseContext())
                subject = f"{fam.name}[{index}]"
                V = instantiate(fam.printed, {"V": body})
                r = self.zero(kg_symmetry_residual(self.g, xi, psi, V, self.rules))
                detail = {"body": body_text, "printed": fam.printed_text}
                used = V
                if fam.amendment is None:
                    status = "pass" if r.passed else "fail"
                    disc = None
                    if not r.passed:
                        disc = self.discrepancy("kg-potential", fam.name, fam.printed_text, None,
                                                "printed family fails the reduced symmetry condition",
                                                self.evidence(r, {"body": body_text}), "unresolved")
                    result = r
                else:
                    a = fam.amendment
                    used = instantiate(fam.corrected, {"V": body})
                    rc = self.zero(kg_symmetry_residual(self.g, xi, psi, used, self.rules))
                    disc = self.discrepancy("kg-potential", fam.name, a.printed, a.corrected, a.note,
                                            self.evidence(r, {"body": body_text}))
                    detail["corrected"] = a.corrected
                    status = "amended-pass" if rc.passed else "fail"
                    result = rc
                self.claim("kg-potential", subject, status, result, detail, disc)
                if self.noether and result.passed:
                    self.noether_checks(subject, xi, psi, used)

    def noether_checks(self, subject, xi, psi, V):
        g = self.g
        cand = lift_to_point_symmetry(xi, psi)
        A = noether_gauge(g, psi)
        jets1 = {n: JET_BOX for n in first_jet_names(COORDS)}
        s1 = Sampler.box({**self.bounds, **jets1}, seed=self.seed, count=NOETHER_POINTS, exclusions=self.cls.exclusions)
        r = self.zero(noether_condition_residual(g, V, cand, A), s1)
        self.claim("noether-condition", subject, "pass" if r.passed else "fail", r)
        current = noether_current(g, V, cand, A, form="conserved")
        jets2 = {n: JET_BOX for n in second_jet_names(COORDS) if n != "Psi_uv"}
        s2 = Sampler.box({**self.bounds, **jets1, **jets2}, seed=self.seed, count=NOETHER_POINTS,
                         exclusions=self.cls.exclusions)
        r2 = self.zero(onshell_divergence_residual(g, V, current), s2)
        self.claim("noether-divergence", subject, "pass" if r2.passed else "fail", r2)

    # counts ----------------------------------------------------------------------
    def wave_counts(self):
        count = 0
        for gen in self.cls.generators:
            kind = self.kinds[gen.name]
            if not kind.is_conformal:
                continue
            if kind is ConformalKind.KILLING or self.zero(laplace_beltrami(self.g, self.psis[gen.name])).passed:
                count += 1
        self.report.wave_count = count
        detail = {"derived": count, "printed": self.cls.wave_count_printed}
        if count == self.cls.wave_count_printed:
            self.claim("wave-count", "wave symmetries", "pass", None, detail, count=0)
            return
        disc = None
        status = "fail"
        if self.cls.wave_count_amendment is not None and self.cls.wave_count_corrected == count:
            a = self.cls.wave_count_amendment
            disc = self.discrepancy("wave-count", "wave symmetries", a.printed, a.corrected, a.note, {"derived": count})
            status = "amended-pass"
        else:
            disc = self.discrepancy("wave-count", "wave symmetries", str(self.cls.wave_count_printed), str(count),
                                    "derived count differs", {"derived": count}, "unresolved")
        self.claim("wave-count", "wave symmetries", status, None, detail, disc)

    def vacuum(self):
        verdict = vacuum_check(self.cls.H, self.sampler, self.tol, self.rules)
        self.claim("vacuum", "Ricci-flat transverse profile", "pass", None,
                   {"vacuum": verdict, "informational": True})

    def run(self) -> ClassReport:
        self.generators()
        self.commutators()
        self.potentials()
        self.wave_counts()
        self.vacuum()
        return self.report


def table_count(sampler: Sampler) -> int:
    return max(sampler.count, 8)


def _fmt(v) -> str:
    return str(v) if isinstance(v, Fraction) else repr(float(v))


def vacuum_check(H, sampler: Sampler | None = None, tol: Tolerance = Tolerance(), rules=()) -> bool:
    """True when the transverse flat Laplacian of ``H`` vanishes."""
    lap = flat_transverse_laplacian(as_expr(H))
    if rules:
        lap = simplify_basic(apply_rewrites(lap, rules))
    if sampler is None:
        sampler = Sampler.box({"u": (0.5, 2.0), "v": (-1.0, 1.0), "y": (0.5, 2.0), "z": (0.5, 2.0)})
    return not isinstance(is_zero(lap, sampler, tol), NonZero)


def verify_class(cid: str, seed: int = 42, tol: Tolerance = Tolerance(), count: int = 32, noether: bool = True,
                 params: dict | None = None) -> ClassReport:
    cls = get_class(cid, params)
    return _Checker(cls, seed, tol, count, noether).run()
