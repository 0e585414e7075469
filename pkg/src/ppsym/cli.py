"""Command-line front end.

Commands: verify, classify, kg-check, commutators, export-catalog.
Exit codes: 0 all pass, 1 a claim failed or was amended, 2 usage or parse
error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .expr import ExprError, ParseContext, free_symbols, parse, substitute, to_string
from .expr.evaluate import DomainError, NumericFailure
from .verify.sampling import Sampler, Tolerance

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

COMMANDS = ("verify", "classify", "kg-check", "commutators", "export-catalog")

# keys accepted in a config file, mapped to RunConfig attributes
CONFIG_KEYS = {
    "command": "command",
    "class": "classes",
    "all": "all",
    "seed": "seed",
    "samples": "samples",
    "tol-rel": "tol_rel",
    "tol-abs": "tol_abs",
    "json": "json",
    "noether": "noether",
    "accept-amended": "accept_amended",
    "param": "params",
    "H": "H",
    "xi": "xi",
    "psi": "psi",
    "V": "V",
    "workers": "workers",
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str = "verify"
    classes: list = field(default_factory=list)
    all: bool = False
    seed: int = 42
    samples: int = 32
    tol_rel: float = 1e-9
    tol_abs: float = 1e-12
    json: str | None = None  # "-" means stdout
    noether: bool = False
    accept_amended: bool = False
    params: dict = field(default_factory=dict)
    H: str | None = None
    xi: str | None = None
    psi: str | None = None
    V: str | None = None
    workers: int = 1

    @property
    def tol(self) -> Tolerance:
        return Tolerance(tol_abs=self.tol_abs, tol_rel=self.tol_rel)


def _truthy(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"expected a boolean, got {text!r}")


def _param(text: str) -> tuple:
    if "=" not in text:
        raise UsageError(f"parameter override must be name=value, got {text!r}")
    name, value = (s.strip() for s in text.split("=", 1))
    try:
        return name, Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"parameter {name} needs a rational value, got {value!r}") from None


def read_config(path: str) -> dict:
    """Plain ``key=value`` lines; ``#`` starts a comment; ``class`` and ``param`` may repeat."""
    out: dict = {}
    try:
        lines = open(path, encoding="utf-8").read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for n, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        attr = CONFIG_KEYS[key]
        if attr in ("classes",):
            out.setdefault(attr, []).append(value)
        elif attr == "params":
            name, val = _param(value)
            out.setdefault(attr, {})[name] = val
        else:
            out[attr] = value
    return out


def _coerce(cfg: RunConfig, attr: str, value):
    if attr in ("seed", "samples", "workers"):
        return int(value)
    if attr in ("tol_rel", "tol_abs"):
        return float(value)
    if attr in ("all", "noether", "accept_amended"):
        return value if isinstance(value, bool) else _truthy(value)
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ppsym", description="Verify pp-wave symmetry catalogs.")
    p.add_argument("command", nargs="?", choices=COMMANDS)
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--class", dest="classes", action="append", help="class id (repeatable)")
    p.add_argument("--all", action="store_true", default=None, help="every cataloged class")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int, help="sample points per check")
    p.add_argument("--tol-rel", type=float)
    p.add_argument("--tol-abs", type=float)
    p.add_argument("--json", nargs="?", const="-", help="write the JSON report (to PATH, or stdout)")
    p.add_argument("--noether", action="store_true", default=None, help="also run the Noether cross-checks")
    p.add_argument("--accept-amended", action="store_true", default=None, help="exit 0 when only amendments remain")
    p.add_argument("--param", dest="params", action="append", help="parameter override name=value")
    p.add_argument("--H", dest="H", help="profile H(u, y, z) for ad-hoc checks")
    p.add_argument("--xi", help="vector field [e_u, e_v, e_y, e_z]")
    p.add_argument("--psi", help="conformal factor (default: computed)")
    p.add_argument("--V", dest="V", help="potential V(u, v, y, z)")
    p.add_argument("--workers", type=int, help="processes for verify")
    return p


def make_config(argv) -> RunConfig:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:
            raise
        raise UsageError("invalid arguments") from None
    cfg = RunConfig()
    values = read_config(ns.config) if ns.config else {}
    # command-line flags win over the config file
    for attr in ("seed", "samples", "tol_rel", "tol_abs", "json", "noether", "accept_amended", "H", "xi", "psi",
                 "V", "all", "workers"):
        v = getattr(ns, attr)
        if v is not None:
            values[attr] = v
    if ns.command:
        values["command"] = ns.command
    if ns.classes:
        values["classes"] = list(ns.classes)
    if ns.params:
        values.setdefault("params", {}).update(dict(_param(t) for t in ns.params))
    for attr, v in values.items():
        try:
            setattr(cfg, attr, _coerce(cfg, attr, v))
        except ValueError as exc:
            raise UsageError(f"bad value for {attr}: {exc}") from None
    if cfg.command not in COMMANDS:
        raise UsageError(f"unknown command {cfg.command!r}")
    if cfg.samples <= 0 or cfg.tol_rel <= 0 or cfg.tol_abs <= 0:
        raise UsageError("samples and tolerances must be positive")
    return cfg


# ad-hoc expressions ------------------------------------------------------------


def _adhoc_params(cfg: RunConfig) -> dict:
    from .catalog import DEFAULTS

    params = {k: Fraction(v) for k, v in DEFAULTS.items()}
    params.update(cfg.params)
    return params


def _resolve(text: str, what: str, params: dict):
    from .expr import as_expr

    try:
        e = parse(text, ParseContext())
    except ExprError as exc:
        raise UsageError(f"cannot parse {what}: {exc}") from None
    e = substitute(e, {k: as_expr(v) for k, v in params.items()})
    loose = sorted(free_symbols(e) - {"u", "v", "y", "z"})
    if loose:
        raise UsageError(f"{what} uses unknown symbols {loose}; pass them with --param")
    return e


def _field(text: str, params: dict):
    from .expr import as_expr
    from .geometry import GeometryError, VectorField

    try:
        xi = VectorField.parse(text, ParseContext())
    except (GeometryError, ExprError) as exc:
        raise UsageError(f"cannot parse xi: {exc}") from None
    comps = tuple(substitute(c, {k: as_expr(v) for k, v in params.items()}) for c in xi)
    loose = sorted(set().union(*(free_symbols(c) for c in comps)) - {"u", "v", "y", "z"})
    if loose:
        raise UsageError(f"xi uses unknown symbols {loose}; pass them with --param")
    return VectorField(comps)


def _metric(cfg: RunConfig, params: dict):
    from .geometry import build_ppwave_metric

    if cfg.H is None:
        raise UsageError("this command needs --H")
    H = _resolve(cfg.H, "H", params)
    if "v" in free_symbols(H):
        raise UsageError("H must not depend on v")
    return build_ppwave_metric(H)


def _sampler(cfg: RunConfig, bounds=None) -> Sampler:
    from .catalog.classes import BOX

    box = {k: (float(a), float(b)) for k, (a, b) in BOX.items()}
    box.update(bounds or {})
    return Sampler.box(box, seed=cfg.seed, count=cfg.samples)


# commands -----------------------------------------------------------------------


def _emit_json(cfg: RunConfig, text: str, out) -> None:
    if cfg.json == "-":
        out.write(text + "\n")
    else:
        with open(cfg.json, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _verdict_code(summary: dict, accept_amended: bool) -> int:
    if summary["fail"]:
        return EXIT_FAIL
    if summary["amended"] and not accept_amended:
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify(cfg: RunConfig, out=sys.stdout) -> int:
    from .catalog import CLASS_IDS, CatalogError, canonical_id
    from .verify.suite import run_suite

    if cfg.all:
        ids = list(CLASS_IDS)
    elif cfg.classes:
        ids = cfg.classes
    else:
        raise UsageError("verify needs --class ID or --all")
    for cid in ids:
        canonical_id(cid)  # rejects unknown ids before any work starts
    try:
        report = run_suite(ids, seed=cfg.seed, tol=cfg.tol, count=cfg.samples, noether=cfg.noether,
                           params=cfg.params or None, workers=cfg.workers)
    except CatalogError as exc:
        raise UsageError(str(exc)) from None
    if cfg.json == "-":
        _emit_json(cfg, report.to_json(), out)
    else:
        out.write(report.to_text() + "\n")
        if cfg.json:
            _emit_json(cfg, report.to_json(), out)
    return _verdict_code(report.summary, cfg.accept_amended)


def cmd_classify(cfg: RunConfig, out=sys.stdout) -> int:
    from .symmetry import ConformalKind, classify_conformal

    params = _adhoc_params(cfg)
    g = _metric(cfg, params)
    if cfg.xi is None:
        raise UsageError("classify needs --xi")
    xi = _field(cfg.xi, params)
    verdict = classify_conformal(g, xi, _sampler(cfg), cfg.tol)
    doc = {
        "verdict": verdict.kind.value,
        "psi": to_string(verdict.psi),
        "max_residual": verdict.max_residual,
        "component_residuals": verdict.component_residuals,
        "witness": verdict.witness,
    }
    if cfg.json:
        _emit_json(cfg, json.dumps(doc, indent=2, sort_keys=True), out)
    if cfg.json != "-":
        out.write(f"verdict: {doc['verdict']}\npsi: {doc['psi']}\nmax residual: {verdict.max_residual:.3g}\n")
    return EXIT_OK if verdict.kind is not ConformalKind.NONE else EXIT_FAIL


def cmd_kg_check(cfg: RunConfig, out=sys.stdout) -> int:
    from .expr import ZERO
    from .symmetry import (
        conformal_factor,
        kg_symmetry_residual,
        lift_to_point_symmetry,
        noether_condition_residual,
        noether_current,
        noether_gauge,
        onshell_divergence_residual,
    )
    from .symmetry.noether import first_jet_names, second_jet_names
    from .verify.sampling import zero_residual

    params = _adhoc_params(cfg)
    g = _metric(cfg, params)
    if cfg.xi is None or cfg.V is None:
        raise UsageError("kg-check needs --xi and --V")
    xi = _field(cfg.xi, params)
    V = _resolve(cfg.V, "V", params)
    psi = _resolve(cfg.psi, "psi", params) if cfg.psi is not None else conformal_factor(g, xi)
    sampler = _sampler(cfg)
    checks = {"kg": zero_residual(kg_symmetry_residual(g, xi, psi, V), sampler, cfg.tol)}
    if cfg.noether:
        cand = lift_to_point_symmetry(xi, psi)
        A = noether_gauge(g, psi)
        jet = {n: (-1.0, 1.0) for n in first_jet_names(g.coords)}
        s1 = _sampler(cfg, jet).with_count(64)
        checks["noether-condition"] = zero_residual(noether_condition_residual(g, V, cand, A), s1, cfg.tol)
        jet2 = {n: (-1.0, 1.0) for n in second_jet_names(g.coords) if n != "Psi_uv"}
        s2 = _sampler(cfg, {**jet, **jet2}).with_count(64)
        current = noether_current(g, V, cand, A)
        checks["noether-divergence"] = zero_residual(onshell_divergence_residual(g, V, current), s2, cfg.tol)
    doc = {
        "psi": to_string(psi if psi is not None else ZERO),
        "checks": {k: {"status": r.status, "max_residual": r.max_scaled, "witness": r.witness}
                   for k, r in checks.items()},
    }
    if cfg.json:
        _emit_json(cfg, json.dumps(doc, indent=2, sort_keys=True), out)
    if cfg.json != "-":
        out.write(f"psi: {doc['psi']}\n")
        for k, r in checks.items():
            line = f"{k}: {r.status.upper()} residual={r.max_scaled:.3g}"
            if r.witness is not None:
                line += f" value={r.witness['value']:.6g}"
            out.write(line + "\n")
    return EXIT_OK if all(r.passed for r in checks.values()) else EXIT_FAIL


def cmd_commutators(cfg: RunConfig, out=sys.stdout) -> int:
    from .catalog import canonical_id, verify_class
    from .verify.report import render_json, render_text, summarize

    if len(cfg.classes) != 1:
        raise UsageError("commutators needs exactly one --class")
    cid = canonical_id(cfg.classes[0])
    rep = verify_class(cid, seed=cfg.seed, tol=cfg.tol, count=cfg.samples, noether=False,
                       params=cfg.params or None)
    claims = [c for c in rep.claims if c.kind == "commutator"]
    keys = {c.discrepancy for c in claims if c.discrepancy}
    discs = [d for d in rep.discrepancies if f"{d.class_id}:{d.claim}:{d.subject}" in keys]
    if cfg.json == "-":
        _emit_json(cfg, render_json(cfg.seed, {"tol_abs": cfg.tol_abs, "tol_rel": cfg.tol_rel}, claims, discs), out)
    else:
        out.write(render_text(claims, discs) + "\n")
        if rep.structure is not None:
            out.write("\nfitted structure constants:\n")
            for (a, b), entries in rep.structure.nonzero().items():
                terms = " + ".join(f"({v}) {k}" for k, v in entries.items())
                out.write(f"  [{a},{b}] = {terms}\n")
        for note in rep.notes:
            out.write(f"note: {note}\n")
        if cfg.json:
            _emit_json(cfg, render_json(cfg.seed, {"tol_abs": cfg.tol_abs, "tol_rel": cfg.tol_rel}, claims, discs), out)
    return _verdict_code(summarize(claims), cfg.accept_amended)


def export_catalog(params: dict | None = None) -> dict:
    """Every class with its H, generators, expected brackets and potential families."""
    from .catalog import CLASS_IDS, get_class

    def amend(a):
        return None if a is None else {"printed": a.printed, "corrected": a.corrected, "note": a.note}

    def terms(pairs):
        return {name: to_string(c) for name, c in pairs}

    classes = []
    for cid in CLASS_IDS:
        cls = get_class(cid, params)
        classes.append({
            "id": cls.id,
            "title": cls.title,
            "H": cls.H_text,
            "params": {k: str(v) if isinstance(v, Fraction) else to_string(v) for k, v in sorted(cls.params.items())},
            "generators": [
                {
                    "name": gen.name,
                    "expected": gen.expected.value,
                    "field": gen.printed_field.to_text(),
                    "corrected_field": gen.corrected_field.to_text() if gen.corrected_field is not None else None,
                    "psi": gen.psi_printed_text,
                    "corrected_psi": to_string(gen.corrected_psi) if gen.corrected_psi is not None else None,
                    "amendments": [a for a in (amend(gen.field_amendment), amend(gen.psi_amendment)) if a],
                }
                for gen in cls.generators
            ],
            "commutators": [
                {
                    "left": c.left,
                    "right": c.right,
                    "printed": c.printed_text,
                    "value": terms(c.value),
                    "amendment": amend(c.amendment),
                }
                for c in cls.commutators
            ],
            "potentials": [
                {
                    "name": p.name,
                    "combination": terms(p.combination),
                    "printed": p.printed_text,
                    "corrected": to_string(p.corrected) if p.corrected is not None else None,
                    "amendment": amend(p.amendment),
                }
                for p in cls.potentials
            ],
            "constraints_amendment": amend(cls.rules_amendment),
            "wave_count": {"printed": cls.wave_count_printed, "corrected": cls.wave_count_corrected},
        })
    return {"schema_version": 1, "classes": classes}


def cmd_export_catalog(cfg: RunConfig, out=sys.stdout) -> int:
    from .catalog import CatalogError

    try:
        doc = export_catalog(cfg.params or None)
    except CatalogError as exc:
        raise UsageError(str(exc)) from None
    text = json.dumps(doc, indent=2)
    if cfg.json and cfg.json != "-":
        _emit_json(cfg, text, out)
    else:
        out.write(text + "\n")
    return EXIT_OK


HANDLERS = {
    "verify": cmd_verify,
    "classify": cmd_classify,
    "kg-check": cmd_kg_check,
    "commutators": cmd_commutators,
    "export-catalog": cmd_export_catalog,
}


def main(argv=None, out=None, err=None) -> int:
    from .catalog import CatalogError

    out = out or sys.stdout
    err = err or sys.stderr
    try:
        cfg = make_config(sys.argv[1:] if argv is None else argv)
        return HANDLERS[cfg.command](cfg, out)
    except (UsageError, CatalogError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (DomainError, NumericFailure) as exc:
        err.write(f"numeric failure: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
