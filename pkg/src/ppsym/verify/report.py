"""Claim records and the JSON report shared by the suite and the CLI."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

SCHEMA_VERSION = 1

CLAIM_KINDS = (
    "conformal-class",
    "conformal-factor",
    "commutator",
    "kg-potential",
    "noether-condition",
    "noether-divergence",
    "wave-psi",
    "wave-count",
    "vacuum",
)

STATUSES = ("pass", "fail", "amended-pass")


@dataclass
class ClaimReport:
    class_id: str
    kind: str
    subject: str
    status: str
    max_residual: float = 0.0
    witness: dict | None = None
    seed: int = 42
    count: int = 0
    detail: dict = field(default_factory=dict)
    discrepancy: str | None = None  # key of the linked Discrepancy

    def __post_init__(self):
        if self.kind not in CLAIM_KINDS:
            raise ValueError(f"unknown claim kind {self.kind!r}")
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_dict(self) -> dict:
        return {
            "class_id": self.class_id,
            "kind": self.kind,
            "subject": self.subject,
            "status": self.status,
            "max_residual": _clean(self.max_residual),
            "witness": _clean(self.witness),
            "seed": self.seed,
            "count": self.count,
            "detail": _clean(self.detail),
            "discrepancy": self.discrepancy,
        }


def _clean(obj):
    """Make floats JSON-safe and key order stable."""
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            return repr(obj)
        return obj
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def summarize(claims) -> dict:
    out = {"pass": 0, "fail": 0, "amended": 0}
    for c in claims:
        if c.status == "pass":
            out["pass"] += 1
        elif c.status == "fail":
            out["fail"] += 1
        else:
            out["amended"] += 1
    return out


def sort_key(order: dict):
    kinds = {k: i for i, k in enumerate(CLAIM_KINDS)}

    def key(c: ClaimReport):
        return (order.get(c.class_id, len(order)), c.class_id, kinds[c.kind], c.subject)

    return key


def render_json(seed: int, tolerances: dict, claims, discrepancies) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "tolerances": tolerances,
        "claims": [c.to_dict() for c in claims],
        "summary": summarize(claims),
        "discrepancies": [_clean(d.to_dict()) for d in discrepancies],
    }
    return json.dumps(doc, indent=2, sort_keys=False)


def render_text(claims, discrepancies=()) -> str:
    lines = []
    for c in claims:
        mark = {"pass": "PASS", "fail": "FAIL", "amended-pass": "AMND"}[c.status]
        lines.append(f"{mark}  {c.class_id:<13} {c.kind:<19} {c.subject:<28} residual={c.max_residual:.3g}")
    s = summarize(claims)
    lines.append(f"summary: {s['pass']} pass, {s['amended']} amended, {s['fail']} fail")
    if discrepancies:
        lines.append("")
        lines.append("discrepancies:")
        for d in discrepancies:
            corrected = d.corrected if d.corrected is not None else "(none found)"
            lines.append(f"  [{d.class_id}] {d.subject}: {d.printed}  ->  {corrected}")
    return "\n".join(lines)
