"""Run the catalog checks for many classes and assemble one report."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .report import render_json, render_text, sort_key, summarize
from .sampling import Tolerance


@dataclass
class SuiteReport:
    seed: int
    tol: Tolerance
    claims: list = field(default_factory=list)
    discrepancies: list = field(default_factory=list)
    classes: dict = field(default_factory=dict)  # id -> ClassReport

    @property
    def summary(self) -> dict:
        return summarize(self.claims)

    @property
    def ok(self) -> bool:
        return self.summary["fail"] == 0

    @property
    def clean(self) -> bool:
        """No failures and no amendments."""
        s = self.summary
        return s["fail"] == 0 and s["amended"] == 0

    def tolerances(self) -> dict:
        return {"tol_abs": self.tol.tol_abs, "tol_rel": self.tol.tol_rel}

    def to_json(self) -> str:
        return render_json(self.seed, self.tolerances(), self.claims, self.discrepancies)

    def to_text(self) -> str:
        return render_text(self.claims, self.discrepancies)


def _one(args):
    from ..catalog import verify_class

    cid, seed, tol, count, noether, params = args
    return verify_class(cid, seed=seed, tol=tol, count=count, noether=noether, params=params)


def run_suite(
    ids,
    seed: int = 42,
    tol: Tolerance = Tolerance(),
    count: int = 32,
    noether: bool = True,
    params: dict | None = None,
    workers: int = 1,
) -> SuiteReport:
    """Verify every class in ``ids``; claims come back ordered by (class, kind, subject).

    Class order follows the catalog, not the order of ``ids`` or of completion,
    so the report is the same however the work is split across ``workers``.
    """
    from ..catalog import CLASS_IDS, canonical_id

    ids = [canonical_id(i) for i in ids]
    ids = list(dict.fromkeys(ids))
    jobs = [(cid, seed, tol, count, noether, params) for cid in ids]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_one, jobs))
    else:
        results = [_one(j) for j in jobs]

    order = {cid: i for i, cid in enumerate(CLASS_IDS)}
    report = SuiteReport(seed, tol)
    for cid, rep in sorted(zip(ids, results), key=lambda pair: order.get(pair[0], len(order))):
        report.classes[cid] = rep
        report.claims.extend(rep.claims)
        report.discrepancies.extend(rep.discrepancies)
    report.claims.sort(key=sort_key(order))
    report.discrepancies.sort(key=lambda d: (order.get(d.class_id, len(order)), d.claim, d.subject))
    return report
