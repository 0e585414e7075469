"""Sampling, tolerances and claim reports."""
from .sampling import Exclusion, ResidualResult, Sampler, Tolerance, residual_check, zero_residual
from .report import CLAIM_KINDS, SCHEMA_VERSION, STATUSES, ClaimReport, render_json, render_text, summarize


def __getattr__(name):
    # the suite imports the catalog, which itself imports this package
    if name in ("run_suite", "SuiteReport"):
        from . import suite

        return getattr(suite, name)
    raise AttributeError(name)
