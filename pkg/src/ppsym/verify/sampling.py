"""Seeded sampling and the scaled-residual test behind every "= 0" claim."""
from __future__ import annotations

import zlib
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from ..expr.evaluate import Environment, EvaluationError, evaluate, evaluate_terms
from ..expr.nodes import Expr, jet_keys

DEFAULT_SEED = 42
DEFAULT_COUNT = 32
JET_RANGE = (0.5, 1.5)


@dataclass(frozen=True)
class Tolerance:
    tol_abs: float = 1e-12
    tol_rel: float = 1e-9

    def __post_init__(self):
        if not (self.tol_abs > 0 and self.tol_rel > 0):
            raise ValueError("tolerances must be positive")

    @property
    def floor(self) -> float:
        return self.tol_abs / self.tol_rel


@dataclass(frozen=True)
class Exclusion:
    """Keep only points where ``|expr| > threshold``."""

    expr: Expr
    threshold: float


@dataclass(frozen=True)
class Sampler:
    """Deterministic point generator over a box.

    ``intervals`` is a tuple of ``(name, lo, hi)``. Values of uninstantiated
    function jets are drawn per ``(function, multi-index)`` from a stream keyed
    by the seed and the jet name, so they do not depend on traversal order.
    """

    intervals: tuple
    seed: int = DEFAULT_SEED
    count: int = DEFAULT_COUNT
    exclusions: tuple = ()
    parameters: tuple = ()

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("sample count must be positive")

    @classmethod
    def box(cls, bounds: dict, seed=DEFAULT_SEED, count=DEFAULT_COUNT, exclusions=(), parameters=None):
        intervals = tuple((k, float(lo), float(hi)) for k, (lo, hi) in bounds.items())
        params = tuple(sorted((k, float(v)) for k, v in (parameters or {}).items()))
        return cls(intervals, seed, count, tuple(exclusions), params)

    def with_count(self, count: int) -> "Sampler":
        return replace(self, count=count)

    def with_seed(self, seed: int) -> "Sampler":
        return replace(self, seed=seed)

    def with_intervals(self, bounds: dict) -> "Sampler":
        merged = {k: (lo, hi) for k, lo, hi in self.intervals}
        merged.update({k: (float(lo), float(hi)) for k, (lo, hi) in bounds.items()})
        return replace(self, intervals=tuple((k, lo, hi) for k, (lo, hi) in merged.items()))

    @property
    def names(self) -> tuple:
        return tuple(k for k, _, _ in self.intervals)

    def points(self) -> dict:
        rng = np.random.default_rng(self.seed)
        lo = np.array([a for _, a, _ in self.intervals])
        hi = np.array([b for _, _, b in self.intervals])
        kept = []
        need = self.count
        for _ in range(1000):
            batch = rng.uniform(lo, hi, size=(max(need, 8) * 2, len(lo)))
            if self.exclusions:
                env = Environment(
                    coordinates={n: batch[:, i] for i, n in enumerate(self.names)},
                    parameters=dict(self.parameters),
                )
                mask = np.ones(len(batch), dtype=bool)
                for ex in self.exclusions:
                    vals = np.broadcast_to(evaluate(ex.expr, env), mask.shape)
                    mask &= np.abs(vals) > ex.threshold
                batch = batch[mask]
            kept.extend(batch[:need])
            need = self.count - len(kept)
            if need <= 0:
                break
        else:
            raise ValueError("exclusion predicates reject the whole sampling box")
        arr = np.array(kept[: self.count])
        return {n: arr[:, i].copy() for i, n in enumerate(self.names)}

    def jets(self, keys) -> dict:
        out = {}
        for name, index in sorted(keys):
            tag = f"{name}{list(index)}".encode()
            rng = np.random.default_rng([self.seed, zlib.crc32(tag)])
            out[(name, index)] = rng.uniform(*JET_RANGE, size=self.count)
        return out

    def environment(self, e: Expr, functions=None) -> Environment:
        return Environment(
            coordinates=self.points(),
            parameters=dict(self.parameters),
            functions=functions or {},
            jets=self.jets(k for k in jet_keys(e) if not functions or k[0] not in functions),
        )


@dataclass
class ResidualResult:
    passed: bool
    max_scaled: float
    count: int
    witness: dict | None = None

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"


def _fmt_key(key) -> str:
    name, index = key
    return f"{name}'{list(index)}" if any(index) else name


def scaled_residuals(e: Expr, env: Environment, tol: Tolerance):
    terms = evaluate_terms(e, env)
    n = max(np.size(t) for t in terms)
    stacked = np.vstack([np.broadcast_to(np.asarray(t, dtype=float), (n,)) for t in terms])
    total = stacked[0].copy()
    for row in stacked[1:]:
        total = total + row
    scale = np.max(np.abs(stacked), axis=0)
    scaled = np.abs(total) / (tol.floor + scale)
    return total, scaled


def residual_check(e: Expr, sampler: Sampler, tol: Tolerance = Tolerance(), functions=None) -> ResidualResult:
    """Scaled residual ``|sum| / (tol_abs/tol_rel + max|term|)`` at every sample.

    Passes iff the maximum over samples is at most ``tol_rel``.
    """
    env = sampler.environment(e, functions)
    total, scaled = scaled_residuals(e, env, tol)
    total = np.broadcast_to(total, (sampler.count,))
    scaled = np.broadcast_to(scaled, (sampler.count,))
    worst = int(np.argmax(scaled))
    max_scaled = float(scaled[worst])
    passed = max_scaled <= tol.tol_rel
    witness = None
    if not passed:
        point = {k: float(v[worst]) for k, v in env.coordinates.items()}
        jets = {_fmt_key(k): float(np.broadcast_to(v, (sampler.count,))[worst]) for k, v in env.jets.items()}
        witness = {
            "point": point,
            "jets": jets,
            "value": float(total[worst]),
            "scaled": max_scaled,
            "index": worst,
        }
    return ResidualResult(passed, max_scaled, sampler.count, witness)


def zero_residual(e: Expr, sampler: Sampler, tol: Tolerance = Tolerance(), functions=None) -> ResidualResult:
    """Like :func:`residual_check` but short-circuits on a literal zero."""
    from ..expr.simplify import simplify_basic
    from ..expr.nodes import is_zero_literal

    s = simplify_basic(e)
    if is_zero_literal(s):
        return ResidualResult(True, 0.0, sampler.count)
    return residual_check(s, sampler, tol, functions)


def reevaluate_witness(e: Expr, witness: dict, parameters=None, functions=None) -> float:
    """Re-evaluate ``e`` at a stored witness point (length-1 arrays)."""
    coords = {k: np.array([v]) for k, v in witness["point"].items()}
    jets = {}
    for label, value in witness["jets"].items():
        if "'" in label:
            name, idx = label.split("'")
            index = tuple(int(x) for x in idx.strip("[]").split(","))
        else:
            name, index = label, None
        jets[(name, index)] = np.array([value])
    keyed = {}
    for name, index in jet_keys(e):
        lookup = (name, index if any(index) else None)
        if lookup in jets:
            keyed[(name, index)] = jets[lookup]
    env = Environment(coordinates=coords, parameters=dict(parameters or {}), functions=functions or {}, jets=keyed)
    total, _ = scaled_residuals(e, env, Tolerance())
    return float(np.asarray(total)[0])


def to_fraction_text(value) -> str:
    return str(Fraction(value))


__all__ = [
    "DEFAULT_COUNT",
    "DEFAULT_SEED",
    "EvaluationError",
    "Exclusion",
    "ResidualResult",
    "Sampler",
    "Tolerance",
    "reevaluate_witness",
    "residual_check",
    "scaled_residuals",
    "zero_residual",
]
