"""Data model for catalog entries and their documented amendments."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..expr import Expr, FunctionSymbol, ParseContext, RewriteRule, as_expr, parse, substitute, sym
from ..expr.nodes import mul, pow_
from ..geometry import (
    COORDS,
    VectorField,
    d_r,
    d_sprime,
    d_theta,
    d_tprime,
    r_dr,
)
from ..symmetry import ConformalKind

V3 = FunctionSymbol("V", 3)

# Bodies used to instantiate the arbitrary outer function of a potential family.
POTENTIAL_BODIES = ("x1 + x2*x3", "sin(x1) + x2^2", "exp(sin(x3))*x1")


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class Amendment:
    """A printed formula replaced by a derived one."""

    printed: str
    corrected: str
    note: str


@dataclass(frozen=True)
class Generator:
    name: str
    printed_field: VectorField
    expected: ConformalKind
    printed_psi: Expr | None = None
    psi_printed_text: str | None = None
    field_amendment: Amendment | None = None
    corrected_field: VectorField | None = None
    psi_amendment: Amendment | None = None
    corrected_psi: Expr | None = None

    @property
    def field(self) -> VectorField:
        return self.corrected_field if self.corrected_field is not None else self.printed_field

    @property
    def psi(self) -> Expr | None:
        return self.corrected_psi if self.corrected_psi is not None else self.printed_psi


@dataclass(frozen=True)
class PotentialFamily:
    """``V`` for which ``sum_g coeff_g * Y_g`` is a point symmetry."""

    name: str
    combination: tuple  # ((generator name, coefficient Expr), ...)
    printed: Expr
    printed_text: str
    amendment: Amendment | None = None
    corrected: Expr | None = None
    rules: tuple = ()

    @property
    def potential(self) -> Expr:
        return self.corrected if self.corrected is not None else self.printed


@dataclass(frozen=True)
class CommutatorEntry:
    """Expected ``[A, B] = sum coeff * C``; an empty mapping means zero."""

    left: str
    right: str
    printed: tuple  # ((name, Expr), ...)
    printed_text: str
    amendment: Amendment | None = None
    corrected: tuple | None = None

    @property
    def value(self) -> tuple:
        return self.corrected if self.corrected is not None else self.printed


@dataclass(frozen=True)
class Discrepancy:
    class_id: str
    claim: str
    subject: str
    printed: str
    corrected: str | None
    note: str
    evidence: dict | None = None
    status: str = "amended"

    def to_dict(self) -> dict:
        return {
            "class_id": self.class_id,
            "claim": self.claim,
            "subject": self.subject,
            "printed": self.printed,
            "corrected": self.corrected,
            "note": self.note,
            "evidence": self.evidence,
            "status": self.status,
        }


@dataclass
class PPWaveClass:
    id: str
    title: str
    H: Expr
    H_text: str
    params: dict
    box: dict
    generators: list
    exclusions: tuple = ()
    rules: tuple = ()
    printed_rules: tuple | None = None  # differential constraints as printed, when they were amended
    rules_amendment: Amendment | None = None
    potentials: list = field(default_factory=list)
    commutators: list = field(default_factory=list)
    unlisted_pairs: frozenset = frozenset()
    closure_pairs: frozenset = frozenset()  # brackets only required to be Killing
    wave_count_printed: int = 0
    wave_count_amendment: Amendment | None = None
    wave_count_corrected: int | None = None
    vacuum_expected: bool | None = None
    fit_functions: dict | None = None  # closed-form profile bodies used for the least-squares fit
    fit_note: str = ""

    @property
    def wave_counts(self) -> int:
        return self.wave_count_corrected if self.wave_count_corrected is not None else self.wave_count_printed

    def generator(self, name: str) -> Generator:
        for g in self.generators:
            if g.name == name:
                return g
        raise CatalogError(f"class {self.id} has no generator {name!r}")

    @property
    def names(self) -> tuple:
        return tuple(g.name for g in self.generators)


class Builder:
    """Parses catalog formulas with class parameters substituted as exact values."""

    def __init__(self, params: dict, extra: dict | None = None):
        self.params = {k: as_expr(v) for k, v in params.items()}
        self.extra = dict(extra or {})

    def expr(self, text: str) -> Expr:
        e = parse(text, ParseContext())
        # abbreviations such as tp = eta*y + sigma*z may mention parameters
        if self.extra:
            e = substitute(e, self.extra)
        return substitute(e, self.params)

    def field(self, **parts) -> VectorField:
        """Vector field from chart directions and polar / rotated shorthands.

        Keys: u, v, y, z, theta (d_theta), rdr (r d_r), dr (d_r), tp (d_t'),
        sp (d_s').
        """
        out = VectorField((0, 0, 0, 0))
        for key, text in parts.items():
            coeff = self.expr(text) if isinstance(text, str) else as_expr(text)
            if key in COORDS:
                comps = [0, 0, 0, 0]
                comps[COORDS.index(key)] = 1
                base = VectorField(tuple(comps))
            elif key == "theta":
                base = d_theta()
            elif key == "rdr":
                base = r_dr()
            elif key == "dr":
                base = d_r()
            elif key == "tp":
                base = d_tprime(self.params["eta"], self.params["sigma"])
            elif key == "sp":
                base = d_sprime(self.params["eta"], self.params["sigma"])
            else:
                raise CatalogError(f"unknown field direction {key!r}")
            out = out + base.scale(coeff)
        return out

    def terms(self, mapping: dict) -> tuple:
        return tuple((name, self.expr(text) if isinstance(text, str) else as_expr(text)) for name, text in mapping.items())


def fraction_params(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        out[k] = v if isinstance(v, Fraction) else Fraction(v)
    return out
