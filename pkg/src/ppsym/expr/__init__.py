"""Symbolic expression core."""
from .calculus import differentiate, differentiate_multi, formal_args, gradient, instantiate, substitute
from .evaluate import (
    DomainError,
    Environment,
    EvaluationError,
    NumericFailure,
    UnresolvedSymbol,
    evaluate,
    evaluate_terms,
)
from .nodes import (
    HALF,
    MINUS_ONE,
    ONE,
    ZERO,
    Add,
    Apply,
    ArityError,
    Builtin,
    DerivApply,
    Expr,
    ExprError,
    FunctionSymbol,
    Mul,
    Num,
    Pow,
    Real,
    Symbol,
    add,
    apply,
    arctan,
    arctan2,
    as_expr,
    builtin,
    cos,
    deriv_apply,
    exp,
    free_symbols,
    function_symbols,
    is_zero_literal,
    ln,
    mul,
    neg,
    pow_,
    rational,
    sin,
    sqrt,
    sym,
    symbols,
    tan,
)
from .parser import ParseContext, ParseError, UnknownIdentifier, parse
from .printer import to_string
from .rewrite import RewriteLimitError, RewriteRule, apply_rewrites
from .simplify import expand, simplify_basic
from .zero import NonZero, NumericZero, SymbolicZero, is_zero
