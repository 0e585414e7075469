"""Immutable expression trees with canonicalizing constructors.

Every node is built through :func:`add`, :func:`mul`, :func:`pow_`,
:func:`apply`, :func:`deriv_apply` or :func:`builtin`, which flatten nested
sums/products, fold numeric constants, collect like terms and merge powers of
identical bases. Structural equality and hashing follow the canonical form.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

BUILTINS = ("sin", "cos", "tan", "exp", "ln", "sqrt", "arctan", "arctan2")
_BUILTIN_ARITY = {name: 1 for name in BUILTINS}
_BUILTIN_ARITY["arctan2"] = 2

# kind ranks give a total order used to sort Add/Mul children
_RANK_NUM, _RANK_REAL, _RANK_SYM, _RANK_BUILTIN, _RANK_APPLY, _RANK_DERIV = range(6)
_RANK_POW, _RANK_MUL, _RANK_ADD = 6, 7, 8


class ExprError(ValueError):
    pass


class ArityError(ExprError):
    pass


class FunctionSymbol:
    """An undetermined function of a fixed number of arguments."""

    __slots__ = ("name", "arity")

    def __init__(self, name: str, arity: int):
        if arity < 1:
            raise ArityError(f"function {name!r} needs positive arity")
        self.name = name
        self.arity = arity

    def __eq__(self, other):
        return (
            isinstance(other, FunctionSymbol)
            and self.name == other.name
            and self.arity == other.arity
        )

    def __hash__(self):
        return hash(("fn", self.name, self.arity))

    def __repr__(self):
        return f"FunctionSymbol({self.name!r}, {self.arity})"

    def __call__(self, *args):
        return apply(self, [as_expr(a) for a in args])


class Expr:
    __slots__ = ("_hash", "_key")

    def _init(self, key, children=()):
        self._key = key
        if children:
            self._hash = hash((key[0], key[1:-1], tuple(c._hash for c in children)))
        else:
            self._hash = hash(key)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Expr):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    @property
    def sort_key(self):
        return self._key

    @property
    def children(self) -> tuple:
        return ()

    def __add__(self, other):
        return add([self, as_expr(other)])

    def __radd__(self, other):
        return add([as_expr(other), self])

    def __sub__(self, other):
        return add([self, neg(as_expr(other))])

    def __rsub__(self, other):
        return add([as_expr(other), neg(self)])

    def __mul__(self, other):
        return mul([self, as_expr(other)])

    def __rmul__(self, other):
        return mul([as_expr(other), self])

    def __truediv__(self, other):
        return mul([self, pow_(as_expr(other), MINUS_ONE)])

    def __rtruediv__(self, other):
        return mul([as_expr(other), pow_(self, MINUS_ONE)])

    def __pow__(self, other):
        return pow_(self, as_expr(other))

    def __rpow__(self, other):
        return pow_(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __pos__(self):
        return self

    def __repr__(self):
        from .printer import to_string

        return f"Expr({to_string(self)!r})"

    def __str__(self):
        from .printer import to_string

        return to_string(self)


class Num(Expr):
    """Exact integer or rational constant (lowest terms, positive denominator)."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = Fraction(value)
        self._init((_RANK_NUM, self.value))

    @property
    def kind(self):
        return "IntegerConstant" if self.value.denominator == 1 else "RationalConstant"


class Real(Expr):
    __slots__ = ("value",)
    kind = "RealConstant"

    def __init__(self, value: float):
        self.value = float(value)
        self._init((_RANK_REAL, self.value))


class Symbol(Expr):
    __slots__ = ("name",)
    kind = "Symbol"

    def __init__(self, name: str):
        self.name = name
        self._init((_RANK_SYM, name))


class Add(Expr):
    __slots__ = ("terms",)
    kind = "Add"

    def __init__(self, terms: tuple):
        self.terms = terms
        self._init((_RANK_ADD, len(terms), tuple(t._key for t in terms)), terms)

    @property
    def children(self):
        return self.terms


class Mul(Expr):
    __slots__ = ("factors",)
    kind = "Mul"

    def __init__(self, factors: tuple):
        self.factors = factors
        self._init((_RANK_MUL, len(factors), tuple(f._key for f in factors)), factors)

    @property
    def children(self):
        return self.factors


class Pow(Expr):
    __slots__ = ("base", "exponent")
    kind = "Pow"

    def __init__(self, base: Expr, exponent: Expr):
        self.base = base
        self.exponent = exponent
        self._init((_RANK_POW, 2, (base._key, exponent._key)), (base, exponent))

    @property
    def children(self):
        return (self.base, self.exponent)


class Apply(Expr):
    __slots__ = ("fn", "args")
    kind = "Apply"

    def __init__(self, fn: FunctionSymbol, args: tuple):
        self.fn = fn
        self.args = args
        self._init((_RANK_APPLY, fn.name, fn.arity, tuple(a._key for a in args)), args)

    @property
    def children(self):
        return self.args


class DerivApply(Expr):
    """Partial derivative of ``fn`` of the given multi-index, applied to ``args``."""

    __slots__ = ("fn", "index", "args")
    kind = "DerivApply"

    def __init__(self, fn: FunctionSymbol, index: tuple, args: tuple):
        self.fn = fn
        self.index = index
        self.args = args
        self._init((_RANK_DERIV, fn.name, fn.arity, index, tuple(a._key for a in args)), args)

    @property
    def children(self):
        return self.args


class Builtin(Expr):
    __slots__ = ("name", "args")
    kind = "Builtin"

    def __init__(self, name: str, args: tuple):
        self.name = name
        self.args = args
        self._init((_RANK_BUILTIN, name, tuple(a._key for a in args)), args)

    @property
    def children(self):
        return self.args


ZERO = Num(0)
ONE = Num(1)
MINUS_ONE = Num(-1)
HALF = Num(Fraction(1, 2))


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not expressions")
    if isinstance(value, (int, Fraction)):
        return Num(value)
    if isinstance(value, float):
        return Real(value)
    if isinstance(value, str):
        return Symbol(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Expr")


def sym(name: str) -> Symbol:
    return Symbol(name)


def symbols(names: str) -> tuple:
    return tuple(Symbol(n) for n in names.replace(",", " ").split())


def is_number(e: Expr) -> bool:
    return isinstance(e, (Num, Real))


def is_zero_literal(e: Expr) -> bool:
    return (isinstance(e, Num) and e.value == 0) or (isinstance(e, Real) and e.value == 0.0)


def _num(value) -> Expr:
    if isinstance(value, float):
        return Real(value)
    return Num(value)


def _split_coeff(term: Expr):
    """term -> (numeric coefficient, core expression or None)."""
    if isinstance(term, Num):
        return term.value, None
    if isinstance(term, Real):
        return term.value, None
    if isinstance(term, Mul) and is_number(term.factors[0]):
        rest = term.factors[1:]
        core = rest[0] if len(rest) == 1 else Mul(rest)
        return term.factors[0].value, core
    return Fraction(1), term


def _mix(a, b, op):
    if isinstance(a, float) or isinstance(b, float):
        return op(float(a), float(b))
    return op(a, b)


def add(terms: Iterable[Expr]) -> Expr:
    flat = []
    for t in terms:
        if isinstance(t, Add):
            flat.extend(t.terms)
        else:
            flat.append(t)
    const = Fraction(0)
    collected: dict = {}
    for t in flat:
        c, core = _split_coeff(t)
        if core is None:
            const = _mix(const, c, lambda x, y: x + y)
            continue
        prev = collected.get(core)
        collected[core] = c if prev is None else _mix(prev, c, lambda x, y: x + y)
    out = []
    for core, c in collected.items():
        if c == 0:
            continue
        out.append(core if (c == 1 and not isinstance(c, float)) else _scale(c, core))
    if const != 0:
        out.append(_num(const))
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    out.sort(key=lambda e: e._key)
    return Add(tuple(out))


def _scale(c, core: Expr) -> Expr:
    factors = core.factors if isinstance(core, Mul) else (core,)
    return Mul((_num(c),) + tuple(factors))


def _split_power(f: Expr):
    if isinstance(f, Pow):
        return f.base, f.exponent
    return f, ONE


def mul(factors: Iterable[Expr]) -> Expr:
    flat = []
    stack = list(factors)
    stack.reverse()
    while stack:
        f = stack.pop()
        if isinstance(f, Mul):
            stack.extend(reversed(f.factors))
        else:
            flat.append(f)
    coeff = Fraction(1)
    powers: dict = {}
    exp_args = []
    for f in flat:
        if isinstance(f, (Num, Real)):
            coeff = _mix(coeff, f.value, lambda x, y: x * y)
            continue
        if isinstance(f, Builtin) and f.name == "exp":
            exp_args.append(f.args[0])
            continue
        base, e = _split_power(f)
        prev = powers.get(base)
        powers[base] = e if prev is None else add([prev, e])
    if coeff == 0:
        return ZERO
    rebuilt = []
    needs_pass = False
    for base, e in powers.items():
        p = pow_(base, e)
        if isinstance(p, (Num, Real, Mul)) or (isinstance(p, Builtin) and p.name == "exp"):
            needs_pass = True
        rebuilt.append(p)
    if exp_args:
        arg = add(exp_args)
        if not is_zero_literal(arg):
            rebuilt.append(Builtin("exp", (arg,)))
    if needs_pass:
        return mul([_num(coeff)] + rebuilt)
    rebuilt = [p for p in rebuilt if not (isinstance(p, Num) and p.value == 1)]
    rebuilt.sort(key=lambda e: e._key)
    if coeff != 1:
        rebuilt.insert(0, _num(coeff))
    if not rebuilt:
        return ONE
    if len(rebuilt) == 1:
        return rebuilt[0]
    return Mul(tuple(rebuilt))


def neg(e: Expr) -> Expr:
    return mul([MINUS_ONE, e])


def _exact_root(value: Fraction, root: int):
    """Exact ``root``-th root of a positive rational, or None."""
    def iroot(n):
        r = round(n ** (1.0 / root))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** root == n:
                return cand
        return None

    if value <= 0:
        return None
    p = iroot(value.numerator)
    q = iroot(value.denominator)
    if p is None or q is None:
        return None
    return Fraction(p, q)


def pow_(base: Expr, exponent: Expr) -> Expr:
    if is_zero_literal(exponent):
        return ONE
    if isinstance(exponent, Num) and exponent.value == 1:
        return base
    if isinstance(base, Num) and base.value == 1:
        return ONE
    if isinstance(base, (Num, Real)) and isinstance(exponent, (Num, Real)):
        b, e = base.value, exponent.value
        if isinstance(b, float) or isinstance(e, float):
            if b < 0 and float(e) != int(float(e)):
                return Pow(base, exponent)
            return Real(float(b) ** float(e))
        if b == 0:
            if e < 0:
                raise ZeroDivisionError("0 raised to a negative power")
            return ZERO
        if e.denominator == 1:
            return Num(b ** int(e))
        if b > 0:
            root = _exact_root(b, e.denominator)
            if root is not None:
                return Num(root ** e.numerator)
        return Pow(base, exponent)
    if is_zero_literal(base) and isinstance(exponent, Num) and exponent.value > 0:
        return ZERO
    int_exp = isinstance(exponent, Num) and exponent.value.denominator == 1
    if isinstance(base, Pow) and int_exp:
        return pow_(base.base, mul([base.exponent, exponent]))
    if isinstance(base, Mul) and int_exp:
        return mul([pow_(f, exponent) for f in base.factors])
    if isinstance(base, Builtin) and base.name == "exp" and is_number(exponent):
        return builtin("exp", [mul([base.args[0], exponent])])
    return Pow(base, exponent)


def apply(fn: FunctionSymbol, args: Sequence[Expr]) -> Expr:
    args = tuple(as_expr(a) for a in args)
    if len(args) != fn.arity:
        raise ArityError(f"{fn.name} expects {fn.arity} arguments, got {len(args)}")
    return Apply(fn, args)


def deriv_apply(fn: FunctionSymbol, index: Sequence[int], args: Sequence[Expr]) -> Expr:
    index = tuple(int(i) for i in index)
    args = tuple(as_expr(a) for a in args)
    if len(index) != fn.arity or len(args) != fn.arity:
        raise ArityError(f"{fn.name} expects {fn.arity} slots")
    if any(i < 0 for i in index):
        raise ExprError("negative derivative order")
    if not any(index):
        return Apply(fn, args)
    return DerivApply(fn, index, args)


def builtin(name: str, args: Sequence[Expr]) -> Expr:
    if name not in _BUILTIN_ARITY:
        raise ExprError(f"unknown builtin {name!r}")
    args = tuple(as_expr(a) for a in args)
    if len(args) != _BUILTIN_ARITY[name]:
        raise ArityError(f"{name} expects {_BUILTIN_ARITY[name]} arguments, got {len(args)}")
    if name == "sqrt":
        return pow_(args[0], HALF)
    a = args[0]
    if name == "exp":
        if is_zero_literal(a):
            return ONE
        if isinstance(a, Builtin) and a.name == "ln":
            return a.args[0]
    if name == "ln":
        if isinstance(a, Num) and a.value == 1:
            return ZERO
        if isinstance(a, Builtin) and a.name == "exp":
            return a.args[0]
    if name in ("sin", "tan", "arctan") and is_zero_literal(a):
        return ZERO
    if name == "cos" and is_zero_literal(a):
        return ONE
    return Builtin(name, args)


def sin(x):
    return builtin("sin", [x])


def cos(x):
    return builtin("cos", [x])


def tan(x):
    return builtin("tan", [x])


def exp(x):
    return builtin("exp", [x])


def ln(x):
    return builtin("ln", [x])


def sqrt(x):
    return builtin("sqrt", [x])


def arctan(x):
    return builtin("arctan", [x])


def arctan2(a, b):
    return builtin("arctan2", [a, b])


def rational(p, q=1) -> Num:
    return Num(Fraction(p, q))


def rebuild(e: Expr, children: Sequence[Expr]) -> Expr:
    """Rebuild a node of the same kind over new children, re-canonicalizing."""
    if isinstance(e, Add):
        return add(children)
    if isinstance(e, Mul):
        return mul(children)
    if isinstance(e, Pow):
        return pow_(children[0], children[1])
    if isinstance(e, Apply):
        return apply(e.fn, children)
    if isinstance(e, DerivApply):
        return deriv_apply(e.fn, e.index, children)
    if isinstance(e, Builtin):
        return builtin(e.name, children)
    return e


def free_symbols(e: Expr) -> set:
    out = set()
    stack = [e]
    seen = set()
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        if isinstance(n, Symbol):
            out.add(n.name)
        stack.extend(n.children)
    return out


def function_symbols(e: Expr) -> set:
    out = set()
    stack = [e]
    seen = set()
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        if isinstance(n, (Apply, DerivApply)):
            out.add(n.fn)
        stack.extend(n.children)
    return out


def jet_keys(e: Expr) -> set:
    """All (function name, multi-index) pairs occurring in ``e``."""
    out = set()
    stack = [e]
    seen = set()
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        if isinstance(n, Apply):
            out.add((n.fn.name, (0,) * n.fn.arity))
        elif isinstance(n, DerivApply):
            out.add((n.fn.name, n.index))
        stack.extend(n.children)
    return out
