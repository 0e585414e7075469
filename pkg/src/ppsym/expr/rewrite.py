"""Derivative-lowering rewrite rules (differential constraints on function symbols)."""
from __future__ import annotations

from dataclasses import dataclass

from .calculus import differentiate_multi, formal_args, substitute
from .nodes import DerivApply, Expr, ExprError, FunctionSymbol, as_expr, rebuild

MAX_REWRITE_ROUNDS = 64


class RewriteLimitError(ExprError):
    pass


@dataclass(frozen=True)
class RewriteRule:
    """Rewrite ``fn`` derivatives whose order reaches ``threshold`` in every slot.

    ``replacement`` is the value of the threshold derivative, written in the
    formal arguments ``x1 .. xn``; higher orders are obtained by
    differentiating it.
    """

    fn: FunctionSymbol
    threshold: tuple
    replacement: Expr

    def __post_init__(self):
        if len(self.threshold) != self.fn.arity:
            raise ExprError("threshold length must equal the function arity")
        if not any(self.threshold):
            raise ExprError("threshold needs at least one positive order")
        object.__setattr__(self, "replacement", as_expr(self.replacement))

    def matches(self, node: Expr) -> bool:
        return (
            isinstance(node, DerivApply)
            and node.fn == self.fn
            and all(i >= t for i, t in zip(node.index, self.threshold))
        )

    def fire(self, node: DerivApply) -> Expr:
        excess = [i - t for i, t in zip(node.index, self.threshold)]
        names = formal_args(self.fn.arity)
        body = differentiate_multi(self.replacement, names, excess)
        return substitute(body, dict(zip(names, node.args)))


def _one_pass(e: Expr, rules) -> Expr:
    memo: dict = {}

    def go(n: Expr) -> Expr:
        hit = memo.get(n)
        if hit is not None:
            return hit
        if n.children:
            kids = [go(c) for c in n.children]
            cur = n if all(k is c for k, c in zip(kids, n.children)) else rebuild(n, kids)
        else:
            cur = n
        if isinstance(cur, DerivApply):
            for rule in rules:
                if rule.matches(cur):
                    cur = rule.fire(cur)
                    break
        memo[n] = cur
        return cur

    return go(e)


def apply_rewrites(e: Expr, rules, max_rounds: int = MAX_REWRITE_ROUNDS) -> Expr:
    """Rewrite to a fixed point; raises if ``max_rounds`` passes do not settle."""
    rules = tuple(rules)
    if not rules:
        return e
    for _ in range(max_rounds):
        nxt = _one_pass(e, rules)
        if nxt == e:
            return e
        e = nxt
    raise RewriteLimitError(f"rewrite did not reach a fixed point in {max_rounds} rounds")


def has_rewritable(e: Expr, rules) -> bool:
    stack = [e]
    while stack:
        n = stack.pop()
        if any(r.matches(n) for r in rules):
            return True
        stack.extend(n.children)
    return False
