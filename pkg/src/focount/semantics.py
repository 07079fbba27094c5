"""Tarskian satisfaction for single assignments."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

from .errors import ArityError, DomainError, EvaluationError, UnknownSymbolError
from .logic.syntax import (
    And, App, BuiltinAtom, Const, Eq, Exists, Forall, Formula, Implies, Max, Min, Not, Or, Query,
    Rel, RelVar, Term, Truth, Var, all_terms, as_query, subformulas,
)
from .structures import Structure, builtin_eval

FunctionTable = Mapping[tuple[int, ...], int]


@dataclass(frozen=True)
class Assignment:
    """Bindings for free individual, relation and function variables."""

    individuals: Mapping[str, int] = field(default_factory=dict)
    relations: Mapping[str, frozenset[tuple[int, ...]]] = field(default_factory=dict)
    functions: Mapping[str, FunctionTable] = field(default_factory=dict)

    def validate(self, A: Structure, query: Query | None = None) -> None:
        n = A.size
        for x, v in self.individuals.items():
            if not 0 <= v < n:
                raise DomainError(f"{x} = {v} lies outside the universe of size {n}")
        for r, ts in self.relations.items():
            arity = query.relvars.get(r) if query else None
            for t in ts:
                if arity is not None and len(t) != arity:
                    raise ArityError(f"tuple {t} bound to {r} does not have arity {arity}")
                if any(not 0 <= v < n for v in t):
                    raise DomainError(f"tuple {t} bound to {r} leaves the universe")
        for g, table in self.functions.items():
            arity = query.funvars.get(g) if query else len(next(iter(table), ()))
            for args in product(range(n), repeat=arity):
                if args not in table:
                    raise DomainError(f"function {g} is not total: no value at {args}")
                if not 0 <= table[args] < n:
                    raise DomainError(f"{g}{args} = {table[args]} lies outside the universe")


def check_symbols(A: Structure, phi: Formula | Query) -> None:
    """Raise if ``phi`` mentions vocabulary symbols or builtins ``A`` lacks."""
    voc = A.vocabulary
    f = phi.body if isinstance(phi, Query) else phi
    for g in subformulas(f):
        if isinstance(g, Rel):
            if g.name not in voc.arities:
                raise UnknownSymbolError(f"relation {g.name} is not in the vocabulary")
            if voc.arities[g.name] != len(g.args):
                raise ArityError(f"relation {g.name} has arity {voc.arities[g.name]}")
        elif isinstance(g, BuiltinAtom) and g.op not in voc.builtins:
            raise UnknownSymbolError(f"builtin {g.op} is not in the vocabulary")
    for t in all_terms(f):
        if isinstance(t, Const) and t.name not in A.constants:
            raise UnknownSymbolError(f"constant {t.name} is not in the vocabulary")
        if isinstance(t, Min) and "MIN" not in voc.builtins:
            raise UnknownSymbolError("builtin MIN is not in the vocabulary")
        if isinstance(t, Max) and "MAX" not in voc.builtins:
            raise UnknownSymbolError("builtin MAX is not in the vocabulary")


def eval_term(A: Structure, t: Term, env: Mapping[str, int], functions: Mapping[str, FunctionTable]) -> int:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise EvaluationError(f"unbound variable {t.name}") from None
    if isinstance(t, Const):
        return A.constants[t.name]
    if isinstance(t, Min):
        return builtin_eval(A, "MIN")
    if isinstance(t, Max):
        return builtin_eval(A, "MAX")
    if isinstance(t, App):
        try:
            table = functions[t.func]
        except KeyError:
            raise EvaluationError(f"unbound function variable {t.func}") from None
        return table[tuple(eval_term(A, a, env, functions) for a in t.args)]
    raise TypeError(f"not a term: {t!r}")


def holds(A: Structure, f: Formula, env: Mapping[str, int], relations, functions) -> bool:
    if isinstance(f, Truth):
        return f.value
    if isinstance(f, Eq):
        return eval_term(A, f.left, env, functions) == eval_term(A, f.right, env, functions)
    if isinstance(f, Rel):
        return A.holds(f.name, tuple(eval_term(A, a, env, functions) for a in f.args))
    if isinstance(f, RelVar):
        try:
            rel = relations[f.name]
        except KeyError:
            raise EvaluationError(f"unbound relation variable {f.name}") from None
        return tuple(eval_term(A, a, env, functions) for a in f.args) in rel
    if isinstance(f, BuiltinAtom):
        args = (eval_term(A, f.left, env, functions), eval_term(A, f.right, env, functions))
        return builtin_eval(A, f.op, args)
    if isinstance(f, Not):
        return not holds(A, f.arg, env, relations, functions)
    if isinstance(f, And):
        return all(holds(A, a, env, relations, functions) for a in f.args)
    if isinstance(f, Or):
        return any(holds(A, a, env, relations, functions) for a in f.args)
    if isinstance(f, Implies):
        return not holds(A, f.left, env, relations, functions) or holds(A, f.right, env, relations, functions)
    if isinstance(f, Exists):
        return any(holds(A, f.body, {**env, f.var: e}, relations, functions) for e in A.universe)
    if isinstance(f, Forall):
        return all(holds(A, f.body, {**env, f.var: e}, relations, functions) for e in A.universe)
    raise TypeError(f"not a formula: {f!r}")


def models(A: Structure, phi: Formula | Query, alpha: Assignment | None = None) -> bool:
    """Does ``A`` satisfy ``phi`` under ``alpha``?"""
    alpha = alpha or Assignment()
    q = as_query(phi)
    check_symbols(A, q)
    alpha.validate(A)
    return holds(A, q.body, dict(alpha.individuals), alpha.relations, alpha.functions)
