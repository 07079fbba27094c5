"""First-order terms and formulas with free relation and function variables.

Nodes are immutable dataclasses. ``str()`` prints the ASCII surface syntax
accepted by :func:`focount.logic.parser.parse_formula`; the printer fully
parenthesizes so that printing and re-parsing is stable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    """A constant symbol of the vocabulary."""

    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Min:
    def __str__(self):
        return "min"


@dataclass(frozen=True)
class Max:
    def __str__(self):
        return "max"


@dataclass(frozen=True)
class App:
    """Application of a free function variable."""

    func: str
    args: tuple[Term, ...] = ()

    def __str__(self):
        return f"{self.func}({', '.join(map(str, self.args))})"


Term = Union[Var, Const, Min, Max, App]


# ---------------------------------------------------------------- formulas


@dataclass(frozen=True)
class Truth:
    value: bool

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Rel:
    """Atom over a relation symbol of the vocabulary."""

    name: str
    args: tuple[Term, ...]

    def __str__(self):
        return f"{self.name}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class RelVar:
    """Atom over a free relation variable."""

    name: str
    args: tuple[Term, ...]

    def __str__(self):
        return f"{self.name}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term

    def __str__(self):
        return f"{self.left} = {self.right}"


_INFIX = {"LEQ": "<=", "LT": "<"}


@dataclass(frozen=True)
class BuiltinAtom:
    """One of LEQ, LT, SUCC, BIT applied to two terms."""

    op: str
    left: Term
    right: Term

    def __str__(self):
        if self.op in _INFIX:
            return f"{self.left} {_INFIX[self.op]} {self.right}"
        return f"{self.op}({self.left}, {self.right})"


@dataclass(frozen=True)
class Not:
    arg: Formula

    def __str__(self):
        return f"~{_wrap(self.arg)}"


@dataclass(frozen=True)
class And:
    args: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self):
        if not self.args:
            return "true"
        return "(" + " /\\ ".join(_wrap(a) for a in self.args) + ")"


@dataclass(frozen=True)
class Or:
    args: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self):
        if not self.args:
            return "false"
        return "(" + " \\/ ".join(_wrap(a) for a in self.args) + ")"


@dataclass(frozen=True)
class Implies:
    left: Formula
    right: Formula

    def __str__(self):
        return f"({_wrap(self.left)} -> {_wrap(self.right)})"


@dataclass(frozen=True)
class Exists:
    var: str
    body: Formula

    def __str__(self):
        return f"exists {self.var} ({self.body})"


@dataclass(frozen=True)
class Forall:
    var: str
    body: Formula

    def __str__(self):
        return f"forall {self.var} ({self.body})"


Formula = Union[Truth, Rel, RelVar, Eq, BuiltinAtom, Not, And, Or, Implies, Exists, Forall]
ATOMS = (Truth, Rel, RelVar, Eq, BuiltinAtom)
Quantifier = (Exists, Forall)


def _wrap(f: Formula) -> str:
    # quantifier scope extends as far right as possible, so operands need parentheses
    s = str(f)
    return f"({s})" if isinstance(f, (Exists, Forall)) else s


# ---------------------------------------------------------------- constructors


def conj(*args: Formula) -> Formula:
    flat = []
    for a in args:
        if isinstance(a, Truth) and a.value:
            continue
        flat.append(a)
    if not flat:
        return Truth(True)
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*args: Formula) -> Formula:
    flat = [a for a in args if not (isinstance(a, Truth) and not a.value)]
    if not flat:
        return Truth(False)
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def forall(vars_: list[str] | tuple[str, ...], body: Formula) -> Formula:
    for v in reversed(vars_):
        body = Forall(v, body)
    return body


def exists(vars_: list[str] | tuple[str, ...], body: Formula) -> Formula:
    for v in reversed(vars_):
        body = Exists(v, body)
    return body


# ---------------------------------------------------------------- traversal


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Not):
        return (f.arg,)
    if isinstance(f, (And, Or)):
        return f.args
    if isinstance(f, Implies):
        return (f.left, f.right)
    if isinstance(f, (Exists, Forall)):
        return (f.body,)
    return ()


def atom_terms(f: Formula) -> tuple[Term, ...]:
    if isinstance(f, (Rel, RelVar)):
        return f.args
    if isinstance(f, (Eq, BuiltinAtom)):
        return (f.left, f.right)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)


def all_terms(f: Formula) -> Iterator[Term]:
    """Every term occurrence in ``f`` (pre-order, left to right)."""
    for g in subformulas(f):
        for t in atom_terms(g):
            yield from subterms(t)


def term_vars(t: Term) -> set[str]:
    return {s.name for s in subterms(t) if isinstance(s, Var)}


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - {f.var}
    out = set()
    for t in atom_terms(f):
        out |= term_vars(t)
    for c in children(f):
        out |= free_vars(c)
    return out


def free_vars_ordered(f: Formula) -> list[str]:
    """Free individual variables in order of first occurrence."""
    seen: list[str] = []

    def walk(g, bound):
        if isinstance(g, (Exists, Forall)):
            walk(g.body, bound | {g.var})
            return
        for t in atom_terms(g):
            for s in subterms(t):
                if isinstance(s, Var) and s.name not in bound and s.name not in seen:
                    seen.append(s.name)
        for c in children(g):
            walk(c, bound)

    walk(f, frozenset())
    return seen


def bound_vars(f: Formula) -> list[str]:
    return [g.var for g in subformulas(f) if isinstance(g, (Exists, Forall))]


def function_symbols(f: Formula) -> dict[str, int]:
    out: dict[str, int] = {}
    for t in all_terms(f):
        if isinstance(t, App):
            out.setdefault(t.func, len(t.args))
    return out


def relvar_symbols(f: Formula) -> dict[str, int]:
    out: dict[str, int] = {}
    for g in subformulas(f):
        if isinstance(g, RelVar):
            out.setdefault(g.name, len(g.args))
    return out


def names_used(f: Formula) -> set[str]:
    """Every identifier occurring anywhere in ``f``."""
    out = set(bound_vars(f))
    for g in subformulas(f):
        if isinstance(g, (Rel, RelVar)):
            out.add(g.name)
    for t in all_terms(f):
        if isinstance(t, (Var, Const)):
            out.add(t.name)
        elif isinstance(t, App):
            out.add(t.func)
    return out


def is_quantifier_free(f: Formula) -> bool:
    return not any(isinstance(g, (Exists, Forall)) for g in subformulas(f))


def count_nodes(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


# ---------------------------------------------------------------- rewriting


def map_terms(f: Formula, fn) -> Formula:
    """Rebuild ``f`` with every top-level atom argument replaced by ``fn(term)``."""
    if isinstance(f, Rel):
        return Rel(f.name, tuple(fn(t) for t in f.args))
    if isinstance(f, RelVar):
        return RelVar(f.name, tuple(fn(t) for t in f.args))
    if isinstance(f, Eq):
        return Eq(fn(f.left), fn(f.right))
    if isinstance(f, BuiltinAtom):
        return BuiltinAtom(f.op, fn(f.left), fn(f.right))
    if isinstance(f, Truth):
        return f
    if isinstance(f, Not):
        return Not(map_terms(f.arg, fn))
    if isinstance(f, And):
        return And(tuple(map_terms(a, fn) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(map_terms(a, fn) for a in f.args))
    if isinstance(f, Implies):
        return Implies(map_terms(f.left, fn), map_terms(f.right, fn))
    if isinstance(f, Exists):
        return Exists(f.var, map_terms(f.body, fn))
    if isinstance(f, Forall):
        return Forall(f.var, map_terms(f.body, fn))
    raise TypeError(f"not a formula: {f!r}")


def substitute_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, App):
        return App(t.func, tuple(substitute_term(a, mapping) for a in t.args))
    return t


def substitute(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Replace free occurrences of variables.

    Capture is not checked here; callers keep bound names disjoint from the
    variables of the substituted terms (the parser and :func:`rename_apart`
    guarantee unique binders).
    """
    if not mapping:
        return f
    if isinstance(f, (Exists, Forall)):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        return type(f)(f.var, substitute(f.body, inner))
    if isinstance(f, ATOMS):
        return map_terms(f, lambda t: substitute_term(t, mapping))
    if isinstance(f, Not):
        return Not(substitute(f.arg, mapping))
    if isinstance(f, And):
        return And(tuple(substitute(a, mapping) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(substitute(a, mapping) for a in f.args))
    if isinstance(f, Implies):
        return Implies(substitute(f.left, mapping), substitute(f.right, mapping))
    raise TypeError(f"not a formula: {f!r}")


def map_apps(t: Term, fn) -> Term:
    """Bottom-up rewrite of function applications inside a term."""
    if isinstance(t, App):
        return fn(App(t.func, tuple(map_apps(a, fn) for a in t.args)))
    return t


class NameSupply:
    """Deterministic fresh names avoiding a fixed set of taken names."""

    def __init__(self, taken=()):
        self.taken = set(taken)

    def fresh(self, base: str) -> str:
        if base not in self.taken:
            self.taken.add(base)
            return base
        i = 1
        while f"{base}_{i}" in self.taken:
            i += 1
        name = f"{base}_{i}"
        self.taken.add(name)
        return name


def rename_apart(f: Formula, taken=()) -> Formula:
    """Alpha-rename so every binder is unique and distinct from free names.

    A bound name keeps its spelling when that is already unambiguous, which
    makes the renaming idempotent.
    """
    supply = NameSupply(set(taken) | free_vars(f) | (names_used(f) - set(bound_vars(f))))

    def walk(g, env):
        if isinstance(g, (Exists, Forall)):
            new = supply.fresh(g.var) if g.var in supply.taken else _take(supply, g.var)
            return type(g)(new, walk(g.body, {**env, g.var: Var(new)}))
        if isinstance(g, ATOMS):
            return map_terms(g, lambda t: substitute_term(t, env))
        if isinstance(g, Not):
            return Not(walk(g.arg, env))
        if isinstance(g, And):
            return And(tuple(walk(a, env) for a in g.args))
        if isinstance(g, Or):
            return Or(tuple(walk(a, env) for a in g.args))
        if isinstance(g, Implies):
            return Implies(walk(g.left, env), walk(g.right, env))
        raise TypeError(f"not a formula: {g!r}")

    return walk(f, {})


def _take(supply: NameSupply, name: str) -> str:
    supply.taken.add(name)
    return name


# ---------------------------------------------------------------- queries


@dataclass(frozen=True)
class Query:
    """A formula together with its declared free variables.

    Declarations matter for counting: a declared but unused relation or
    function variable still multiplies the count by its number of values.
    """

    body: Formula
    relvars: Mapping[str, int] = field(default_factory=dict)
    funvars: Mapping[str, int] = field(default_factory=dict)
    freevars: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "relvars", dict(self.relvars))
        object.__setattr__(self, "funvars", dict(self.funvars))
        object.__setattr__(self, "freevars", tuple(self.freevars))

    def __hash__(self):
        return hash((self.body, tuple(self.relvars.items()), tuple(self.funvars.items()), self.freevars))

    def __str__(self):
        lines = [f"relvar {r}/{a};" for r, a in self.relvars.items()]
        lines += [f"funvar {g}/{a};" for g, a in self.funvars.items()]
        lines += [f"freevar {x};" for x in self.freevars]
        lines.append(str(self.body))
        return "\n".join(lines)

    def replace(self, **changes) -> Query:
        data = dict(body=self.body, relvars=self.relvars, funvars=self.funvars, freevars=self.freevars)
        data.update(changes)
        return Query(**data)

    def names(self) -> set[str]:
        return names_used(self.body) | set(self.relvars) | set(self.funvars) | set(self.freevars)


def as_query(phi: Formula | Query) -> Query:
    """Wrap a bare formula, declaring exactly the symbols it uses."""
    if isinstance(phi, Query):
        return phi
    return Query(phi, relvar_symbols(phi), function_symbols(phi), tuple(free_vars_ordered(phi)))


def equal_up_to_renaming(a: Query | Formula, b: Query | Formula) -> bool:
    """Structural equality modulo a renaming of bound variables and of function variables.

    Function variables must correspond bijectively with equal arities;
    declared but unused function variables are matched by arity.
    """
    qa, qb = as_query(a), as_query(b)
    if qa.freevars != qb.freevars or qa.relvars != qb.relvars:
        return False
    fmap: dict[str, str] = {}
    rmap: dict[str, str] = {}

    def same_term(s, t, env):
        if type(s) is not type(t):
            return False
        if isinstance(s, Var):
            return env.get(s.name, s.name) == t.name
        if isinstance(s, Const):
            return s.name == t.name
        if isinstance(s, App):
            if len(s.args) != len(t.args):
                return False
            if fmap.setdefault(s.func, t.func) != t.func or rmap.setdefault(t.func, s.func) != s.func:
                return False
            return all(same_term(x, y, env) for x, y in zip(s.args, t.args))
        return True

    def same(f, g, env):
        if type(f) is not type(g):
            return False
        if isinstance(f, (Exists, Forall)):
            return same(f.body, g.body, {**env, f.var: g.var})
        if isinstance(f, Truth):
            return f.value == g.value
        if isinstance(f, (Rel, RelVar)) and f.name != g.name:
            return False
        if isinstance(f, BuiltinAtom) and f.op != g.op:
            return False
        ta, tb = atom_terms(f), atom_terms(g)
        if len(ta) != len(tb) or not all(same_term(x, y, env) for x, y in zip(ta, tb)):
            return False
        ca, cb = children(f), children(g)
        return len(ca) == len(cb) and all(same(x, y, env) for x, y in zip(ca, cb))

    if not same(qa.body, qb.body, {}):
        return False
    for fa, fb in fmap.items():
        if qa.funvars.get(fa) != qb.funvars.get(fb):
            return False
    rest_a = sorted(a for f, a in qa.funvars.items() if f not in fmap)
    rest_b = sorted(a for f, a in qb.funvars.items() if f not in rmap)
    return rest_a == rest_b
