"""Independent reference implementations used only by the tests.

Nothing here reuses the package's evaluators or counters: formulas are
evaluated by a separately written interpreter over plain dicts, and
counts come from explicit itertools enumeration.
"""

from __future__ import annotations

from itertools import product

from focount.logic.syntax import (
    And, App, BuiltinAtom, Const, Eq, Exists, Forall, Implies, Max, Min, Not, Or, Rel, RelVar, Truth, Var,
)


def _term(A, t, env, funcs):
    match t:
        case Var(name):
            return env[name]
        case Const(name):
            return A.constants[name]
        case Min():
            return 0
        case Max():
            return A.size - 1
        case App(func, args):
            return funcs[func][tuple(_term(A, a, env, funcs) for a in args)]
    raise TypeError(t)


def oracle_holds(A, f, env=None, rels=None, funcs=None) -> bool:
    env, rels, funcs = env or {}, rels or {}, funcs or {}
    ev = lambda g, e=env: oracle_holds(A, g, e, rels, funcs)  # noqa: E731
    tm = lambda t: _term(A, t, env, funcs)  # noqa: E731
    match f:
        case Truth(value):
            return value
        case Eq(left, right):
            return tm(left) == tm(right)
        case BuiltinAtom(op, left, right):
            i, j = tm(left), tm(right)
            return {"LEQ": i <= j, "LT": i < j, "SUCC": i + 1 == j, "BIT": (j >> i) % 2 == 1}[op]
        case Rel(name, args):
            return tuple(tm(a) for a in args) in A.relations[name]
        case RelVar(name, args):
            return tuple(tm(a) for a in args) in rels[name]
        case Not(arg):
            return not ev(arg)
        case And(args):
            return all(ev(a) for a in args)
        case Or(args):
            return any(ev(a) for a in args)
        case Implies(left, right):
            return (not ev(left)) or ev(right)
        case Exists(var, body):
            return any(ev(body, {**env, var: e}) for e in range(A.size))
        case Forall(var, body):
            return all(ev(body, {**env, var: e}) for e in range(A.size))
    raise TypeError(f)


def all_tables(n: int, arity: int):
    """Every total function {0..n-1}^arity -> {0..n-1} as a dict."""
    points = list(product(range(n), repeat=arity))
    for values in product(range(n), repeat=len(points)):
        yield dict(zip(points, values))


def all_relations(n: int, arity: int):
    points = list(product(range(n), repeat=arity))
    for bits in product((False, True), repeat=len(points)):
        yield frozenset(p for p, b in zip(points, bits) if b)


def naive_count(A, q) -> int:
    """Count (individuals, relations, functions) satisfying ``q`` by nested enumeration."""
    n = A.size
    axes = [[("x", x, v) for v in range(n)] for x in q.freevars]
    axes += [[("r", r, s) for s in all_relations(n, a)] for r, a in q.relvars.items()]
    axes += [[("f", g, t) for t in all_tables(n, a)] for g, a in q.funvars.items()]
    total = 0
    for choice in product(*axes):
        env = {name: v for kind, name, v in choice if kind == "x"}
        rels = {name: v for kind, name, v in choice if kind == "r"}
        funcs = {name: v for kind, name, v in choice if kind == "f"}
        total += oracle_holds(A, q.body, env, rels, funcs)
    return total


def skolem_table_count(A, q) -> int:
    """Count Skolem-function tuples of a prenex sentence by enumerating their tables."""
    prefix = []
    f = q.body
    while isinstance(f, (Exists, Forall)):
        prefix.append((isinstance(f, Exists), f.var))
        f = f.body
    matrix = f
    n = A.size
    exist_arity = []
    universals = 0
    for is_exists, _ in prefix:
        if is_exists:
            exist_arity.append(universals)
        else:
            universals += 1
    universal_vars = [v for e, v in prefix if not e]
    total = 0
    for tables in product(*[list(all_tables(n, a)) for a in exist_arity]):
        ok = True
        for ys in product(range(n), repeat=len(universal_vars)):
            env = {}
            seen_universals = 0
            k = 0
            for is_exists, v in prefix:
                if is_exists:
                    env[v] = tables[k][tuple(ys[:seen_universals])]
                    k += 1
                else:
                    env[v] = ys[seen_universals]
                    seen_universals += 1
            if not oracle_holds(A, matrix, env):
                ok = False
                break
        total += ok
    return total


def unfold_proof_trees(C, gate=None) -> list:
    """Explicit list of the proof trees of the tree unfolding below ``gate``."""
    gate = C.root if gate is None else gate
    kind = C.kinds[gate]
    if kind == "LEAF":
        return [gate] if C.leaves[gate] else []
    below = [unfold_proof_trees(C, c) for c in C.children[gate]]
    if kind == "OR":
        return [(gate, i, t) for i, trees in enumerate(below) for t in trees]
    return [(gate, combo) for combo in product(*below)]


def truth_table(num_vars: int, parts, kind: str) -> int:
    """Satisfying assignments of a DNF/CNF given as signed 1-based literal tuples."""
    total = 0
    for bits in product((0, 1), repeat=num_vars):
        def lit(v):
            return bits[abs(v) - 1] == (1 if v > 0 else 0)
        if kind == "dnf":
            total += any(all(lit(v) for v in p) for p in parts)
        else:
            total += all(any(lit(v) for v in p) for p in parts)
    return total
