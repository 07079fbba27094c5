"""Formula-to-formula passes that preserve (or scale) assignment counts.

Every pass takes a :class:`Query` (or a bare formula, whose declarations
are inferred) and returns a :class:`Query`. Fresh names are drawn from a
:class:`NameSupply` seeded with every name of the input, so no pass can
shadow or capture an existing symbol, and the output is a deterministic
function of the input.

:func:`run_pass` wraps a pass and returns a :class:`TransformReport`
stating how the counts of input and output relate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import DomainError, PreconditionError
from .logic.normal import build_prenex, classify_fragment, is_prefix_restricted, split_prenex, to_prenex
from .logic.syntax import (
    And, App, BuiltinAtom, Eq, Exists, Forall, Formula, Implies, Max, Min, NameSupply, Not, Or,
    Query, RelVar, Term, Var, as_query, conj, forall, free_vars, is_quantifier_free,
    map_apps, map_terms, names_used, rename_apart, substitute,
)
from .structures import BUILTINS

# ---------------------------------------------------------------- helpers


def _builtins(builtins: Iterable[str] | None) -> frozenset[str]:
    return BUILTINS if builtins is None else frozenset(builtins)


def _supply(q: Query) -> NameSupply:
    return NameSupply(q.names())


def _less(left: Term, right: Term, builtins: frozenset[str]) -> Formula:
    """``left < right`` with LT, or ``~(right <= left)`` when only LEQ is available."""
    if "LT" in builtins:
        return BuiltinAtom("LT", left, right)
    return Not(BuiltinAtom("LEQ", right, left))


def _need_order(builtins: frozenset[str], op: str) -> None:
    if not {"LT", "LEQ"} & builtins:
        raise PreconditionError(f"{op} needs an order builtin (LT or LEQ)")


def _need(builtins: frozenset[str], op: str, *names: str) -> None:
    missing = [b for b in names if b not in builtins]
    if missing:
        raise PreconditionError(f"{op} needs builtins {', '.join(missing)}")


# ---------------------------------------------------------------- Skolem functions


def skolemize(phi: Formula | Query) -> Query:
    """Replace every existential variable by a fresh function of the universal variables to its left.

    The output is a prefix-restricted Pi1 formula whose function-variable
    count equals the Skolem count of the input sentence.
    """
    q = as_query(phi)
    prefix, matrix = split_prenex(q.body)
    if q.relvars or q.funvars or q.freevars:
        raise PreconditionError("skolemize needs a sentence without free variables")
    supply = _supply(q)
    universals: list[str] = []
    mapping: dict[str, Term] = {}
    funvars: dict[str, int] = {}
    for quant, v in prefix:
        if quant == "A":
            universals.append(v)
            continue
        g = supply.fresh(f"f_{v}")
        mapping[v] = App(g, tuple(Var(u) for u in universals))
        funvars[g] = len(universals)
    return Query(forall(universals, substitute(matrix, mapping)), funvars=funvars)


def deskolemize(phi: Formula | Query) -> Query:
    """Turn each function variable of a prefix-restricted Pi1 formula back into an existential variable.

    An arity-a function becomes an existential quantifier placed right after
    the a-th universal quantifier; free individual variables become leading
    existentials. Function variables of one arity keep their declaration order.
    """
    q = as_query(phi)
    if q.relvars:
        raise PreconditionError("deskolemize does not handle relation variables")
    if not is_prefix_restricted(q.body):
        raise PreconditionError("deskolemize needs a prefix-restricted formula")
    prefix, matrix = split_prenex(q.body)
    ys = [v for _, v in prefix]
    supply = _supply(q)
    at: dict[int, list[str]] = {i: [] for i in range(len(ys) + 1)}
    at[0] += list(q.freevars)
    by_func: dict[str, str] = {}
    for g, a in q.funvars.items():
        if a > len(ys):
            raise PreconditionError(f"function variable {g}/{a} has more arguments than the {len(ys)} universal variables")
        v = supply.fresh(f"v_{g}")
        by_func[g] = v
        at[a].append(v)
    body = map_terms(matrix, lambda t: map_apps(t, lambda app: Var(by_func[app.func])))
    new_prefix = []
    for i in range(len(ys) + 1):
        if i:
            new_prefix.append(("A", ys[i - 1]))
        new_prefix += [("E", v) for v in at[i]]
    return Query(build_prenex(new_prefix, body))


def freevars_as_functions(phi: Formula | Query) -> Query:
    """Declare each free individual variable as a nullary function variable instead.

    Counts are unchanged: a nullary function is just a choice of one element.
    """
    q = as_query(phi)
    clash = set(q.freevars) & set(q.funvars)
    if clash:
        raise PreconditionError(f"names used twice: {', '.join(sorted(clash))}")
    body = substitute(q.body, {x: App(x, ()) for x in q.freevars})
    return Query(body, q.relvars, {**q.funvars, **{x: 0 for x in q.freevars}})


# ---------------------------------------------------------------- unique witnesses


def unique_witness(phi: Formula | Query, builtins: Iterable[str] | None = None) -> Query:
    """Make every existential pick its smallest witness, innermost quantifier first.

    ``exists y theta(y)`` becomes
    ``exists y (theta(y) /\\ forall z (~theta(z) \\/ y < z \\/ y = z))``. With
    only LEQ available the order disjuncts collapse to ``y <= z``.
    """
    q = as_query(phi)
    bset = _builtins(builtins)
    _need_order(bset, "unique_witness")
    supply = _supply(q)

    def least(y: str, theta: Formula) -> Formula:
        z = supply.fresh("z")
        theta_z = rename_apart(substitute(theta, {y: Var(z)}), supply.taken)
        supply.taken |= names_used(theta_z)
        if "LT" in bset:
            order = Or((Not(theta_z), BuiltinAtom("LT", Var(y), Var(z)), Eq(Var(y), Var(z))))
        else:
            order = Or((Not(theta_z), BuiltinAtom("LEQ", Var(y), Var(z))))
        return Exists(y, And((theta, Forall(z, order))))

    def walk(f: Formula) -> Formula:
        if isinstance(f, Exists):
            return least(f.var, walk(f.body))
        if isinstance(f, Forall):
            return Forall(f.var, walk(f.body))
        if isinstance(f, Not):
            return Not(walk(f.arg))
        if isinstance(f, And):
            return And(tuple(walk(a) for a in f.args))
        if isinstance(f, Or):
            return Or(tuple(walk(a) for a in f.args))
        if isinstance(f, Implies):
            return Implies(walk(f.left), walk(f.right))
        return f

    return q.replace(body=walk(q.body))


def to_pi1(phi: Formula | Query, builtins: Iterable[str] | None = None) -> Query:
    """Count-preserving translation of a formula with free function variables into prenex Pi1.

    Each quantifier below the leading universal block is replaced,
    innermost first, by a witness term ``w(u1, ..., uj)`` over the enclosing
    variables its scope mentions. For ``exists v chi`` the witness is the
    least ``v`` with ``chi``, and ``min`` when there is none; for
    ``forall v chi`` it is the least counterexample, and ``min`` when there
    is none, so in both cases the quantifier is equivalent to ``chi`` at the
    witness. A universal side condition pins each witness function down
    completely, which keeps the number of satisfying assignments unchanged.

    Formulas that are already prenex Pi1 are returned unchanged.
    """
    q = as_query(phi)
    if q.relvars:
        raise PreconditionError("to_pi1 works on function variables; apply relations_to_functions first")
    info = classify_fragment(q)
    if info.in_prenex and info.in_pi(1):
        return q
    bset = _builtins(builtins)
    _need_order(bset, "to_pi1")
    _need(bset, "to_pi1", "MIN")

    p = to_prenex(q)
    prefix, matrix = split_prenex(p.body)
    lead = 0
    while lead < len(prefix) and prefix[lead][0] == "A":
        lead += 1
    outer = [v for _, v in prefix[:lead]]
    rest = prefix[lead:]
    supply = _supply(p)
    funvars = dict(p.funvars)
    constraints: list[Formula] = []
    current = matrix
    for i in range(len(rest) - 1, -1, -1):
        quant, v = rest[i]
        enclosing = outer + [u for _, u in rest[:i]]
        used = free_vars(current)
        args = [u for u in enclosing if u in used]
        g = supply.fresh(f"w_{v}")
        funvars[g] = len(args)
        target = current if quant == "E" else Not(current)
        # the side condition quantifies over copies of the arguments
        copies = [supply.fresh(a) for a in args]
        u = supply.fresh("u")
        rename = {a: Var(c) for a, c in zip(args, copies)}
        witness = App(g, tuple(Var(c) for c in copies))
        at_u = substitute(target, {**rename, v: Var(u)})
        at_witness = substitute(target, {**rename, v: witness})
        constraints.append(forall(copies + [u], And((
            Implies(_less(Var(u), witness, bset), Not(at_u)),
            Or((at_witness, And((Eq(witness, Min()), Not(at_u))))),
        ))))
        current = substitute(current, {v: App(g, tuple(Var(a) for a in args))})
    body = conj(forall(outer, current), *reversed(constraints))
    return to_prenex(Query(body, funvars=funvars, freevars=p.freevars))


# ---------------------------------------------------------------- relations as functions


def relations_to_functions(phi: Formula | Query, builtins: Iterable[str] | None = None) -> Query:
    """Encode each relation variable R as a function variable of the same name and arity.

    The function may only take the values ``min`` (for true) and the
    element right above ``min`` (for false), and ``R(t)`` becomes
    ``R(t) = min``. Counts agree on every structure with at least two elements.
    """
    q = as_query(phi)
    bset = _builtins(builtins)
    _need_order(bset, "relations_to_functions")
    _need(bset, "relations_to_functions", "MIN")
    clash = set(q.relvars) & set(q.funvars)
    if clash:
        raise PreconditionError(f"symbols declared both as relation and function variable: {', '.join(sorted(clash))}")
    supply = _supply(q)
    ranges = []
    for r, a in q.relvars.items():
        zs = [supply.fresh("z") for _ in range(a)]
        y = supply.fresh("y")
        value = App(r, tuple(Var(z) for z in zs))
        ranges.append(forall(zs + [y], Or((
            Eq(value, Min()),
            And((_less(Min(), value, bset), Implies(_less(Var(y), value, bset), Eq(Var(y), Min())))),
        ))))

    def walk(f: Formula) -> Formula:
        if isinstance(f, RelVar):
            return Eq(App(f.name, f.args), Min())
        if isinstance(f, Not):
            return Not(walk(f.arg))
        if isinstance(f, And):
            return And(tuple(walk(a) for a in f.args))
        if isinstance(f, Or):
            return Or(tuple(walk(a) for a in f.args))
        if isinstance(f, Implies):
            return Implies(walk(f.left), walk(f.right))
        if isinstance(f, (Exists, Forall)):
            return type(f)(f.var, walk(f.body))
        return f

    funvars = {**q.relvars, **q.funvars}
    return Query(conj(*ranges, walk(q.body)), funvars=funvars, freevars=q.freevars)


# ---------------------------------------------------------------- de-nesting


def denest_functions(phi: Formula | Query) -> Query:
    """Name every nested function application by a fresh free variable.

    ``F(G(x)) = min`` becomes ``v = G(x) /\\ F(v) = min``. The new variable
    has exactly one admissible value per assignment, so counts are unchanged.
    Repeated occurrences of one nested term share a variable.
    """
    q = as_query(phi)
    if not is_quantifier_free(q.body):
        raise PreconditionError("denest_functions needs a quantifier-free formula")
    supply = _supply(q)
    names: dict[App, str] = {}
    definitions: list[Formula] = []

    def flat(t: Term, top: bool) -> Term:
        if not isinstance(t, App):
            return t
        inner = App(t.func, tuple(flat(a, False) for a in t.args))
        if top:
            return inner
        if inner not in names:
            names[inner] = supply.fresh("v")
            definitions.append(Eq(Var(names[inner]), inner))
        return Var(names[inner])

    body = map_terms(q.body, lambda t: flat(t, True))
    if not definitions:
        return q
    return q.replace(body=conj(*definitions, body), freevars=q.freevars + tuple(names.values()))


# ---------------------------------------------------------------- successor


def succ_formula(builtins: Iterable[str] | None = None) -> Query:
    """Pi1 formula over unary function variables s, p whose only model is successor/predecessor.

    Under it s(e) = e+1 below max, s(max) = max, p(e) = e-1 above min and
    p(min) = min, on every universe size.
    """
    bset = _builtins(builtins)
    _need(bset, "succ_formula", "LT", "MIN", "MAX")
    x = Var("x")

    def s(t):
        return App("s", (t,))

    def p(t):
        return App("p", (t,))

    lt = lambda a, b: BuiltinAtom("LT", a, b)  # noqa: E731
    body = Forall("x", And((
        Implies(lt(x, Max()), And((lt(x, s(x)), Eq(p(s(x)), x)))),
        Implies(lt(Min(), x), And((lt(p(x), x), Eq(s(p(x)), x)))),
        Eq(p(Min()), Min()),
        Eq(s(Max()), Max()),
    )))
    return Query(body, funvars={"s": 1, "p": 1})


# ---------------------------------------------------------------- reports


@dataclass(frozen=True)
class TransformReport:
    input: Query
    output: Query
    fresh: tuple[tuple[str, str, int], ...]  # (kind, name, arity)
    claim: str  # "equal" | "scaled"
    factor: str | None = None
    requires_min_size: int = 1
    notes: tuple[str, ...] = field(default_factory=tuple)

    def check_structure(self, A) -> None:
        """Raise DomainError if ``A`` is too small for the claimed count relation."""
        if A.size < self.requires_min_size:
            raise DomainError(f"this pass needs a universe with at least {self.requires_min_size} elements, got {A.size}")

    def as_dict(self) -> dict:
        return {
            "input": str(self.input),
            "output": str(self.output),
            "fresh": [{"kind": k, "name": n, "arity": a} for k, n, a in self.fresh],
            "claim": self.claim,
            "factor": self.factor,
            "requires_min_size": self.requires_min_size,
        }


def fresh_symbols(before: Query, after: Query) -> tuple[tuple[str, str, int], ...]:
    """Declared symbols of ``after`` that ``before`` does not declare."""
    out = []
    for g, a in after.funvars.items():
        if g not in before.funvars and g not in before.relvars:
            out.append(("funvar", g, a))
    for r, a in after.relvars.items():
        if r not in before.relvars:
            out.append(("relvar", r, a))
    for x in after.freevars:
        if x not in before.freevars:
            out.append(("freevar", x, 0))
    return tuple(out)


PASSES = ("skolemize", "deskolemize", "unique-witness", "to-pi1", "rel2func", "denest")


def run_pass(name: str, phi: Formula | Query, builtins: Iterable[str] | None = None) -> TransformReport:
    """Apply the pass called ``name`` and describe how its counts relate to the input's."""
    q = as_query(phi)
    if name == "skolemize":
        out = skolemize(q)
        return TransformReport(q, out, fresh_symbols(q, out), "equal",
                               notes=("Skolem count of the input equals the functional count of the output",))
    if name == "deskolemize":
        out = deskolemize(q)
        return TransformReport(q, out, fresh_symbols(q, out), "equal",
                               notes=("functional count of the input equals the Skolem count of the output",))
    if name == "unique-witness":
        out = unique_witness(q, builtins)
        return TransformReport(q, out, fresh_symbols(q, out), "equal")
    if name == "to-pi1":
        out = to_pi1(q, builtins)
        return TransformReport(q, out, fresh_symbols(q, out), "equal")
    if name == "rel2func":
        out = relations_to_functions(q, builtins)
        return TransformReport(q, out, fresh_symbols(q, out), "equal", requires_min_size=2,
                               notes=("relational count of the input equals the functional count of the output",))
    if name == "denest":
        out = denest_functions(q)
        return TransformReport(q, out, fresh_symbols(q, out), "equal")
    raise ValueError(f"unknown pass {name!r}; choose one of {', '.join(PASSES)}")


__all__ = [
    "PASSES", "TransformReport", "deskolemize", "denest_functions", "freevars_as_functions", "fresh_symbols",
    "relations_to_functions",
    "run_pass", "skolemize", "succ_formula", "to_pi1", "unique_witness",
]
