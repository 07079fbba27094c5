"""Exact counting of satisfying assignments by exhaustive enumeration.

Three counting semantics are offered: free relation variables
(:func:`count_relational`), free function variables
(:func:`count_functional`) and Skolem functions of a prenex sentence
(:func:`count_skolem`). Counts are Python ints, so they never overflow.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from math import prod

import numpy as np

from .batch import BatchEvaluator
from .errors import PreconditionError, ResourceError
from .logic.normal import classify_fragment, is_prenex, split_prenex
from .logic.syntax import (
    App, Formula, NameSupply, Query, Var, all_terms, as_query, is_quantifier_free, map_apps, map_terms,
)
from .semantics import check_symbols, eval_term, holds
from .structures import Structure

DEFAULT_BUDGET = 10**7
CHUNK = 1 << 16
# numpy decoding works in int64
_INT64_LIMIT = 1 << 62


@dataclass(frozen=True)
class CountRequest:
    structure: Structure
    formula: Formula | Query
    mode: str = "functional"  # "relational" | "functional" | "skolem"
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        if self.mode not in ("relational", "functional", "skolem"):
            raise ValueError(f"unknown counting mode {self.mode!r}")


def count(request: CountRequest, workers: int = 1) -> int:
    fn = {"relational": count_relational, "functional": count_functional, "skolem": count_skolem}[request.mode]
    if request.mode == "skolem":
        return fn(request.structure, request.formula, budget=request.budget)
    return fn(request.structure, request.formula, budget=request.budget, workers=workers)


# ---------------------------------------------------------------- enumeration


def _components(A: Structure, q: Query):
    """(name, domain size, table width, base, is relation) for every enumerated symbol, in enumeration order."""
    n = A.size
    comps = [(x, n, 0, n, False) for x in q.freevars]
    comps += [(r, 2 ** (n**a), n**a, 2, True) for r, a in q.relvars.items()]
    comps += [(g, n ** (n**a), n**a, n, False) for g, a in q.funvars.items()]
    return comps


def search_space(A: Structure, phi: Formula | Query) -> int:
    """Number of candidate assignments an exhaustive count must inspect."""
    return prod(c[1] for c in _components(A, as_query(phi)))


def _decode(comps, start: int, stop: int) -> dict[str, np.ndarray]:
    idx = np.arange(start, stop, dtype=np.int64)
    columns = {}
    for name, dom, width, base, is_rel in reversed(comps):
        digit = idx % dom
        idx = idx // dom
        if width == 0:
            columns[name] = digit
            continue
        table = np.empty((stop - start, width), dtype=bool if is_rel else np.int64)
        for j in range(width - 1, -1, -1):
            table[:, j] = digit % base
            digit = digit // base
        columns[name] = table
    return columns


def _enumerate_count(A: Structure, q: Query, budget: int, workers: int) -> int:
    comps = _components(A, q)
    total = prod(c[1] for c in comps)
    if total > budget:
        raise ResourceError(total, budget)
    if total >= _INT64_LIMIT:
        raise ResourceError(total, _INT64_LIMIT - 1)
    chunks = [(s, min(s + CHUNK, total)) for s in range(0, total, CHUNK)]

    def run(chunk):
        start, stop = chunk
        cols = _decode(comps, start, stop)
        env = {x: cols[x] for x in q.freevars}
        tables = {k: v for k, v in cols.items() if k not in env}
        return BatchEvaluator(A, stop - start, tables).count(q.body, env)

    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return sum(pool.map(run, chunks))
    return sum(map(run, chunks))


def count_relational(A: Structure, phi: Formula | Query, budget: int = DEFAULT_BUDGET, workers: int = 1) -> int:
    """Number of (S_1..S_k, c_1..c_l) with A |= phi(S, c)."""
    q = as_query(phi)
    if q.funvars:
        raise PreconditionError(f"relational counting got function variables: {', '.join(q.funvars)}")
    check_symbols(A, q)
    return _enumerate_count(A, q, budget, workers)


def count_functional(A: Structure, phi: Formula | Query, budget: int = DEFAULT_BUDGET, workers: int = 1) -> int:
    """Number of (f_1..f_k, c_1..c_l) with A |= phi(f, c)."""
    q = as_query(phi)
    if q.relvars:
        raise PreconditionError(f"functional counting got relation variables: {', '.join(q.relvars)}")
    check_symbols(A, q)
    return _enumerate_count(A, q, budget, workers)


def count_mixed(A: Structure, phi: Formula | Query, budget: int = DEFAULT_BUDGET, workers: int = 1) -> int:
    """Count assignments to relation and function variables together."""
    q = as_query(phi)
    check_symbols(A, q)
    return _enumerate_count(A, q, budget, workers)


# ---------------------------------------------------------------- Skolem counting


def _sentence_parts(phi: Formula | Query):
    q = as_query(phi)
    if not is_prenex(q.body):
        raise PreconditionError("Skolem counting needs a prenex sentence; formula is not prenex")
    if q.relvars or q.funvars:
        raise PreconditionError("Skolem counting needs a sentence without second-order variables")
    if q.freevars:
        raise PreconditionError(f"Skolem counting needs a sentence; free variables: {', '.join(q.freevars)}")
    return q, split_prenex(q.body)


def count_skolem(A: Structure, phi: Formula | Query, budget: int = DEFAULT_BUDGET) -> int:
    """Number of tuples of Skolem functions for the existential variables of a prenex sentence.

    A Skolem function takes the universally quantified variables to the left
    of its variable. Its values at distinct universal bindings are chosen
    independently, so the count is a sum over existential values nested
    inside a product over universal values.
    """
    q, (prefix, matrix) = _sentence_parts(phi)
    check_symbols(A, q)
    leaves = A.size ** len(prefix)
    if leaves > budget:
        raise ResourceError(leaves, budget)

    def walk(i: int, env: dict[str, int]) -> int:
        if i == len(prefix):
            return int(holds(A, matrix, env, {}, {}))
        quant, var = prefix[i]
        if quant == "E":
            return sum(walk(i + 1, {**env, var: e}) for e in A.universe)
        result = 1
        for e in A.universe:
            result *= walk(i + 1, {**env, var: e})
            if result == 0:
                break
        return result

    return walk(0, {})


def count_universal_fragment(A: Structure, phi: Formula | Query, k: int,
                             budget: int = DEFAULT_BUDGET, workers: int = 1) -> int:
    """count_functional restricted to prenex Pi1 formulas with at most ``k`` universal variables."""
    info = classify_fragment(as_query(phi))
    if not info.in_prenex or not info.in_pi(1):
        raise PreconditionError(f"formula is {info.name}{'' if info.in_prenex else ' (not prenex)'}, not Pi1")
    if info.universal_count > k:
        raise PreconditionError(f"formula has m = {info.universal_count} universal variables, more than k = {k}")
    return count_functional(A, phi, budget=budget, workers=workers)


# ---------------------------------------------------------------- closed form for quantifier-free formulas


@dataclass(frozen=True)
class Occurrence:
    func: str
    index: int  # j: position among the syntactically different inputs of func
    args: tuple
    var: str  # the free variable standing for func(args)


def function_occurrences(q: Query) -> list[Occurrence]:
    """Syntactically different inputs e_ij of each function variable, in order of occurrence."""
    supply = NameSupply(q.names())
    seen: dict[tuple[str, tuple], Occurrence] = {}
    per_func: dict[str, int] = {}
    for t in all_terms(q.body):
        if isinstance(t, App) and (t.func, t.args) not in seen:
            j = per_func.get(t.func, 0)
            per_func[t.func] = j + 1
            seen[(t.func, t.args)] = Occurrence(t.func, j, t.args, supply.fresh(f"d_{t.func}_{j}"))
    # group by function in declaration order, keep first-occurrence order within a function
    order = {g: i for i, g in enumerate(q.funvars)}
    return sorted(seen.values(), key=lambda o: (order[o.func], o.index))


def sigma0_closed_form(A: Structure, phi: Formula | Query) -> int:
    """Count a quantifier-free formula without enumerating function tables.

    Every application F_i(e_ij) is replaced by a free variable d_ij. For each
    choice of the free variables c and values d the number of compatible
    function tuples is

        |G| = [d_ij = d_ij' whenever e_ij = e_ij' for j' < j]
              * n ** (sum_i n**a_i - sum_i m_i)
              * n ** #{(i, j) : S_ij non-empty}

    where m_i counts the different inputs of F_i and S_ij holds the earlier
    inputs of F_i that evaluate to the same tuple as e_ij.
    """
    q = as_query(phi)
    if q.relvars:
        raise PreconditionError("closed form applies to function variables only")
    if not is_quantifier_free(q.body):
        raise PreconditionError("closed form needs a quantifier-free formula")
    for t in all_terms(q.body):
        if isinstance(t, App) and any(isinstance(a, App) for a in t.args):
            raise PreconditionError(f"nested function application {t}; run denest_functions first")
    check_symbols(A, q)
    n = A.size
    occs = function_occurrences(q)
    by_key = {(o.func, o.args): Var(o.var) for o in occs}
    replaced = map_terms(q.body, lambda t: map_apps(t, lambda a: by_key.get((a.func, a.args), a)))
    base_exponent = sum(n**a for a in q.funvars.values()) - len(occs)

    total = 0
    for c in product(range(n), repeat=len(q.freevars)):
        env = dict(zip(q.freevars, c))
        inputs = [tuple(eval_term(A, a, env, {}) for a in o.args) for o in occs]
        # earlier[p] = positions p' < p of the same function whose input evaluates equally
        earlier = [
            [p2 for p2 in range(p) if occs[p2].func == occs[p].func and inputs[p2] == inputs[p]]
            for p in range(len(occs))
        ]
        g_exponent = base_exponent + sum(1 for e in earlier if e)
        for d in product(range(n), repeat=len(occs)):
            if any(d[p] != d[p2] for p in range(len(occs)) for p2 in earlier[p]):
                continue
            full = {**env, **{o.var: v for o, v in zip(occs, d)}}
            if holds(A, replaced, full, {}, {}):
                total += n**g_exponent
    return total


def divisibility_exponents(A: Structure, phi: Formula | Query) -> dict[str, int]:
    """For each function variable of arity >= 1: n**a minus its number of different inputs (floored at 0)."""
    q = as_query(phi)
    occs = function_occurrences(q)
    n = A.size
    return {
        g: max(0, n**a - sum(1 for o in occs if o.func == g))
        for g, a in q.funvars.items() if a >= 1
    }
