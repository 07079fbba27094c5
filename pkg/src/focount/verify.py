"""Verification suites: each checks one exact counting identity on many small instances.

A suite expands into a list of instances. Every instance computes a left
and a right side and passes iff they are equal. Instances run in any order
(optionally on a thread pool) but results are reported by instance index,
so reports are independent of scheduling.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

from . import corpus
from .circuits import circuit_from_prenex, count_proof_trees, structure_to_circuit
from .counting import (
    count_functional, count_relational, count_skolem, count_universal_fragment, divisibility_exponents,
    sigma0_closed_form,
)
from .dnf import (
    PropFormula, build_dnf_structure, cnf_to_dnf_count, phi_3dnf, phi_3dnf_func, random_prop, reduce_dnf,
    truth_table_count,
)
from .interpretations import apply_interpretation
from .logic.syntax import equal_up_to_renaming
from .semantics import Assignment, models
from .structures import BUILTINS, Structure, Vocabulary, encode_structure, string_structure
from .textio import format_structure
from .transforms import (
    deskolemize, denest_functions, freevars_as_functions, relations_to_functions, skolemize, succ_formula, to_pi1,
)


@dataclass(frozen=True)
class Instance:
    label: str
    run: Callable[[], dict]  # returns {"lhs": int, "rhs": int, ...}
    structure: Structure | None = None
    formula: str = ""


def _describe(A: Structure | None) -> dict:
    if A is None:
        return {}
    return {"size": A.size, "encoding": encode_structure(A)}


# ---------------------------------------------------------------- suites


def _fo_eq_pi1(sizes, seed):
    for vname, voc, i, q in corpus.corpus_queries(corpus.FO_CORPUS):
        out = to_pi1(q, voc.builtins)
        for A in corpus.structures_upto(voc, sizes):
            yield Instance(
                f"{vname} formula {i}", lambda A=A, q=q, out=out: {
                    "lhs": count_functional(A, q), "rhs": count_functional(A, out),
                }, A, str(q),
            )


def _rel_eq_func(sizes, seed):
    sizes = [n for n in sizes if n >= 2]
    for vname, voc, i, q in corpus.corpus_queries(corpus.REL_CORPUS):
        out = relations_to_functions(q, voc.builtins)
        for A in corpus.structures_upto(voc, sizes):
            yield Instance(
                f"{vname} formula {i}", lambda A=A, q=q, out=out: {
                    "lhs": count_relational(A, q), "rhs": count_functional(A, out),
                }, A, str(q),
            )


def _sentence_pairs(sizes, seed, sentences: int = 60, per_size: int = 2):
    rng = random.Random(seed)
    voc = corpus.SENTENCE_VOCABULARY
    for k in range(sentences):
        q = corpus.random_prenex_sentence(rng)
        for n in sizes:
            for j in range(per_size):
                yield f"sentence {k} n={n} #{j}", corpus.random_structure(rng, voc, n), q


def _skolem_eq_prefix(sizes, seed):
    for label, A, q in _sentence_pairs(sizes, seed):
        def run(A=A, q=q):
            sk = skolemize(q)
            back = deskolemize(sk)
            return {
                "lhs": count_skolem(A, q), "rhs": count_functional(A, sk),
                "deskolemized": count_skolem(A, back),
                "round_trip": equal_up_to_renaming(skolemize(back), sk),
            }
        yield Instance(label, run, A, str(q))
    rng = random.Random(seed)
    for vname, voc, i, q in corpus.corpus_queries(corpus.PREFIX_CORPUS):
        for n in sizes:
            A = corpus.random_structure(rng, voc, n)

            def run(A=A, q=q):
                back = deskolemize(q)
                return {
                    "lhs": count_functional(A, q), "rhs": count_skolem(A, back),
                    "round_trip": equal_up_to_renaming(skolemize(back), freevars_as_functions(q)),
                }
            yield Instance(f"prefix {vname} formula {i} n={n}", run, A, str(q))


def _skolem_eq_prooftrees(sizes, seed):
    for label, A, q in _sentence_pairs(sizes, seed):
        yield Instance(label, lambda A=A, q=q: {
            "lhs": count_skolem(A, q), "rhs": count_proof_trees(circuit_from_prenex(A, q)),
        }, A, str(q))


def _sigma0_closed_form(sizes, seed):
    for vname, voc, i, q in corpus.corpus_queries(corpus.QF_CORPUS, {"V1": corpus.V1}):
        flat = denest_functions(q)
        for A in corpus.structures_upto(voc, sizes):
            def run(A=A, q=q, flat=flat):
                brute = count_functional(A, q)
                closed = sigma0_closed_form(A, flat)
                divides = all(
                    brute % (A.size**e) == 0 for e in divisibility_exponents(A, flat).values()
                )
                return {"lhs": brute, "rhs": closed, "divisible": divides}
            yield Instance(f"{vname} formula {i}", run, A, str(q))


def _succ_unique(sizes, seed):
    phi = succ_formula()
    for n in sizes:
        A = Structure(Vocabulary((), (), BUILTINS), n)

        def run(A=A):
            n = A.size
            s = {(e,): min(e + 1, n - 1) for e in range(n)}
            p = {(e,): max(e - 1, 0) for e in range(n)}
            return {
                "lhs": count_universal_fragment(A, phi, k=1), "rhs": 1,
                "successor_tables_satisfy": models(A, phi, Assignment(functions={"s": s, "p": p})),
            }
        yield Instance(f"n={n}", run, A, str(phi))


def _dnf_instances(sizes, seed, count, kind="dnf"):
    rng = random.Random(seed)
    lo, hi = max(1, min(sizes)), max(1, max(sizes))
    for k in range(count):
        yield k, random_prop(rng, rng.randint(lo, hi), rng.randint(1, 4), kind)


def _dnf_example(sizes, seed):
    fixed = PropFormula(2, ((1, 2, 2),))
    items = [("fixed (x0 /\\ x1 /\\ x1)", fixed)]
    items += [(f"random {k}", psi) for k, psi in _dnf_instances(sizes, seed, 20)]
    for label, psi in items:
        A = build_dnf_structure(psi)
        yield Instance(label, lambda A=A, psi=psi: {
            "lhs": count_relational(A, phi_3dnf()), "rhs": truth_table_count(psi),
        }, A, str(psi).replace("\n", " | "))


def _dnf_func_reduction(sizes, seed):
    items = [("fixed (x0 /\\ x1 /\\ x1)", PropFormula(2, ((1, 2, 2),)))]
    items += [(f"random {k}", psi) for k, psi in _dnf_instances(sizes, seed, 10)]
    for label, psi in items:
        A = build_dnf_structure(psi)

        def run(A=A):
            bigger, scale = reduce_dnf(A)
            return {
                "lhs": count_functional(bigger, phi_3dnf_func()),
                "rhs": count_relational(A, phi_3dnf()) * scale, "scale": scale,
            }
        yield Instance(label, run, A, str(psi).replace("\n", " | "))


def _cnf_dnf_reduction(sizes, seed):
    items = [("fixed (x0 \\/ x1)", PropFormula(2, ((1, 2),), "cnf")),
             ("fixed (x0) /\\ (~x0)", PropFormula(1, ((1,), (-1,)), "cnf"))]
    items += [(f"random {k}", psi) for k, psi in _dnf_instances(sizes, seed, 20, "cnf")]
    for label, psi in items:
        yield Instance(label, lambda psi=psi: {
            "lhs": cnf_to_dnf_count(psi), "rhs": truth_table_count(psi),
        }, None, str(psi).replace("\n", " | "))


def _edge_skolem(sizes, seed):
    phi = corpus.edge_sentence()
    for m in sizes:
        A = corpus.edge_structure(m)
        yield Instance(f"|E|={m}", lambda A=A, m=m: {
            "lhs": count_skolem(A, phi), "rhs": 2**m,
            "proof_trees": count_proof_trees(circuit_from_prenex(A, phi)),
        }, A, str(phi))


def _parity_family(sizes, seed):
    interp = corpus.parity_interpretation()
    rng = random.Random(seed)
    for n in sizes:
        w = "".join(rng.choice("01") for _ in range(n))
        A = string_structure(w, builtins=("LEQ", "BIT", "MIN"))
        yield Instance(f"n={n} w={w}", lambda A=A, n=n: {
            "lhs": count_proof_trees(structure_to_circuit(apply_interpretation(interp, A))),
            "rhs": 1 if n % 2 == 0 else 0,
        }, A, "parity interpretation")


@dataclass(frozen=True)
class Suite:
    name: str
    build: Callable
    default_sizes: tuple[int, int]
    description: str


SUITES = {s.name: s for s in (
    Suite("fo-eq-pi1", _fo_eq_pi1, (1, 3), "to_pi1 preserves functional counts"),
    Suite("rel-eq-func", _rel_eq_func, (2, 3), "relations_to_functions turns relational into equal functional counts"),
    Suite("skolem-eq-prefix", _skolem_eq_prefix, (2, 3), "Skolem counts equal prefix-restricted Pi1 counts"),
    Suite("skolem-eq-prooftrees", _skolem_eq_prooftrees, (2, 3), "Skolem counts equal proof-tree counts"),
    Suite("sigma0-closed-form", _sigma0_closed_form, (1, 3), "closed form equals brute force on quantifier-free formulas"),
    Suite("succ-unique", _succ_unique, (1, 5), "the successor formula has exactly one model"),
    Suite("dnf-example", _dnf_example, (1, 4), "the 3DNF formula counts satisfying assignments"),
    Suite("dnf-func-reduction", _dnf_func_reduction, (2, 2), "function encoding scales the 3DNF count by n^(2n) 2^n"),
    Suite("cnf-dnf-reduction", _cnf_dnf_reduction, (1, 4), "3CNF counts via 2^n minus 3DNF counts"),
    Suite("edge-skolem", _edge_skolem, (0, 4), "one binary choice per edge gives 2^|E| Skolem functions"),
    Suite("parity-family", _parity_family, (2, 5), "interpreted parity circuits have 1 proof tree iff n is even"),
)}

# extra side conditions reported by some suites; each must be true
_FLAGS = ("divisible", "round_trip", "successor_tables_satisfy")
# extra counts that must equal lhs
_ALSO_EQUAL = ("deskolemized", "proof_trees")


def _check(result: dict) -> bool:
    ok = result["lhs"] == result["rhs"]
    ok &= all(result[k] for k in _FLAGS if k in result)
    ok &= all(result[k] == result["lhs"] for k in _ALSO_EQUAL if k in result)
    return bool(ok)


def run_suite(name: str, sizes: tuple[int, int] | None = None, seed: int = 0, jobs: int = 1) -> dict:
    """Run a suite and return a JSON-ready report; counts are decimal strings."""
    suite = SUITES[name]
    lo, hi = sizes or suite.default_sizes
    instances = list(suite.build(range(lo, hi + 1), seed))

    def execute(inst: Instance) -> dict:
        result = inst.run()
        return {k: (str(v) if isinstance(v, int) and not isinstance(v, bool) else v) for k, v in result.items()} | {
            "ok": _check(result),
        }

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(execute, instances))
    else:
        results = [execute(inst) for inst in instances]

    rows = []
    first_failure = None
    for index, (inst, res) in enumerate(zip(instances, results)):
        row = {"index": index, "label": inst.label, **_describe(inst.structure), **res}
        rows.append(row)
        if not res["ok"] and first_failure is None:
            first_failure = {
                **row, "formula": inst.formula,
                "structure": format_structure(inst.structure) if inst.structure else None,
            }
    failures = sum(1 for r in rows if not r["ok"])
    return {
        "suite": name,
        "description": suite.description,
        "sizes": f"{lo}..{hi}",
        "seed": seed,
        "instances": rows,
        "checked": len(rows),
        "failures": failures,
        "passed": failures == 0,
        "counterexample": first_failure,
    }


def parse_sizes(text: str) -> tuple[int, int]:
    """Read ``A..B`` (or a single ``N``) into an inclusive range."""
    lo, sep, hi = text.partition("..")
    try:
        bounds = (int(lo), int(hi if sep else lo))
    except ValueError:
        raise ValueError(f"sizes must look like A..B, got {text!r}") from None
    if bounds[0] > bounds[1] or bounds[0] < 0:
        raise ValueError(f"empty or negative size range {text!r}")
    return bounds


__all__ = ["Instance", "SUITES", "Suite", "parse_sizes", "run_suite"]
