"""Fixed fixtures, formula corpora and seeded random instances for the verification suites."""

from __future__ import annotations

import random
from itertools import product

from .interpretations import Interpretation, parse_interpretation
from .logic.normal import build_prenex
from .logic.parser import parse_document
from .logic.syntax import (
    And, BuiltinAtom, Const, Eq, Formula, Implies, Max, Min, Not, Or, Query, Rel, Var,
)
from .structures import Structure, Vocabulary, all_structures

ORDER_BUILTINS = frozenset({"LEQ", "LT", "BIT", "MIN", "MAX"})

# the two vocabularies the count-preservation corpora are run over
V1 = Vocabulary((("P", 1),), (), ORDER_BUILTINS)
V2 = Vocabulary((("P", 1),), ("c",), ORDER_BUILTINS)
TEST_VOCABULARIES = {"V1": V1, "V2": V2}

FO_CORPUS = (
    "funvar F/1; exists y (F(y) = min)",
    "funvar F/1; (exists y (F(y) = min)) \\/ F(max) = max",
    "funvar F/1; forall x exists y (F(y) = x)",
    "funvar F/1; exists y forall z (F(z) = y -> P(z))",
    "funvar F/1; exists x forall y (F(y) <= F(x))",
    "funvar F/1; freevar x; exists y (F(y) = x /\\ P(y))",
    "funvar F/1; ~forall x (F(x) = x)",
    "funvar G/0; funvar F/1; forall x (F(x) = G) \\/ exists y (P(y) /\\ F(y) < y)",
    "funvar F/1; exists y (P(y) /\\ forall z (F(z) = z -> z <= y))",
    "funvar F/2; exists y (F(y, y) = y)",
    "funvar F/1; forall x (P(x) -> exists y (F(y) = x))",
    "funvar F/1; exists x exists y (~(x = y) /\\ F(x) = F(y))",
    "funvar F/1; forall x (F(x) = F(F(x))) -> exists y P(F(y))",
    "funvar F/1; exists y forall z (F(z) = y \\/ P(z))",
    "funvar F/1; freevar x; forall y (F(y) = x -> y = x)",
    "funvar F/1; exists y BIT(min, F(y))",
    "funvar F/1; exists y forall z (F(z) = F(y) -> z = y)",
    "funvar F/1; freevar x; exists y (F(y) = x) /\\ exists z ~(F(z) = x)",
    "funvar F/1; ~exists y forall z (F(z) = y)",
    "funvar F/1; exists y (y = c /\\ F(y) = y) \\/ forall x (F(x) = c)",
)

REL_CORPUS = (
    "relvar R/1; R(min)",
    "relvar R/1; true",
    "relvar R/1; exists x R(x) /\\ ~R(max)",
    "relvar R/1; forall x (P(x) -> R(x))",
    "relvar R/1; relvar T/1; forall x (R(x) -> T(x))",
    "relvar R/2; forall x ~R(x, x)",
    "relvar R/1; freevar x; R(x) /\\ P(x)",
    "relvar R/1; exists x exists y (~(x = y) /\\ R(x) /\\ R(y))",
    "relvar R/1; forall x (R(x) -> exists y (y < x /\\ R(y)))",
    "relvar R/1; exists x (R(x) /\\ x = c)",
    "relvar R/1; exists x forall y (R(y) -> y <= x)",
    "relvar R/1; (forall x exists y (R(y) /\\ x <= y)) \\/ ~R(min)",
    "relvar R/2; forall x exists y R(x, y)",
    "relvar R/1; relvar T/1; exists x (R(x) /\\ ~T(x))",
    "relvar R/1; freevar x; forall y (R(y) -> y = x)",
    "relvar R/2; forall x forall y (R(x, y) -> R(y, x))",
    "relvar R/1; exists x exists y forall z (R(z) -> (z = x \\/ z = y))",
    "relvar R/1; (forall x (R(x) -> P(x))) /\\ exists y R(y)",
    "relvar R/1; ~exists x (R(x) /\\ BIT(min, x))",
    "relvar R/1; exists x (R(x) /\\ P(x) /\\ forall y (y < x -> ~R(y)))",
)

QF_CORPUS = (
    "funvar F/1; F(min) = min",
    "funvar F/1; freevar x; F(x) = F(x)",
    "funvar F/1; freevar x; F(x) = x /\\ P(x)",
    "funvar F/1; freevar x, y; F(x) = y \\/ F(y) = x",
    "funvar F/1; funvar G/1; freevar x; F(G(x)) = min",
    "funvar F/2; freevar x; F(x, min) = F(min, x)",
    "funvar F/1; funvar G/0; P(F(G)) -> G = max",
    "funvar F/1; freevar x; ~(F(x) = x) /\\ F(F(x)) = x",
    "funvar F/1; freevar x, y; F(x) <= F(y) /\\ ~(x = y)",
    "freevar x; P(x) \\/ x = min",
    "funvar F/1; BIT(min, F(max)) /\\ P(F(min))",
    "funvar F/1; funvar G/1; freevar x; F(x) = G(x) -> P(x)",
)

# prefix-restricted Pi1 formulas with free individual variables and nullary functions
PREFIX_CORPUS = (
    "funvar F/1; forall y1 (F(y1) = min)",
    "funvar F/1; funvar G/1; forall y1 (F(y1) = G(y1) -> P(y1))",
    "funvar F/2; funvar G/1; forall y1 forall y2 (F(y1, y2) = y1 \\/ G(y1) = y2)",
    "funvar g/0; freevar x; forall y1 (P(y1) -> y1 <= g \\/ y1 = x)",
    "funvar F/1; funvar g/0; forall y1 forall y2 (F(y1) = g -> P(y2))",
)


def _parse(text: str, vocabulary: Vocabulary) -> Query:
    return parse_document(text, vocabulary).query


def uses_constant(text: str) -> bool:
    return any(tok == "c" for tok in text.replace("(", " ").replace(")", " ").replace(",", " ").split())


def corpus_queries(texts, vocabularies=TEST_VOCABULARIES):
    """(vocabulary name, vocabulary, corpus index, query) for every formula each vocabulary can express."""
    for name, voc in vocabularies.items():
        for i, text in enumerate(texts):
            if uses_constant(text) and "c" not in voc.constants:
                continue
            yield name, voc, i, _parse(text, voc)


def structures_upto(voc: Vocabulary, sizes) -> list[Structure]:
    return [A for n in sizes for A in all_structures(voc, n)]


# ---------------------------------------------------------------- edge fixture: one free choice per edge

EDGE_VOCABULARY = Vocabulary((("E", 2),), ("c", "d"), ORDER_BUILTINS)
EDGE_SENTENCE = "forall x forall y exists z ((E(x,y) -> (z = c \\/ z = d)) /\\ (~E(x,y) -> z = c))"
EDGE_ORDER = ((0, 1), (1, 2), (2, 0), (0, 3))


def edge_sentence() -> Query:
    return _parse(EDGE_SENTENCE, EDGE_VOCABULARY)


def edge_structure(num_edges: int, size: int = 4) -> Structure:
    """Four elements, c = 0, d = 1, and the first ``num_edges`` edges of a fixed list."""
    if not 0 <= num_edges <= len(EDGE_ORDER):
        raise ValueError(f"edge fixture has between 0 and {len(EDGE_ORDER)} edges")
    return Structure(EDGE_VOCABULARY, size, {"E": set(EDGE_ORDER[:num_edges])}, {"c": 0, "d": 1})


# ---------------------------------------------------------------- parity circuits from strings

PARITY_INTERPRETATION = """\
# one gate per position: position 0 is an AND root over all other positions,
# which are leaves that are true exactly when the length is even
width 1
source rel S/1
source builtin LEQ BIT MIN
target rel E/2
target rel G_and/1
target rel G_or/1
target rel B/1
target rel r/1
universe x := x = x
relation E x y := x = min /\\ ~(y = min)
relation G_and x := x = min
relation G_or x := ~(x = x)
relation B x := ~(x = min) /\\ exists m (forall y (y <= m) /\\ BIT(min, m))
relation r x := x = min
"""


def parity_interpretation() -> Interpretation:
    return parse_interpretation(PARITY_INTERPRETATION)


IDENTITY_INTERPRETATION = """\
width 1
source rel E/2
source rel P/1
source builtin LEQ
target rel E/2
target rel P/1
universe x := true
relation E x y := E(x, y)
relation P x := P(x)
"""


# ---------------------------------------------------------------- random prenex sentences

SENTENCE_VOCABULARY = Vocabulary((("E", 2), ("P", 1)), ("c",), ORDER_BUILTINS)


def _random_term(rng: random.Random, names: list[str]):
    roll = rng.random()
    if roll < 0.75:
        return Var(rng.choice(names))
    return rng.choice((Const("c"), Min(), Max()))


def _random_atom(rng: random.Random, names: list[str]) -> Formula:
    kind = rng.choice(("E", "E", "P", "P", "eq", "lt", "leq"))
    if kind == "E":
        return Rel("E", (_random_term(rng, names), _random_term(rng, names)))
    if kind == "P":
        return Rel("P", (_random_term(rng, names),))
    left, right = _random_term(rng, names), _random_term(rng, names)
    if kind == "eq":
        return Eq(left, right)
    return BuiltinAtom("LT" if kind == "lt" else "LEQ", left, right)


def random_matrix(rng: random.Random, names: list[str], depth: int = 2) -> Formula:
    if depth == 0 or rng.random() < 0.3:
        atom = _random_atom(rng, names)
        return Not(atom) if rng.random() < 0.3 else atom
    kind = rng.choice(("and", "or", "imp", "not"))
    if kind == "not":
        return Not(random_matrix(rng, names, depth - 1))
    left, right = random_matrix(rng, names, depth - 1), random_matrix(rng, names, depth - 1)
    if kind == "imp":
        return Implies(left, right)
    return (And if kind == "and" else Or)((left, right))


def skolem_table_space(prefix, n: int) -> int:
    """Number of candidate Skolem-function tuples for a prefix on a universe of size n."""
    total, universals = 1, 0
    for quant, _ in prefix:
        if quant == "A":
            universals += 1
        else:
            total *= n ** (n**universals)
    return total


def random_prenex_sentence(rng: random.Random, max_blocks: int = 3, max_vars: int = 4,
                           max_space: int = 200_000, space_size: int = 3) -> Query:
    """A random prenex sentence over E/2, P/1 and c with at most ``max_blocks`` quantifier blocks.

    Sentences whose Skolem-function space at ``space_size`` exceeds
    ``max_space`` are redrawn, so brute-force cross-checks stay cheap.
    """
    while True:
        num_blocks = rng.randint(1, max_blocks)
        first = rng.choice("AE")
        prefix = []
        names = iter(("x", "y", "z", "u", "v", "w"))
        for b in range(num_blocks):
            quant = first if b % 2 == 0 else ("E" if first == "A" else "A")
            for _ in range(rng.randint(1, 2)):
                prefix.append((quant, next(names)))
        if len(prefix) > max_vars or skolem_table_space(prefix, space_size) > max_space:
            continue
        matrix = random_matrix(rng, [v for _, v in prefix])
        return Query(build_prenex(prefix, matrix))


def random_structure(rng: random.Random, voc: Vocabulary, n: int, density: float = 0.4) -> Structure:
    rels = {
        name: {t for t in product(range(n), repeat=arity) if rng.random() < density}
        for name, arity in voc.relations
    }
    consts = {c: rng.randrange(n) for c in voc.constants}
    return Structure(voc, n, rels, consts)


__all__ = [
    "EDGE_SENTENCE", "EDGE_VOCABULARY", "FO_CORPUS", "IDENTITY_INTERPRETATION", "ORDER_BUILTINS",
    "PARITY_INTERPRETATION", "PREFIX_CORPUS", "QF_CORPUS", "REL_CORPUS", "SENTENCE_VOCABULARY",
    "TEST_VOCABULARIES", "V1", "V2", "corpus_queries", "edge_sentence", "edge_structure",
    "parity_interpretation", "random_matrix", "random_prenex_sentence", "random_structure",
    "skolem_table_space", "structures_upto",
]
