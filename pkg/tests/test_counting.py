import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from focount.corpus import (
    EDGE_ORDER, FO_CORPUS, QF_CORPUS, REL_CORPUS, SENTENCE_VOCABULARY, V1, V2, corpus_queries, edge_sentence,
    edge_structure, random_prenex_sentence, random_structure,
    uses_constant,
)
from focount.counting import (
    CountRequest, count, count_functional, count_mixed, count_relational, count_skolem, count_universal_fragment,
    divisibility_exponents, search_space, sigma0_closed_form,
)
from focount.errors import DomainError, PreconditionError, ResourceError, UnknownSymbolError
from focount.logic import parse_formula
from focount.logic.normal import split_prenex
from focount.semantics import Assignment, models
from focount.structures import Structure, all_structures
from focount.transforms import denest_functions

from oracles import naive_count, oracle_holds, skolem_table_count

A1 = Structure(V1, 2, {"P": {(1,)}})
A2 = Structure(V2, 3, {"P": {(0,), (2,)}}, {"c": 1})

# counts obtained from the nested-loop oracle in tests/oracles.py
FO_ON_A1 = [3, 4, 2, 4, 4, 4, 3, 5, 4, 12, 3, 2, 3, 4, 4, 3, 2, 4, 2]
FO_ON_A2 = [19, 23, 6, 27, 27, 45, 26, 55, 27, 13851, 12, 21, 26, 27, 36, 19, 24, 54, 24, 9]
REL_ON_A2 = [4, 8, 3, 2, 27, 64, 8, 4, 1, 4, 8, 6, 343, 37, 6, 64, 7, 3, 4, 5]
QF_ON_A2 = [9, 81, 18, 117, 729, 32805, 45, 18, 108, 2, 6, 1944]


class TestModels:
    def test_identity_function(self):
        q = parse_formula("funvar F/1; forall x (F(x) = x)")
        A = Structure(V1, 3, {"P": set()})
        assert models(A, q, Assignment(functions={"F": {(i,): i for i in range(3)}}))
        assert not models(A, q, Assignment(functions={"F": {(0,): 0, (1,): 2, (2,): 2}}))

    def test_relation_variable(self):
        q = parse_formula("relvar R/1; exists x R(x) /\\ ~R(max)")
        assert models(A1, q, Assignment(relations={"R": frozenset({(0,)})}))
        assert not models(A1, q, Assignment(relations={"R": frozenset({(1,)})}))

    def test_free_individual(self):
        q = parse_formula("rel P/1; freevar x; P(x)")
        assert models(A1, q, Assignment(individuals={"x": 1}))
        assert not models(A1, q, Assignment(individuals={"x": 0}))

    def test_out_of_range_value(self):
        q = parse_formula("freevar x; x = x")
        with pytest.raises(DomainError):
            models(A1, q, Assignment(individuals={"x": 2}))

    def test_partial_function(self):
        q = parse_formula("funvar F/1; F(min) = min")
        with pytest.raises(DomainError):
            models(A1, q, Assignment(functions={"F": {(0,): 0}}))

    def test_missing_vocabulary_symbol(self):
        q = parse_formula("rel Q/1; Q(min)")
        with pytest.raises(UnknownSymbolError):
            models(A1, q)


class TestFrozenCounts:
    @pytest.mark.parametrize("i,expected", list(enumerate(FO_ON_A1)))
    def test_fo_on_v1(self, i, expected):
        assert count_functional(A1, parse_formula(FO_CORPUS[i], V1)) == expected

    @pytest.mark.parametrize("i,expected", list(enumerate(FO_ON_A2)))
    def test_fo_on_v2(self, i, expected):
        assert count_functional(A2, parse_formula(FO_CORPUS[i], V2)) == expected

    @pytest.mark.parametrize("i,expected", list(enumerate(REL_ON_A2)))
    def test_rel_on_v2(self, i, expected):
        assert count_relational(A2, parse_formula(REL_CORPUS[i], V2)) == expected

    @pytest.mark.parametrize("i,expected", list(enumerate(QF_ON_A2)))
    def test_qf_on_v2(self, i, expected):
        assert count_functional(A2, parse_formula(QF_CORPUS[i], V2)) == expected


def _random_cases(count=100, seed=3):
    rng = random.Random(seed)
    texts = FO_CORPUS + REL_CORPUS + QF_CORPUS
    out = []
    for _ in range(count):
        text = rng.choice(texts)
        voc = V2 if uses_constant(text) else rng.choice((V1, V2))
        n = rng.choice((1, 2)) if "F/2" in text else rng.choice((1, 2, 3))
        out.append((text, random_structure(rng, voc, n, density=0.5)))
    return out


@pytest.mark.parametrize("text,A", _random_cases())
def test_vectorized_counter_agrees_with_nested_loops(text, A):
    q = parse_formula(text, A.vocabulary)
    assert count_mixed(A, q) == naive_count(A, q)


@pytest.mark.parametrize("seed", range(20))
def test_single_assignment_evaluator_agrees_with_oracle(seed):
    rng = random.Random(seed)
    text = rng.choice(FO_CORPUS[:19])
    A = random_structure(rng, V2, rng.choice((2, 3)))
    q = parse_formula(text, V2)
    n = A.size
    for _ in range(10):
        funcs = {g: {t: rng.randrange(n) for t in product(range(n), repeat=a)} for g, a in q.funvars.items()}
        env = {x: rng.randrange(n) for x in q.freevars}
        assert models(A, q, Assignment(env, {}, funcs)) == oracle_holds(A, q.body, env, {}, funcs)


class TestExamples:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_identity_is_unique(self, n):
        q = parse_formula("funvar F/1; forall x (F(x) = x)")
        assert count_functional(Structure(V1, n, {"P": set()}), q) == 1

    def test_skolem_trivial_witness(self):
        A = Structure(V1, 3, {"P": set()})
        assert count_skolem(A, parse_formula("forall x exists y (y = y)")) == 27

    @pytest.mark.parametrize("m", range(len(EDGE_ORDER) + 1))
    def test_edge_sentence(self, m):
        assert count_skolem(edge_structure(m), edge_sentence()) == 2**m

    def test_edge_sentence_three_edges(self):
        assert count_skolem(edge_structure(3), edge_sentence()) == 8

    def test_relational_free_relation(self):
        q = parse_formula("relvar R/2; true")
        assert count_relational(Structure(V1, 2, {"P": set()}), q) == 16

    def test_mode_mismatch(self):
        with pytest.raises(PreconditionError):
            count_relational(A1, parse_formula("funvar F/1; F(min) = min"))
        with pytest.raises(PreconditionError):
            count_functional(A1, parse_formula("relvar R/1; R(min)"))

    def test_count_request(self):
        q = parse_formula("funvar F/1; F(min) = min")
        assert count(CountRequest(A1, q, "functional")) == 2
        with pytest.raises(ValueError):
            CountRequest(A1, q, "bogus")


@pytest.mark.parametrize("text", [
    "rel P/1; P({x}) \\/ {x} = max",
    "rel P/1; exists y ({x} <= y /\\ P(y))",
    "rel P/1; forall y (y < {x} -> ~P(y))",
])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_nullary_function_counts_like_free_individual(text, n):
    as_fun = parse_formula("funvar g/0; " + text.format(x="g"), V1)
    as_var = parse_formula("freevar x; " + text.format(x="x"), V1)
    for A in all_structures(V1, n):
        assert count_functional(A, as_fun) == count_functional(A, as_var)


class TestClosedForm:
    def test_examples(self):
        assert sigma0_closed_form(A1, parse_formula("funvar F/1; F(min) = min")) == 2
        assert sigma0_closed_form(A1, parse_formula("funvar F/2; F(min, min) = min")) == 8

    @pytest.mark.parametrize("i", range(len(QF_CORPUS)))
    def test_matches_enumeration(self, i):
        text = QF_CORPUS[i]
        for n in (1, 2, 3):
            if "F/2" in text and n == 3:
                continue
            for A in all_structures(V1, n):
                q = denest_functions(parse_formula(text, V1))
                assert sigma0_closed_form(A, q) == count_functional(A, q) == naive_count(A, parse_formula(text, V1))

    @pytest.mark.parametrize("i", range(len(QF_CORPUS)))
    def test_divisibility(self, i):
        for A in all_structures(V1, 2):
            q = denest_functions(parse_formula(QF_CORPUS[i], V1))
            value = count_functional(A, q)
            for g, e in divisibility_exponents(A, q).items():
                assert value % (A.size**e) == 0

    def test_rejects_quantifiers_and_nesting(self):
        with pytest.raises(PreconditionError):
            sigma0_closed_form(A1, parse_formula("funvar F/1; exists x F(x) = x"))
        with pytest.raises(PreconditionError):
            sigma0_closed_form(A1, parse_formula("funvar F/1; F(F(min)) = min"))


class TestSkolem:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_product_over_universal(self, n):
        q = parse_formula("rel P/1; forall z exists y (P(y) \\/ y <= z)", V1)
        for A in all_structures(V1, n):
            expected = 1
            for z in range(n):
                expected *= sum(1 for y in range(n) if (y,) in A.relations["P"] or y <= z)
            assert count_skolem(A, q) == expected

    @pytest.mark.parametrize("seed", range(40))
    def test_matches_table_enumeration(self, seed):
        rng = random.Random(seed)
        q = random_prenex_sentence(rng, max_space=20_000)
        for n in (1, 2, 3):
            A = random_structure(rng, SENTENCE_VOCABULARY, n)
            assert count_skolem(A, q) == skolem_table_count(A, q)

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            count_skolem(A1, parse_formula("rel P/1; ~exists x P(x)"))
        with pytest.raises(PreconditionError):
            count_skolem(A1, parse_formula("freevar x; exists y (x = y)"))
        with pytest.raises(PreconditionError):
            count_skolem(A1, parse_formula("funvar F/1; forall x (F(x) = x)"))

    def test_prefix_split(self):
        prefix, _ = split_prenex(edge_sentence().body)
        assert [q for q, _ in prefix] == ["A", "A", "E"]


class TestBudget:
    def test_resource_error_message(self):
        q = parse_formula("funvar F/1; F(min) = min")
        A = Structure(V1, 3, {"P": set()})
        assert search_space(A, q) == 27
        with pytest.raises(ResourceError) as info:
            count_functional(A, q, budget=26)
        assert info.value.required == 27 and info.value.budget == 26
        assert "--budget 27" in str(info.value)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 200), st.integers(0, 200))
    def test_monotone(self, budget, extra):
        q = parse_formula("funvar F/1; freevar x; exists y (F(y) = x)")
        A = Structure(V1, 2, {"P": set()})
        try:
            low = count_functional(A, q, budget=budget)
        except ResourceError:
            low = None
        high = count_functional(A, q, budget=budget + extra) if low is not None else None
        assert low == high
        if budget >= search_space(A, q):
            assert low == naive_count(A, q)

    def test_skolem_budget(self):
        with pytest.raises(ResourceError):
            count_skolem(edge_structure(3), edge_sentence(), budget=63)
        assert count_skolem(edge_structure(3), edge_sentence(), budget=64) == 8

    def test_workers_do_not_change_counts(self):
        q = parse_formula("funvar F/2; exists y (F(y, y) = y)", V1)
        A = Structure(V1, 3, {"P": {(1,)}})
        assert count_functional(A, q, workers=4) == count_functional(A, q, workers=1) == 13851


class TestUniversalFragment:
    def test_rejects_too_many_universals(self):
        q = parse_formula("funvar F/1; forall x1 forall x2 (F(x1) = x2 -> x1 = x2)")
        with pytest.raises(PreconditionError):
            count_universal_fragment(A1, q, 1)
        assert count_universal_fragment(A1, q, 2) == count_functional(A1, q)

    def test_rejects_existentials(self):
        with pytest.raises(PreconditionError):
            count_universal_fragment(A1, parse_formula("funvar F/1; exists x (F(x) = x)"), 3)

    def test_accepts_pi1(self):
        q = parse_formula("funvar F/1; forall x (F(x) = x)")
        assert count_universal_fragment(A1, q, 1) == 1


def test_corpus_queries_skip_constant_formulas_on_v1():
    labels = [(v, i) for v, _, i, _ in corpus_queries(FO_CORPUS)]
    assert ("V1", 19) not in labels and ("V2", 19) in labels


def test_closed_form_with_repeated_occurrence():
    # F(x) = F(x): the second occurrence repeats the first, so every (x, F) pair counts
    q = parse_formula("funvar F/1; freevar x; F(x) = F(x)", V1)
    assert sigma0_closed_form(A1, q) == 8 == count_functional(A1, q)


def test_closed_form_without_functions_counts_bindings():
    q = parse_formula("rel P/1; freevar x, y; P(x) \\/ x = y", V1)
    assert sigma0_closed_form(A1, q) == count_functional(A1, q) == 3


def test_universal_fragment_error_names_m():
    q = parse_formula("funvar F/1; forall x1 forall x2 (F(x1) = x2)")
    with pytest.raises(PreconditionError, match="m = 2"):
        count_universal_fragment(A1, q, 1)
