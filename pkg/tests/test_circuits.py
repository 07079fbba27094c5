import random
from pathlib import Path

import pytest

from focount.circuits import (
    CIRCUIT_VOCABULARY, Circuit, circuit_from_prenex, circuit_to_structure, count_proof_trees, evaluate,
    format_circuit, parse_circuit, structure_to_circuit,
)
from focount.corpus import (
    IDENTITY_INTERPRETATION, SENTENCE_VOCABULARY, V1, edge_sentence, edge_structure, parity_interpretation,
    random_prenex_sentence, random_structure,
)
from focount.counting import count_skolem
from focount.errors import DomainError, FormatError, InputError, PreconditionError, ResourceError, StructuralError
from focount.interpretations import apply_interpretation, format_interpretation, parse_interpretation
from focount.logic import parse_formula
from focount.structures import Structure, Vocabulary, all_structures, string_structure

from oracles import unfold_proof_trees

FIXTURES = Path(__file__).parent / "fixtures"


def random_dag(rng: random.Random, size: int) -> Circuit:
    """Gates 0..size-1; every gate's children have larger ids, so there is no cycle."""
    kinds, children, leaves = {}, {}, {}
    for g in range(size - 1, -1, -1):
        later = list(range(g + 1, size))
        if not later or rng.random() < 0.3:
            kinds[g] = "LEAF"
            leaves[g] = rng.random() < 0.7
        else:
            kinds[g] = rng.choice(("AND", "OR"))
            children[g] = tuple(rng.sample(later, rng.randint(1, min(3, len(later)))))
    return Circuit(kinds, children, leaves, 0)


class TestEvaluation:
    def test_or_of_two_true_leaves(self):
        C = Circuit({0: "OR", 1: "LEAF", 2: "LEAF"}, {0: (1, 2)}, {1: True, 2: True})
        assert evaluate(C) and count_proof_trees(C) == 2

    def test_and_of_ors(self):
        C = parse_circuit((FIXTURES / "and_of_ors.circuit").read_text())
        assert evaluate(C) and count_proof_trees(C) == 4

    def test_false_leaf(self):
        C = Circuit({0: "AND", 1: "LEAF", 2: "LEAF"}, {0: (1, 2)}, {1: True, 2: False})
        assert not evaluate(C) and count_proof_trees(C) == 0

    def test_shared_subcircuit_counts_each_path(self):
        # 0 = AND(1, 1') where both children are the same OR gate with two true leaves
        C = Circuit({0: "AND", 1: "OR", 2: "LEAF", 3: "LEAF"}, {0: (1, 1), 1: (2, 3)}, {2: True, 3: True})
        assert count_proof_trees(C) == 4 == len(unfold_proof_trees(C))

    def test_unreachable_gates_ignored(self):
        C = Circuit({0: "LEAF", 1: "OR", 2: "LEAF"}, {1: (2,)}, {0: True, 2: False}, root=0)
        assert count_proof_trees(C) == 1 and C.depth() == 1

    @pytest.mark.parametrize("seed", range(50))
    def test_random_dags_against_unfolding(self, seed):
        rng = random.Random(seed)
        C = random_dag(rng, rng.randint(1, 12))
        trees = unfold_proof_trees(C)
        assert count_proof_trees(C) == len(trees)
        assert evaluate(C) == bool(trees)

    def test_cycle(self):
        C = parse_circuit((FIXTURES / "cycle.circuit").read_text())
        with pytest.raises(StructuralError):
            count_proof_trees(C)

    @pytest.mark.parametrize("kinds,children,root", [
        ({0: "XOR"}, {}, 0),
        ({0: "LEAF", 1: "LEAF"}, {0: (1,)}, 0),
        ({0: "AND"}, {}, 0),
        ({0: "OR"}, {0: (5,)}, 0),
        ({0: "LEAF"}, {}, 3),
    ])
    def test_malformed(self, kinds, children, root):
        with pytest.raises(StructuralError):
            Circuit(kinds, children, {}, root)


class TestFromPrenex:
    def test_shape(self):
        A = Structure(V1, 3, {"P": set()})
        C = circuit_from_prenex(A, parse_formula("forall x exists y (y = x)"))
        assert C.kinds[C.root] == "AND" and len(C.children[C.root]) == 3
        assert all(C.kinds[g] == "OR" and len(C.children[g]) == 3 for g in C.children[C.root])
        assert C.depth() == 3
        assert count_proof_trees(C) == count_skolem(A, parse_formula("forall x exists y (y = x)")) == 1

    def test_blocks_merge(self):
        A = Structure(V1, 2, {"P": set()})
        C = circuit_from_prenex(A, parse_formula("forall x forall y exists z (z = z)"))
        assert len(C.children[C.root]) == 4 and C.depth() == 3
        assert count_proof_trees(C) == 2**4

    @pytest.mark.parametrize("m", range(5))
    def test_edge_sentence(self, m):
        C = circuit_from_prenex(edge_structure(m), edge_sentence())
        assert count_proof_trees(C) == 2**m

    @pytest.mark.parametrize("seed", range(30))
    def test_random_sentences(self, seed):
        rng = random.Random(seed)
        q = random_prenex_sentence(rng)
        for n in (1, 2, 3):
            A = random_structure(rng, SENTENCE_VOCABULARY, n)
            C = circuit_from_prenex(A, q)
            assert count_proof_trees(C) == count_skolem(A, q)
            assert evaluate(C) == (count_skolem(A, q) > 0)

    def test_errors(self):
        A = Structure(V1, 3, {"P": set()})
        with pytest.raises(PreconditionError):
            circuit_from_prenex(A, parse_formula("rel P/1; ~exists x P(x)"))
        with pytest.raises(PreconditionError):
            circuit_from_prenex(A, parse_formula("freevar x; exists y (x = y)"))
        with pytest.raises(ResourceError):
            circuit_from_prenex(A, parse_formula("forall x exists y (y = x)"), budget=8)


class TestStructures:
    def test_example(self):
        B = Structure(CIRCUIT_VOCABULARY, 3, {"E": {(0, 1), (0, 2)}, "G_and": set(), "G_or": {(0,)},
                                               "B": {(1,)}, "r": {(0,)}})
        C = structure_to_circuit(B)
        assert C.kinds == {0: "OR", 1: "LEAF", 2: "LEAF"}
        assert count_proof_trees(C) == 1

    def _base(self, **changes):
        rels = {"E": {(0, 1)}, "G_and": {(0,)}, "G_or": set(), "B": {(1,)}, "r": {(0,)}}
        rels.update(changes)
        return Structure(CIRCUIT_VOCABULARY, 2, rels)

    @pytest.mark.parametrize("changes", [
        {"G_or": {(0,)}},
        {"r": set()},
        {"r": {(0,), (1,)}},
        {"E": {(0, 1), (1, 0)}},
        {"E": {(0, 1), (0, 0)}},
    ])
    def test_errors(self, changes):
        with pytest.raises(StructuralError):
            structure_to_circuit(self._base(**changes))

    def test_wrong_vocabulary(self):
        with pytest.raises(StructuralError):
            structure_to_circuit(string_structure("01"))

    @pytest.mark.parametrize("seed", range(20))
    def test_round_trip(self, seed):
        rng = random.Random(seed)
        C = random_dag(rng, rng.randint(1, 10))
        B = circuit_to_structure(C)
        D = structure_to_circuit(B)
        assert count_proof_trees(D) == count_proof_trees(C)
        assert circuit_to_structure(D) == B

    def test_renumbering(self):
        C = Circuit({10: "AND", 20: "LEAF", 30: "LEAF"}, {10: (30, 20)}, {20: True, 30: True}, root=10)
        B = circuit_to_structure(C)
        assert B.size == 3 and B.relations["E"] == {(0, 1), (0, 2)} and B.relations["r"] == {(0,)}


class TestInterpretations:
    def test_identity(self):
        I = parse_interpretation(IDENTITY_INTERPRETATION)
        voc = Vocabulary((("E", 2), ("P", 1)), (), {"LEQ"})
        for A in list(all_structures(voc, 2))[:32]:
            B = apply_interpretation(I, A)
            assert B.size == A.size and B.relations == A.relations

    def test_single_element_universe(self):
        I = parse_interpretation(IDENTITY_INTERPRETATION.replace("universe x := true", "universe x := x <= x /\\ forall y (x <= y)"))
        A = Structure(Vocabulary((("E", 2), ("P", 1)), (), {"LEQ"}), 3, {"E": {(0, 0), (0, 1)}, "P": {(2,)}})
        B = apply_interpretation(I, A)
        assert B.size == 1 and B.relations["E"] == {(0, 0)} and B.relations["P"] == set()

    def test_empty_universe(self):
        I = parse_interpretation(IDENTITY_INTERPRETATION.replace("universe x := true", "universe x := false"))
        A = Structure(Vocabulary((("E", 2), ("P", 1)), (), {"LEQ"}), 2)
        with pytest.raises(DomainError):
            apply_interpretation(I, A)

    @pytest.mark.parametrize("n,expected", [(2, 1), (3, 0), (4, 1), (5, 0), (6, 1)])
    def test_parity_family(self, n, expected):
        I = parity_interpretation()
        for w in ("0" * n, "1" * n, ("01" * n)[:n]):
            C = structure_to_circuit(apply_interpretation(I, string_structure(w, builtins={"LEQ", "BIT", "MIN"})))
            assert count_proof_trees(C) == expected
            assert C.depth() == 2

    def test_width_two(self):
        text = ("width 2\nsource rel S/1\nsource builtin LEQ\ntarget rel P/1\n"
                "universe x1 x2 := x1 <= x2\nrelation P x1 x2 := S(x1) /\\ S(x2)\n")
        I = parse_interpretation(text)
        A = string_structure("011", builtins={"LEQ"})
        B = apply_interpretation(I, A)
        # pairs (a, b) with a <= b in lexicographic order: 00 01 02 11 12 22
        assert B.size == 6 and B.relations["P"] == {(3,), (4,), (5,)}

    def test_commutes_with_renumbering(self):
        # pushing the interpreted circuit through the structure encoding twice changes nothing
        I = parity_interpretation()
        B = apply_interpretation(I, string_structure("0110", builtins={"LEQ", "BIT", "MIN"}))
        C = structure_to_circuit(B)
        assert circuit_to_structure(C) == B

    def test_text_round_trip(self):
        for text in (IDENTITY_INTERPRETATION, (FIXTURES / "parity.interp").read_text()):
            I = parse_interpretation(text)
            assert parse_interpretation(format_interpretation(I)) == I

    @pytest.mark.parametrize("text", [
        "source rel S/1\nuniverse x := true",
        "width 1\nsource rel S/1\ntarget rel P/1\nuniverse x := true",
        "width 1\nsource rel S/1\ntarget rel P/1\nuniverse x := true\nrelation P x y := true",
        "width 1\nuniverse x := y = y",
        "width 1\nbogus line",
    ])
    def test_errors(self, text):
        with pytest.raises(InputError):
            parse_interpretation(text)

    def test_wrong_source(self):
        I = parse_interpretation(IDENTITY_INTERPRETATION)
        with pytest.raises(InputError):
            apply_interpretation(I, string_structure("01"))


class TestTextFormat:
    def test_round_trip(self):
        rng = random.Random(5)
        for _ in range(20):
            C = random_dag(rng, rng.randint(1, 8))
            assert parse_circuit(format_circuit(C)) == C

    def test_comments(self):
        C = parse_circuit("# a comment\nroot 1\n1 or 2,3 # inline\n2 LEAF 0\n3 LEAF 1\n")
        assert count_proof_trees(C) == 1

    @pytest.mark.parametrize("text", [
        "0 LEAF 1",
        "root 0\nroot 0\n0 LEAF 1",
        "root 0\n0 LEAF 2",
        "root 0\n0 AND",
        "root 0\n0 NAND 1",
        "root 0\n0 LEAF 1\n0 LEAF 0",
        "root x",
    ])
    def test_errors(self, text):
        with pytest.raises(FormatError):
            parse_circuit(text)
