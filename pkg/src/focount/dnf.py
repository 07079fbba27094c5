"""Propositional 3DNF/3CNF formulas and their first-order counting encodings.

Literals use the signed-integer convention of DIMACS files: ``k`` is the
variable x_{k-1} and ``-k`` its negation, so ``1 -2 2`` is the term
x0 /\\ ~x1 /\\ x1 (or the clause x0 \\/ ~x1 \\/ x1 in CNF). A line may end
with a terminating ``0``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Callable

from .counting import count_relational
from .errors import EncodingError, FormatError
from .logic.syntax import And, App, BuiltinAtom, Exists, Min, Not, Or, Query, Rel, RelVar, Var
from .structures import Structure, Vocabulary, extend_universe

DNF_RELATIONS = ("D0", "D1", "D2", "D3")
DNF_VOCABULARY = Vocabulary(tuple((r, 3) for r in DNF_RELATIONS), (), frozenset({"LEQ", "BIT", "MIN"}))


@dataclass(frozen=True)
class PropFormula:
    """A DNF (disjunction of terms) or CNF (conjunction of clauses) over x0..x_{n-1}."""

    num_vars: int
    parts: tuple[tuple[int, ...], ...]
    kind: str = "dnf"  # "dnf" | "cnf"

    def __post_init__(self):
        if self.kind not in ("dnf", "cnf"):
            raise ValueError(f"kind must be 'dnf' or 'cnf', got {self.kind!r}")
        object.__setattr__(self, "parts", tuple(tuple(p) for p in self.parts))
        for part in self.parts:
            for lit in part:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise EncodingError(f"literal {lit} does not name one of the {self.num_vars} variables")

    def evaluate(self, values: tuple[bool, ...]) -> bool:
        def lit(v: int) -> bool:
            return values[abs(v) - 1] == (v > 0)

        if self.kind == "dnf":
            return any(all(lit(v) for v in term) for term in self.parts)
        return all(any(lit(v) for v in clause) for clause in self.parts)

    def __str__(self) -> str:
        return "\n".join(" ".join(str(v) for v in part) + " 0" for part in self.parts)


def parse_prop(text: str, kind: str = "dnf", num_vars: int | None = None) -> PropFormula:
    """Read one term/clause per line; ``c`` lines are comments, ``p dnf N M`` fixes the variable count."""
    parts = []
    declared = num_vars
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            fields = line.split()
            if len(fields) < 3 or fields[1] not in ("dnf", "cnf"):
                raise FormatError(f"line {lineno}: malformed problem line {line!r}")
            kind = fields[1]
            declared = int(fields[2])
            continue
        try:
            lits = [int(tok) for tok in line.split()]
        except ValueError:
            raise FormatError(f"line {lineno}: literals must be integers, got {line!r}") from None
        if lits and lits[-1] == 0:
            lits.pop()
        if 0 in lits:
            raise FormatError(f"line {lineno}: 0 may only terminate a line")
        parts.append(tuple(lits))
    n = declared if declared is not None else max((abs(v) for p in parts for v in p), default=0)
    return PropFormula(n, tuple(parts), kind)


def truth_table_count(phi: PropFormula) -> int:
    """Number of satisfying assignments, by evaluating all 2^n rows."""
    return sum(phi.evaluate(values) for values in product((False, True), repeat=phi.num_vars))


def negate_cnf(phi: PropFormula) -> PropFormula:
    """De Morgan: the negation of a CNF as a DNF over the same variables."""
    if phi.kind != "cnf":
        raise ValueError("negate_cnf expects a CNF formula")
    return PropFormula(phi.num_vars, tuple(tuple(-v for v in clause) for clause in phi.parts), "dnf")


# ---------------------------------------------------------------- first-order encoding


def _shape(term: tuple[int, ...]) -> tuple[int, tuple[int, int, int]]:
    """The relation index and argument triple that encode one term."""
    if not 1 <= len(term) <= 3:
        raise EncodingError(f"term {term} must have between 1 and 3 literals")
    # negated literals first; padding repeats the last literal, which keeps that order
    ordered = sorted(term, key=lambda v: v > 0)
    while len(ordered) < 3:
        ordered.append(ordered[-1])
    negatives = sum(1 for v in ordered if v < 0)
    return negatives, tuple(abs(v) - 1 for v in ordered)


def build_dnf_structure(phi: PropFormula) -> Structure:
    """Structure over D0..D3 whose universe is the variable set.

    D_i(a, b, c) holds iff the term with its first i literals negated and the
    rest positive, over variables a, b, c, is a disjunct.
    """
    if phi.kind != "dnf":
        raise EncodingError("build_dnf_structure needs a DNF formula")
    if phi.num_vars < 1:
        raise EncodingError("a DNF structure needs at least one variable")
    rels: dict[str, set] = {r: set() for r in DNF_RELATIONS}
    for term in phi.parts:
        i, args = _shape(term)
        rels[DNF_RELATIONS[i]].add(args)
    return Structure(DNF_VOCABULARY, phi.num_vars, rels)


def _phi_dnf(lit) -> Exists:
    x, y, z = Var("x"), Var("y"), Var("z")
    cases = []
    for i, r in enumerate(DNF_RELATIONS):
        lits = [lit(v) if k >= i else Not(lit(v)) for k, v in enumerate((x, y, z))]
        cases.append(And((Rel(r, (x, y, z)), *lits)))
    return Exists("x", Exists("y", Exists("z", Or(tuple(cases)))))


def phi_3dnf() -> Query:
    """Sigma1 formula over D0..D3 with free unary relation variable T: T is a satisfying assignment."""
    return Query(_phi_dnf(lambda v: RelVar("T", (v,))), relvars={"T": 1})


def phi_3dnf_func() -> Query:
    """The same formula with each T(v) replaced by BIT(min, f(v)), f a unary function variable."""
    return Query(_phi_dnf(lambda v: BuiltinAtom("BIT", Min(), App("f", (v,)))), funvars={"f": 1})


def reduce_dnf(A: Structure) -> tuple[Structure, int]:
    """Double the universe; the functional count on the result is the relational count times the scale."""
    n = A.size
    return extend_universe(A, n), n ** (2 * n) * 2**n


def count_3dnf(phi: PropFormula) -> int:
    """Satisfying assignments of a 3DNF, counted through its first-order encoding."""
    return count_relational(build_dnf_structure(phi), phi_3dnf())


def cnf_to_dnf_count(phi: PropFormula, dnf_counter: Callable[[PropFormula], int] | None = None) -> int:
    """Satisfying assignments of a 3CNF: 2^n minus those of its negation, a 3DNF."""
    if phi.kind != "cnf":
        raise EncodingError("cnf_to_dnf_count needs a CNF formula")
    for clause in phi.parts:
        if not 1 <= len(clause) <= 3:
            raise EncodingError(f"clause {clause} must have between 1 and 3 literals")
    counter = dnf_counter or count_3dnf
    negation = negate_cnf(phi)
    return 2**phi.num_vars - (counter(negation) if negation.parts else 0)


# ---------------------------------------------------------------- random instances


def random_prop(rng: random.Random, num_vars: int, num_parts: int, kind: str = "dnf") -> PropFormula:
    parts = []
    for _ in range(num_parts):
        width = rng.randint(1, 3)
        parts.append(tuple(rng.choice((1, -1)) * rng.randint(1, num_vars) for _ in range(width)))
    return PropFormula(num_vars, tuple(parts), kind)
