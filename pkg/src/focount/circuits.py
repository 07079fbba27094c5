"""Boolean circuits over AND/OR gates with resolved leaves, and proof-tree counting.

A proof tree picks one child at every OR gate and every child at every AND
gate, and must end in true leaves. Counting them on the tree unfolding of
a DAG obeys OR = sum, AND = product, so one memoized pass in topological
order gives the exact count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from itertools import product
from math import prod
from typing import Mapping

from .counting import DEFAULT_BUDGET
from .errors import FormatError, PreconditionError, ResourceError, StructuralError
from .logic.normal import blocks, is_prenex, split_prenex
from .logic.syntax import Formula, Query, as_query
from .semantics import check_symbols, holds
from .structures import Structure, Vocabulary

KINDS = ("AND", "OR", "LEAF")

CIRCUIT_VOCABULARY = Vocabulary(
    relations=(("E", 2), ("G_and", 1), ("G_or", 1), ("B", 1), ("r", 1)),
)


@dataclass(frozen=True)
class Circuit:
    kinds: Mapping[int, str]
    children: Mapping[int, tuple[int, ...]] = field(default_factory=dict)
    leaves: Mapping[int, bool] = field(default_factory=dict)
    root: int = 0

    def __post_init__(self):
        kinds = {int(g): k for g, k in self.kinds.items()}
        children = {g: tuple(int(c) for c in self.children.get(g, ())) for g in kinds}
        leaves = {g: bool(self.leaves.get(g, False)) for g, k in kinds.items() if k == "LEAF"}
        for g, k in kinds.items():
            if k not in KINDS:
                raise StructuralError(f"gate {g} has unknown kind {k!r}")
            if k == "LEAF" and children[g]:
                raise StructuralError(f"leaf {g} has children")
            if k != "LEAF" and not children[g]:
                raise StructuralError(f"{k} gate {g} has no children")
            for c in children[g]:
                if c not in kinds:
                    raise StructuralError(f"gate {g} has unknown child {c}")
        if self.root not in kinds:
            raise StructuralError(f"root {self.root} is not a gate")
        object.__setattr__(self, "kinds", kinds)
        object.__setattr__(self, "children", children)
        object.__setattr__(self, "leaves", leaves)

    def __len__(self) -> int:
        return len(self.kinds)

    def reachable(self) -> set[int]:
        seen = {self.root}
        stack = [self.root]
        while stack:
            for c in self.children[stack.pop()]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return seen

    def order(self) -> list[int]:
        """Gates reachable from the root, children before parents."""
        live = self.reachable()
        try:
            return list(TopologicalSorter({g: self.children[g] for g in live}).static_order())
        except CycleError as exc:
            raise StructuralError(f"circuit has a cycle through gates {exc.args[1]}") from None

    def depth(self) -> int:
        """Number of gates on the longest root-to-leaf path."""
        d: dict[int, int] = {}
        for g in self.order():
            d[g] = 1 + max((d[c] for c in self.children[g]), default=0)
        return d[self.root]


def _fold(C: Circuit, leaf, or_, and_):
    value = {}
    for g in C.order():
        kind = C.kinds[g]
        if kind == "LEAF":
            value[g] = leaf(C.leaves[g])
        else:
            vals = [value[c] for c in C.children[g]]
            value[g] = or_(vals) if kind == "OR" else and_(vals)
    return value[C.root]


def evaluate(C: Circuit) -> bool:
    return _fold(C, bool, any, all)


def count_proof_trees(C: Circuit) -> int:
    return _fold(C, int, sum, prod)


# ---------------------------------------------------------------- quantifier trees


def circuit_from_prenex(A: Structure, phi: Formula | Query, budget: int = DEFAULT_BUDGET) -> Circuit:
    """Tree circuit of a prenex sentence: OR over each existential block, AND over each universal block.

    Each full binding ends in a leaf carrying the truth of the matrix, so
    proof trees correspond to choices of existential values only.
    """
    q = as_query(phi)
    if not is_prenex(q.body):
        raise PreconditionError("circuit_from_prenex needs a prenex sentence")
    if q.freevars or q.relvars or q.funvars:
        raise PreconditionError("circuit_from_prenex needs a sentence without free variables")
    check_symbols(A, q)
    prefix, matrix = split_prenex(q.body)
    grouped = blocks(prefix)
    n = A.size
    leaves_needed = n ** len(prefix)
    if leaves_needed > budget:
        raise ResourceError(leaves_needed, budget)
    kinds: dict[int, str] = {}
    children: dict[int, tuple[int, ...]] = {}
    leaves: dict[int, bool] = {}

    def build(level: int, env: dict[str, int]) -> int:
        gate = len(kinds)
        if level == len(grouped):
            kinds[gate] = "LEAF"
            leaves[gate] = holds(A, matrix, env, {}, {})
            return gate
        quant, names = grouped[level]
        kinds[gate] = "OR" if quant == "E" else "AND"
        kids = []
        for values in product(range(n), repeat=len(names)):
            kids.append(build(level + 1, {**env, **dict(zip(names, values))}))
        children[gate] = tuple(kids)
        return gate

    root = build(0, {})
    return Circuit(kinds, children, leaves, root)


# ---------------------------------------------------------------- circuits as structures


def structure_to_circuit(B: Structure) -> Circuit:
    """Read a structure over (E/2, G_and/1, G_or/1, B/1, r/1) as a circuit.

    Elements outside G_and and G_or are leaves with truth value B(x).
    """
    for name, arity in CIRCUIT_VOCABULARY.relations:
        if B.vocabulary.arities.get(name) != arity:
            raise StructuralError(f"structure lacks circuit relation {name}/{arity}")
    ands = {x for (x,) in B.relations["G_and"]}
    ors = {x for (x,) in B.relations["G_or"]}
    both = sorted(ands & ors)
    if both:
        raise StructuralError(f"element {both[0]} is both an AND and an OR gate")
    roots = sorted(x for (x,) in B.relations["r"])
    if len(roots) != 1:
        raise StructuralError(f"expected exactly one root, found {len(roots)}: {roots}")
    kids: dict[int, list[int]] = {x: [] for x in B.universe}
    for x, y in sorted(B.relations["E"]):
        kids[x].append(y)
    kinds = {}
    for x in B.universe:
        if x in ands or x in ors:
            kinds[x] = "AND" if x in ands else "OR"
        elif kids[x]:
            raise StructuralError(f"element {x} has children but is not a gate")
        else:
            kinds[x] = "LEAF"
    try:
        list(TopologicalSorter(kids).static_order())
    except CycleError as exc:
        raise StructuralError(f"edge relation has a cycle through elements {exc.args[1]}") from None
    leaves = {x: B.holds("B", (x,)) for x in B.universe if kinds[x] == "LEAF"}
    return Circuit(kinds, kids, leaves, roots[0])


def circuit_to_structure(C: Circuit) -> Structure:
    """Inverse of :func:`structure_to_circuit`; gates are renumbered 0..m-1 in increasing id order."""
    ids = sorted(C.kinds)
    num = {g: i for i, g in enumerate(ids)}
    rels = {
        "E": {(num[g], num[c]) for g in ids for c in C.children[g]},
        "G_and": {(num[g],) for g in ids if C.kinds[g] == "AND"},
        "G_or": {(num[g],) for g in ids if C.kinds[g] == "OR"},
        "B": {(num[g],) for g in ids if C.kinds[g] == "LEAF" and C.leaves[g]},
        "r": {(num[C.root],)},
    }
    return Structure(CIRCUIT_VOCABULARY, len(ids), rels)


# ---------------------------------------------------------------- text format


def format_circuit(C: Circuit) -> str:
    lines = [f"root {C.root}"]
    for g in sorted(C.kinds):
        if C.kinds[g] == "LEAF":
            lines.append(f"{g} LEAF {int(C.leaves[g])}")
        else:
            lines.append(f"{g} {C.kinds[g]} {','.join(str(c) for c in C.children[g])}")
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> Circuit:
    """Read ``root ID`` and one ``ID KIND ...`` line per gate; ``#`` starts a comment."""
    root = None
    kinds: dict[int, str] = {}
    children: dict[int, tuple[int, ...]] = {}
    leaves: dict[int, bool] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        try:
            if fields[0] == "root":
                if len(fields) != 2 or root is not None:
                    raise FormatError(f"line {lineno}: expected a single 'root ID' line")
                root = int(fields[1])
                continue
            gate, kind = int(fields[0]), fields[1].upper()
            if gate in kinds:
                raise FormatError(f"line {lineno}: gate {gate} defined twice")
            if kind == "LEAF":
                if len(fields) != 3 or fields[2] not in ("0", "1"):
                    raise FormatError(f"line {lineno}: a leaf needs the value 0 or 1")
                leaves[gate] = fields[2] == "1"
            elif kind in ("AND", "OR"):
                if len(fields) != 3:
                    raise FormatError(f"line {lineno}: {kind} gate needs a comma-separated child list")
                children[gate] = tuple(int(c) for c in fields[2].split(","))
            else:
                raise FormatError(f"line {lineno}: unknown gate kind {fields[1]!r}")
            kinds[gate] = kind
        except (ValueError, IndexError):
            raise FormatError(f"line {lineno}: cannot read {raw.strip()!r}") from None
    if root is None:
        raise FormatError("missing 'root ID' line")
    return Circuit(kinds, children, leaves, root)
