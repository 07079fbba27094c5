"""Vocabularies, finite structures over {0, ..., n-1}, built-ins and binary encodings."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping

import numpy as np

from .errors import ArityError, DomainError, FormatError, InputError, UnknownSymbolError

BUILTIN_ARITY = {"LEQ": 2, "LT": 2, "SUCC": 2, "BIT": 2, "MIN": 0, "MAX": 0}
BUILTINS = frozenset(BUILTIN_ARITY)

# lowercase spellings used in formulas
RESERVED_NAMES = frozenset({"min", "max", "BIT", "SUCC", "forall", "exists", "true", "false"}) | BUILTINS

Tuple = tuple[int, ...]


@dataclass(frozen=True)
class Vocabulary:
    """A relational signature: relation symbols with arities, constants, and built-ins.

    Declaration order of ``relations`` and ``constants`` fixes the order of
    the blocks in :func:`encode_structure`.
    """

    relations: tuple[tuple[str, int], ...] = ()
    constants: tuple[str, ...] = ()
    builtins: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple((str(r), int(a)) for r, a in self.relations))
        object.__setattr__(self, "constants", tuple(self.constants))
        object.__setattr__(self, "builtins", frozenset(self.builtins))
        unknown = self.builtins - BUILTINS
        if unknown:
            raise UnknownSymbolError(f"unknown builtin(s): {', '.join(sorted(unknown))}")
        seen = set()
        for name, arity in self.relations:
            if arity < 1:
                raise ArityError(f"relation {name} must have arity >= 1, got {arity}")
            self._claim(name, seen)
        for name in self.constants:
            self._claim(name, seen)

    @staticmethod
    def _claim(name: str, seen: set[str]) -> None:
        if not name.isidentifier():
            raise InputError(f"invalid symbol name {name!r}")
        if name in RESERVED_NAMES or name.lower() in ("min", "max"):
            raise InputError(f"symbol name {name!r} is reserved for a builtin")
        if name in seen:
            raise InputError(f"duplicate symbol {name!r}")
        seen.add(name)

    @cached_property
    def arities(self) -> dict[str, int]:
        return dict(self.relations)

    def has_relation(self, name: str) -> bool:
        return name in self.arities

    def with_builtins(self, *names: str) -> Vocabulary:
        return Vocabulary(self.relations, self.constants, self.builtins | set(names))

    def encoding_length(self, n: int) -> int:
        return sum(n**a for _, a in self.relations) + len(self.constants) * constant_bits(n)


def constant_bits(n: int) -> int:
    """ceil(log2 n); zero for n = 1."""
    return (n - 1).bit_length()


@dataclass(frozen=True, eq=False)
class Structure:
    """A finite structure with universe {0, ..., size-1}.

    Built-in symbols are never stored; :func:`builtin_eval` computes them.
    """

    vocabulary: Vocabulary
    size: int
    relations: Mapping[str, frozenset[Tuple]] = field(default_factory=dict)
    constants: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.size < 1:
            raise DomainError(f"universe size must be >= 1, got {self.size}")
        voc = self.vocabulary
        rels = {}
        for name, arity in voc.relations:
            tuples = frozenset(tuple(int(v) for v in t) for t in self.relations.get(name, ()))
            for t in tuples:
                if len(t) != arity:
                    raise ArityError(f"tuple {t} in {name} does not have arity {arity}")
                if any(not 0 <= v < self.size for v in t):
                    raise DomainError(f"tuple {t} in {name} leaves the universe of size {self.size}")
            rels[name] = tuples
        extra = set(self.relations) - set(rels)
        if extra:
            raise UnknownSymbolError(f"relations not in vocabulary: {', '.join(sorted(extra))}")
        consts = {}
        for name in voc.constants:
            if name not in self.constants:
                raise InputError(f"constant {name} has no value")
            value = int(self.constants[name])
            if not 0 <= value < self.size:
                raise DomainError(f"constant {name} = {value} outside universe of size {self.size}")
            consts[name] = value
        extra = set(self.constants) - set(consts)
        if extra:
            raise UnknownSymbolError(f"constants not in vocabulary: {', '.join(sorted(extra))}")
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "constants", consts)

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return (
            self.vocabulary == other.vocabulary
            and self.size == other.size
            and self.relations == other.relations
            and self.constants == other.constants
        )

    def __hash__(self):
        return hash((self.vocabulary, self.size, tuple(sorted(self.relations.items())),
                     tuple(sorted(self.constants.items()))))

    def __repr__(self):
        rels = ", ".join(f"{r}={sorted(ts)}" for r, ts in self.relations.items())
        consts = ", ".join(f"{c}={v}" for c, v in self.constants.items())
        parts = [p for p in (rels, consts) if p]
        return f"Structure(n={self.size}" + "".join(", " + p for p in parts) + ")"

    @property
    def universe(self) -> range:
        return range(self.size)

    @cached_property
    def dense(self) -> dict[str, np.ndarray]:
        """Boolean arrays of shape (n,)*arity, one per stored relation."""
        out = {}
        for name, arity in self.vocabulary.relations:
            arr = np.zeros((self.size,) * arity, dtype=bool)
            for t in self.relations[name]:
                arr[t] = True
            out[name] = arr
        return out

    def holds(self, name: str, args: Tuple) -> bool:
        return tuple(args) in self.relations[name]


def builtin_eval(A: Structure, sym: str, args: Tuple = ()) -> bool | int:
    """Interpret a built-in symbol on ``A``.

    >>> A = string_structure("101", builtins=("LEQ", "BIT", "MIN"))
    >>> builtin_eval(A, "BIT", (0, 5)), builtin_eval(A, "MIN")
    (True, 0)
    """
    if sym not in A.vocabulary.builtins:
        raise UnknownSymbolError(f"builtin {sym} is not in the vocabulary")
    if len(args) != BUILTIN_ARITY[sym]:
        raise ArityError(f"{sym} takes {BUILTIN_ARITY[sym]} arguments, got {len(args)}")
    if sym == "MIN":
        return 0
    if sym == "MAX":
        return A.size - 1
    i, j = args
    if sym == "LEQ":
        return i <= j
    if sym == "LT":
        return i < j
    if sym == "SUCC":
        return i + 1 == j
    return (j >> i) & 1 == 1


def encode_structure(A: Structure) -> str:
    """Relations row by row in lexicographic tuple order, then constants in binary."""
    n = A.size
    bits = []
    for name, arity in A.vocabulary.relations:
        rel = A.relations[name]
        bits.extend("1" if t in rel else "0" for t in product(range(n), repeat=arity))
    width = constant_bits(n)
    for name in A.vocabulary.constants:
        if width:
            bits.append(format(A.constants[name], f"0{width}b"))
    return "".join(bits)


def decode_structure(w: str, vocabulary: Vocabulary, n: int) -> Structure:
    expected = vocabulary.encoding_length(n)
    if len(w) != expected:
        raise FormatError(f"encoding has length {len(w)}, expected {expected} for n={n}")
    if set(w) - {"0", "1"}:
        raise FormatError("encoding must consist of '0' and '1' only")
    pos = 0
    rels = {}
    for name, arity in vocabulary.relations:
        block = w[pos:pos + n**arity]
        pos += n**arity
        rels[name] = {t for t, b in zip(product(range(n), repeat=arity), block) if b == "1"}
    width = constant_bits(n)
    consts = {}
    for name in vocabulary.constants:
        value = int(w[pos:pos + width], 2) if width else 0
        pos += width
        if value >= n:
            raise DomainError(f"constant {name} decodes to {value}, outside universe of size {n}")
        consts[name] = value
    return Structure(vocabulary, n, rels, consts)


STRING_VOCABULARY = Vocabulary(relations=(("S", 1),), builtins=frozenset({"LEQ"}))


def string_structure(w: str, builtins: Iterable[str] = ("LEQ",)) -> Structure:
    """The word structure of a bitstring: S holds at the positions of the 1-bits."""
    if not w:
        raise DomainError("the empty string has no structure (universe must be non-empty)")
    if set(w) - {"0", "1"}:
        raise FormatError("word must consist of '0' and '1' only")
    voc = Vocabulary(relations=(("S", 1),), builtins=frozenset(builtins))
    return Structure(voc, len(w), {"S": {(i,) for i, b in enumerate(w) if b == "1"}})


def extend_universe(A: Structure, k: int) -> Structure:
    """Add ``k`` fresh elements that take part in no stored relation."""
    if k < 0:
        raise DomainError(f"cannot extend a universe by {k} elements")
    if k == 0:
        return A
    return Structure(A.vocabulary, A.size + k, A.relations, A.constants)


def all_structures(vocabulary: Vocabulary, n: int) -> Iterable[Structure]:
    """Every structure of size ``n``, in the order of their encodings."""
    for bits in product("01", repeat=vocabulary.encoding_length(n)):
        try:
            yield decode_structure("".join(bits), vocabulary, n)
        except DomainError:
            continue
