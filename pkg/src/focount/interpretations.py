"""First-order interpretations: defining one structure inside k-tuples of another.

Text format, one directive per line (``#`` starts a comment)::

    width 1
    source rel S/1
    source builtin LEQ BIT MIN
    target rel E/2
    target rel G_and/1
    universe x := x = x
    relation E x y := x = min /\\ ~(y = min)

A target relation of arity a lists k*a variables: the first k name the
components of the first argument tuple, and so on.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import DomainError, FormatError, InputError
from .logic.parser import parse_formula
from .logic.syntax import Formula, free_vars
from .semantics import check_symbols, holds
from .structures import Structure, Vocabulary


@dataclass(frozen=True)
class Interpretation:
    source: Vocabulary
    target: Vocabulary
    width: int
    universe: tuple[tuple[str, ...], Formula]
    relations: dict[str, tuple[tuple[str, ...], Formula]]

    def __post_init__(self):
        if self.width < 1:
            raise InputError(f"interpretation width must be >= 1, got {self.width}")
        if self.target.constants:
            raise InputError("target vocabularies with constants are not supported")
        names, phi0 = self.universe
        self._check("universe", names, phi0, self.width)
        for name, arity in self.target.relations:
            if name not in self.relations:
                raise InputError(f"no defining formula for target relation {name}")
            names, phi = self.relations[name]
            self._check(name, names, phi, self.width * arity)
        extra = set(self.relations) - set(self.target.arities)
        if extra:
            raise InputError(f"formulas for relations outside the target vocabulary: {', '.join(sorted(extra))}")

    @staticmethod
    def _check(what: str, names, phi, expected: int) -> None:
        if len(names) != expected or len(set(names)) != expected:
            raise InputError(f"{what} needs {expected} distinct variables, got {len(names)}")
        stray = free_vars(phi) - set(names)
        if stray:
            raise InputError(f"{what} formula has undeclared free variables {', '.join(sorted(stray))}")


def apply_interpretation(I: Interpretation, A: Structure) -> Structure:
    """The target structure defined inside ``A``.

    Its elements are the k-tuples satisfying the universe formula, numbered
    0..m-1 in lexicographic order.
    """
    if A.vocabulary.arities != I.source.arities or set(A.vocabulary.constants) != set(I.source.constants):
        raise InputError("structure is not over the interpretation's source vocabulary")
    k = I.width
    names0, phi0 = I.universe
    check_symbols(A, phi0)
    elements = [t for t in product(A.universe, repeat=k) if holds(A, phi0, dict(zip(names0, t)), {}, {})]
    if not elements:
        raise DomainError("the interpretation defines an empty universe")
    rels = {}
    for name, arity in I.target.relations:
        names, phi = I.relations[name]
        check_symbols(A, phi)
        rels[name] = {
            idx
            for idx in product(range(len(elements)), repeat=arity)
            if holds(A, phi, dict(zip(names, (v for i in idx for v in elements[i]))), {}, {})
        }
    return Structure(I.target, len(elements), rels)


def _vocabulary(lines: list[str], what: str) -> Vocabulary:
    relations, constants, builtins = [], [], set()
    for words in (line.split(None, 1) for line in lines):
        if len(words) < 2:
            raise FormatError(f"{what}: incomplete declaration")
        kind, rest = words
        if kind == "rel":
            try:
                name, arity = rest.replace(" ", "").split("/")
                relations.append((name, int(arity)))
            except ValueError:
                raise FormatError(f"{what}: expected 'rel NAME/ARITY', got {rest!r}") from None
        elif kind == "const":
            constants.extend(c.strip() for c in rest.split(","))
        elif kind == "builtin":
            builtins |= set(rest.split())
        else:
            raise FormatError(f"{what}: unknown declaration {kind!r}")
    return Vocabulary(tuple(relations), tuple(constants), frozenset(builtins))


def parse_interpretation(text: str) -> Interpretation:
    width = None
    decls: dict[str, list[str]] = {"source": [], "target": []}
    raw_universe = None
    raw_relations: dict[str, tuple[list[str], str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        if word == "width":
            try:
                width = int(rest)
            except ValueError:
                raise FormatError(f"line {lineno}: expected 'width K'") from None
        elif word in decls:
            decls[word].append(rest)
        elif word in ("universe", "relation"):
            head, sep, body = rest.partition(":=")
            if not sep:
                raise FormatError(f"line {lineno}: expected ':=' before the defining formula")
            parts = head.split()
            if word == "universe":
                raw_universe = (parts, body)
            elif not parts:
                raise FormatError(f"line {lineno}: relation line needs a relation name")
            else:
                raw_relations[parts[0]] = (parts[1:], body)
        else:
            raise FormatError(f"line {lineno}: unknown directive {word!r}")
    if width is None:
        raise FormatError("missing 'width K' line")
    if raw_universe is None:
        raise FormatError("missing 'universe' line")
    source = _vocabulary(decls["source"], "source")
    target = _vocabulary(decls["target"], "target")

    def formula(names: list[str], body: str) -> tuple[tuple[str, ...], Formula]:
        header = f"freevar {', '.join(names)};" if names else ""
        return tuple(names), parse_formula(body, source, header=header).body

    return Interpretation(
        source, target, width, formula(*raw_universe),
        {name: formula(*spec) for name, spec in raw_relations.items()},
    )


def format_interpretation(I: Interpretation) -> str:
    lines = [f"width {I.width}"]
    for what, voc in (("source", I.source), ("target", I.target)):
        lines += [f"{what} rel {r}/{a}" for r, a in voc.relations]
        if voc.constants:
            lines.append(f"{what} const {', '.join(voc.constants)}")
        if voc.builtins:
            lines.append(f"{what} builtin {' '.join(sorted(voc.builtins))}")
    names, phi0 = I.universe
    lines.append(f"universe {' '.join(names)} := {phi0}")
    for name, _ in I.target.relations:
        names, phi = I.relations[name]
        lines.append(f"relation {name} {' '.join(names)} := {phi}")
    return "\n".join(lines) + "\n"
