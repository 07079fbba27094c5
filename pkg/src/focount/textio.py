"""Plain-text format for finite structures.

Example::

    # edge fixture: three edges, two distinct constants
    size 4
    builtin LEQ LT MIN MAX
    rel E/2 = (0,1) (1,2) (2,0)
    rel P/1 = 0 3
    const c = 0
    const d = 1

Relation and constant lines fix the vocabulary's declaration order. Unary
tuples may be written without parentheses. Without a ``builtin`` line the
structure gets every builtin.
"""

from __future__ import annotations

import re

from .errors import FormatError
from .structures import BUILTINS, Structure, Vocabulary

_REL = re.compile(r"^rel\s+([A-Za-z_]\w*)\s*/\s*(\d+)\s*(?:=\s*(.*))?$")
_CONST = re.compile(r"^const\s+([A-Za-z_]\w*)\s*=\s*(\d+)$")
_TUPLE = re.compile(r"\(([^()]*)\)|(\d+)")


def parse_structure(text: str) -> Structure:
    size = None
    builtins = None
    relations: list[tuple[str, int]] = []
    tuples: dict[str, set] = {}
    constants: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word = line.split()[0]
        if word == "size":
            try:
                (value,) = line.split()[1:]
                size = int(value)
            except ValueError:
                raise FormatError(f"line {lineno}: expected 'size N'") from None
        elif word == "builtin":
            builtins = set(line.split()[1:])
        elif word == "rel":
            m = _REL.match(line)
            if not m:
                raise FormatError(f"line {lineno}: expected 'rel NAME/ARITY = tuples'")
            name, arity = m.group(1), int(m.group(2))
            relations.append((name, arity))
            tuples[name] = _read_tuples(m.group(3) or "", lineno)
        elif word == "const":
            m = _CONST.match(line)
            if not m:
                raise FormatError(f"line {lineno}: expected 'const NAME = VALUE'")
            constants[m.group(1)] = int(m.group(2))
        else:
            raise FormatError(f"line {lineno}: unknown directive {word!r}")
    if size is None:
        raise FormatError("missing 'size N' line")
    voc = Vocabulary(tuple(relations), tuple(constants), frozenset(BUILTINS if builtins is None else builtins))
    return Structure(voc, size, tuples, constants)


def _read_tuples(text: str, lineno: int) -> set[tuple[int, ...]]:
    out = set()
    pos = 0
    text = text.strip()
    while pos < len(text):
        if text[pos] in " \t,;":
            pos += 1
            continue
        m = _TUPLE.match(text, pos)
        if not m:
            raise FormatError(f"line {lineno}: cannot read tuple at {text[pos:]!r}")
        try:
            if m.group(1) is not None:
                out.add(tuple(int(v) for v in m.group(1).split(",") if v.strip()))
            else:
                out.add((int(m.group(2)),))
        except ValueError:
            raise FormatError(f"line {lineno}: tuple components must be integers") from None
        pos = m.end()
    return out


def format_structure(A: Structure) -> str:
    """Deterministic text form; :func:`parse_structure` reads it back to an equal structure."""
    voc = A.vocabulary
    lines = [f"size {A.size}", "builtin " + " ".join(sorted(voc.builtins)) if voc.builtins else "builtin"]
    for name, arity in voc.relations:
        items = " ".join("(" + ",".join(map(str, t)) + ")" for t in sorted(A.relations[name]))
        lines.append(f"rel {name}/{arity} = {items}".rstrip())
    for name in voc.constants:
        lines.append(f"const {name} = {A.constants[name]}")
    return "\n".join(lines) + "\n"
