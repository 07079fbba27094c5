"""Recursive-descent parser for the ASCII formula syntax.

Header lines (each terminated by ``;``) precede the formula::

    rel E/2;  const c;          # vocabulary symbols (optional if a vocabulary is passed)
    relvar T/1;  funvar F/2;  freevar x, y;
    builtin LT MIN;             # optional, defaults to all builtins
    forall x (E(x, F(x, x)) -> x = c)

Precedence, loosest first: quantifiers (scope extends as far right as
possible), ``->`` (right associative), ``\\/``, ``/\\``, ``~``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ArityError, ParseError, UnknownSymbolError
from ..structures import BUILTINS, Vocabulary
from .syntax import (
    And, App, BuiltinAtom, Const, Eq, Exists, Forall, Formula, Implies, Max, Min, NameSupply,
    Not, Or, Query, Rel, RelVar, Term, Truth, Var,
)

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<op>/\\|\\/|->|<=|<|=|~|\(|\)|,|;|/)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)

_HEADER_WORDS = {"relvar", "funvar", "freevar", "rel", "const", "builtin"}
_KEYWORDS = {"forall", "exists", "true", "false", "min", "max", "BIT", "SUCC"}


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


@dataclass
class Document:
    """Result of parsing a formula file: the query and the vocabulary it was read against."""

    query: Query
    vocabulary: Vocabulary


class _Parser:
    def __init__(self, text: str, vocabulary: Vocabulary | None):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.relations: dict[str, int] = dict(vocabulary.relations) if vocabulary else {}
        self.constants: list[str] = list(vocabulary.constants) if vocabulary else []
        self.builtins = set(vocabulary.builtins) if vocabulary else None
        self.relvars: dict[str, int] = {}
        self.funvars: dict[str, int] = {}
        self.freevars: list[str] = []
        self.scope: list[tuple[str, str]] = []
        self.used_binders: set[str] = set()
        self.supply = NameSupply(t.text for t in self.toks if t.kind == "name")

    # -- token helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, tok: _Tok | None = None):
        tok = tok or self.tok
        return ParseError(message, tok.pos, self.text)

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind in ("op", "name"):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> _Tok:
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        tok = self.tok
        self.i += 1
        return tok

    def name(self) -> _Tok:
        if self.tok.kind != "name":
            raise self.error(f"expected a name, found {self.tok.text or 'end of input'!r}")
        tok = self.tok
        self.i += 1
        return tok

    def integer(self) -> int:
        if self.tok.kind != "int":
            raise self.error("expected an integer")
        value = int(self.tok.text)
        self.i += 1
        return value

    # -- header
    def header(self) -> None:
        while self.tok.kind == "name" and self.tok.text in _HEADER_WORDS and self._is_header():
            word = self.name().text
            if word in ("relvar", "funvar", "rel"):
                nm = self.name()
                self.expect("/")
                arity = self.integer()
                self._declare(nm, word, arity)
            elif word in ("freevar", "const"):
                self._declare(self.name(), word, 0)
                while self.accept(","):
                    self._declare(self.name(), word, 0)
            else:
                names = set()
                while self.tok.kind == "name":
                    nm = self.name()
                    if nm.text not in BUILTINS:
                        raise self.error(f"unknown builtin {nm.text!r}", nm)
                    names.add(nm.text)
                self.builtins = (self.builtins or set()) | names
            self.expect(";")

    def _is_header(self) -> bool:
        # `rel` etc. could in principle be a relation name; header lines have NAME NAME
        nxt = self.toks[self.i + 1]
        return nxt.kind == "name" or (self.tok.text == "builtin" and nxt.text == ";")

    def _declare(self, tok: _Tok, word: str, arity: int) -> None:
        nm = tok.text
        if nm in _KEYWORDS or nm in _HEADER_WORDS or nm in BUILTINS:
            raise self.error(f"{nm!r} is reserved", tok)
        taken = set(self.relations) | set(self.constants) | set(self.relvars) | set(self.funvars) | set(self.freevars)
        if nm in taken:
            if word == "rel" and self.relations.get(nm) == arity:
                return
            if word == "const" and nm in self.constants:
                return
            raise self.error(f"symbol {nm!r} declared twice", tok)
        if word in ("relvar", "rel") and arity < 1:
            raise self.error(f"relation {nm!r} needs arity >= 1", tok)
        if word == "relvar":
            self.relvars[nm] = arity
        elif word == "funvar":
            self.funvars[nm] = arity
        elif word == "rel":
            self.relations[nm] = arity
        elif word == "const":
            self.constants.append(nm)
        else:
            self.freevars.append(nm)

    # -- formulas
    def formula(self) -> Formula:
        if self.tok.text in ("forall", "exists"):
            return self.quantified()
        left = self.disjunction()
        if self.accept("->"):
            return Implies(left, self.formula())
        return left

    def quantified(self) -> Formula:
        kind = self.name().text
        names = [self.name()]
        while self.accept(","):
            names.append(self.name())
        renamed = []
        for tok in names:
            nm = tok.text
            if nm in _KEYWORDS or nm in BUILTINS:
                raise self.error(f"{nm!r} cannot be used as a variable", tok)
            clash = (
                nm in self.used_binders or nm in self.freevars or nm in self.constants
                or nm in self.funvars or nm in self.relvars or nm in self.relations
            )
            new = self.supply.fresh(nm) if clash else nm
            self.supply.taken.add(new)
            self.used_binders.add(nm)
            self.used_binders.add(new)
            renamed.append((nm, new))
        self.scope.extend(renamed)
        body = self.formula()
        del self.scope[len(self.scope) - len(renamed):]
        node = Forall if kind == "forall" else Exists
        for _, new in reversed(renamed):
            body = node(new, body)
        return body

    def disjunction(self) -> Formula:
        args = [self.conjunction()]
        while self.accept("\\/"):
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction(self) -> Formula:
        args = [self.unary()]
        while self.accept("/\\"):
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self) -> Formula:
        if self.accept("~"):
            return Not(self.unary())
        if self.tok.text in ("forall", "exists"):
            return self.quantified()
        return self.primary()

    def primary(self) -> Formula:
        tok = self.tok
        if tok.text == "(" and self._paren_is_formula():
            self.i += 1
            f = self.formula()
            self.expect(")")
            return f
        if self.accept("true"):
            return Truth(True)
        if self.accept("false"):
            return Truth(False)
        if tok.kind == "name" and tok.text in ("BIT", "SUCC"):
            self.i += 1
            self.expect("(")
            left = self.term()
            self.expect(",")
            right = self.term()
            self.expect(")")
            self._need_builtin(tok.text, tok)
            return BuiltinAtom(tok.text, left, right)
        if tok.kind == "name" and (tok.text in self.relvars or tok.text in self.relations):
            self.i += 1
            args = self.arglist()
            arity = self.relvars.get(tok.text, self.relations.get(tok.text))
            if len(args) != arity:
                raise ArityError(f"{tok.text} has arity {arity}, applied to {len(args)} arguments "
                                 f"at offset {tok.pos}")
            cls = RelVar if tok.text in self.relvars else Rel
            return cls(tok.text, args)
        left = self.term()
        op = self.tok
        if self.accept("="):
            return Eq(left, self.term())
        if self.accept("<="):
            self._need_builtin("LEQ", op)
            return BuiltinAtom("LEQ", left, self.term())
        if self.accept("<"):
            self._need_builtin("LT", op)
            return BuiltinAtom("LT", left, self.term())
        raise self.error(f"expected '=', '<=' or '<' after term {left}")

    def _paren_is_formula(self) -> bool:
        # "(" opens a formula unless it is a parenthesized term followed by a comparison
        depth = 0
        j = self.i
        while True:
            t = self.toks[j]
            if t.kind == "eof":
                return True
            if t.text == "(":
                depth += 1
            elif t.text == ")":
                depth -= 1
                if depth == 0:
                    break
            elif depth == 1 and t.text in ("/\\", "\\/", "->", "~", "=", "<", "<=", "forall", "exists"):
                return True
            j += 1
        return self.toks[j + 1].text not in ("=", "<", "<=")

    def _need_builtin(self, sym: str, tok: _Tok) -> None:
        if self.builtins is not None and sym not in self.builtins:
            raise UnknownSymbolError(f"builtin {sym} is not in the vocabulary (offset {tok.pos})")

    def arglist(self) -> tuple[Term, ...]:
        self.expect("(")
        if self.accept(")"):
            return ()
        args = [self.term()]
        while self.accept(","):
            args.append(self.term())
        self.expect(")")
        return tuple(args)

    def term(self) -> Term:
        tok = self.tok
        if self.accept("("):
            t = self.term()
            self.expect(")")
            return t
        if tok.kind != "name":
            raise self.error(f"expected a term, found {tok.text or 'end of input'!r}")
        self.i += 1
        nm = tok.text
        if nm == "min":
            self._need_builtin("MIN", tok)
            return Min()
        if nm == "max":
            self._need_builtin("MAX", tok)
            return Max()
        if self.tok.text != "(":
            for src, new in reversed(self.scope):
                if src == nm:
                    return Var(new)
        if nm in self.funvars:
            args = self.arglist() if self.tok.text == "(" else ()
            if len(args) != self.funvars[nm]:
                raise ArityError(f"function variable {nm} has arity {self.funvars[nm]}, "
                                 f"applied to {len(args)} arguments at offset {tok.pos}")
            return App(nm, args)
        if self.tok.text == "(":
            raise UnknownSymbolError(f"undeclared function symbol {nm!r} at offset {tok.pos}")
        if nm in self.freevars:
            return Var(nm)
        if nm in self.constants:
            return Const(nm)
        if nm in self.relations or nm in self.relvars:
            raise self.error(f"relation symbol {nm!r} used as a term", tok)
        raise UnknownSymbolError(f"undeclared symbol {nm!r} at offset {tok.pos}")

    def document(self) -> Document:
        self.header()
        body = self.formula()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r} after formula")
        voc = Vocabulary(
            tuple(self.relations.items()), tuple(self.constants),
            frozenset(BUILTINS if self.builtins is None else self.builtins),
        )
        return Document(Query(body, self.relvars, self.funvars, tuple(self.freevars)), voc)


def parse_document(text: str, vocabulary: Vocabulary | None = None) -> Document:
    return _Parser(text, vocabulary).document()


def parse_formula(text: str, vocabulary: Vocabulary | None = None, header: str = "") -> Query:
    """Parse a formula, optionally preceded by header declarations.

    ``header`` is prepended to ``text``; it is a convenience for callers who
    keep the declarations separately.

    >>> q = parse_formula("forall x (x = x)")
    >>> str(q.body)
    'forall x (x = x)'
    """
    return parse_document(header + "\n" + text if header else text, vocabulary).query
