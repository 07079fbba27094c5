"""Normal forms and fragment classification."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..errors import PreconditionError
from .syntax import (
    ATOMS, And, App, Exists, Forall, Formula, Implies, Not, Or, Query, Truth, Var, all_terms,
    is_quantifier_free, rename_apart,
)

Prefix = list[tuple[str, str]]  # ("A" | "E", variable)


def _with_body(phi, body):
    return phi.replace(body=body) if isinstance(phi, Query) else body


def _body(phi) -> Formula:
    return phi.body if isinstance(phi, Query) else phi


def _flip(prefix: Prefix) -> Prefix:
    return [("E" if q == "A" else "A", v) for q, v in prefix]


def _pull(f: Formula) -> tuple[Prefix, Formula]:
    if isinstance(f, ATOMS):
        return [], f
    if isinstance(f, Not):
        p, m = _pull(f.arg)
        return _flip(p), Not(m)
    if isinstance(f, (And, Or)):
        prefix: Prefix = []
        parts = []
        for a in f.args:
            p, m = _pull(a)
            prefix += p
            parts.append(m)
        return prefix, type(f)(tuple(parts))
    if isinstance(f, Implies):
        pl, ml = _pull(f.left)
        pr, mr = _pull(f.right)
        return _flip(pl) + pr, Implies(ml, mr)
    if isinstance(f, Exists):
        p, m = _pull(f.body)
        return [("E", f.var)] + p, m
    if isinstance(f, Forall):
        p, m = _pull(f.body)
        return [("A", f.var)] + p, m
    raise TypeError(f"not a formula: {f!r}")


def split_prenex(f: Formula) -> tuple[Prefix, Formula]:
    """Read off the quantifier prefix of a formula that is already prenex."""
    prefix: Prefix = []
    while isinstance(f, (Exists, Forall)):
        prefix.append(("E" if isinstance(f, Exists) else "A", f.var))
        f = f.body
    if not is_quantifier_free(f):
        raise PreconditionError("formula is not in prenex normal form")
    return prefix, f


def build_prenex(prefix: Prefix, matrix: Formula) -> Formula:
    for q, v in reversed(prefix):
        matrix = (Exists if q == "E" else Forall)(v, matrix)
    return matrix


def is_prenex(f) -> bool:
    f = _body(f)
    while isinstance(f, (Exists, Forall)):
        f = f.body
    return is_quantifier_free(f)


def to_prenex(phi):
    """Equivalent prenex formula; quantifiers are extracted left to right in source order."""
    declared = set(phi.relvars) | set(phi.funvars) | set(phi.freevars) if isinstance(phi, Query) else set()
    f = rename_apart(_body(phi), declared)
    prefix, matrix = _pull(f)
    return _with_body(phi, build_prenex(prefix, matrix))


def blocks(prefix: Prefix) -> list[tuple[str, list[str]]]:
    """Group a prefix into maximal blocks of equal quantifiers."""
    out: list[tuple[str, list[str]]] = []
    for q, v in prefix:
        if out and out[-1][0] == q:
            out[-1][1].append(v)
        else:
            out.append((q, [v]))
    return out


def _nnf(f: Formula, neg: bool) -> Formula:
    if isinstance(f, Truth):
        return Truth(f.value != neg)
    if isinstance(f, ATOMS):
        return Not(f) if neg else f
    if isinstance(f, Not):
        return _nnf(f.arg, not neg)
    if isinstance(f, (And, Or)):
        cls = type(f)
        if neg:
            cls = Or if cls is And else And
        return cls(tuple(_nnf(a, neg) for a in f.args))
    if isinstance(f, Implies):
        if neg:
            return And((_nnf(f.left, False), _nnf(f.right, True)))
        return Or((_nnf(f.left, True), _nnf(f.right, False)))
    if isinstance(f, (Exists, Forall)):
        cls = type(f)
        if neg:
            cls = Forall if cls is Exists else Exists
        return cls(f.var, _nnf(f.body, neg))
    raise TypeError(f"not a formula: {f!r}")


def to_nnf(phi):
    """Push negations onto atoms and eliminate implications."""
    return _with_body(phi, _nnf(_body(phi), False))


@dataclass(frozen=True)
class FragmentInfo:
    in_prenex: bool
    kind: str  # "QF", "Sigma" or "Pi"
    level: int
    universal_count: int
    prefix_restricted: Optional[bool] = None

    @property
    def name(self) -> str:
        return "Sigma0/Pi0" if self.kind == "QF" else f"{self.kind}{self.level}"

    def in_sigma(self, k: int) -> bool:
        if self.kind == "QF":
            return True
        return self.level <= k if self.kind == "Sigma" else self.level < k

    def in_pi(self, k: int) -> bool:
        if self.kind == "QF":
            return True
        return self.level <= k if self.kind == "Pi" else self.level < k


def classify_fragment(phi) -> FragmentInfo:
    """Minimal alternation class of (the prenex image of) a formula.

    Consecutive quantifiers of the same kind form one block.
    """
    f = _body(phi)
    in_prenex = is_prenex(f)
    image = f if in_prenex else _body(to_prenex(phi))
    prefix, _ = split_prenex(image)
    bl = blocks(prefix)
    universal = sum(1 for q, _ in prefix if q == "A")
    if not bl:
        kind, level = "QF", 0
    else:
        kind, level = ("Sigma" if bl[0][0] == "E" else "Pi"), len(bl)
    restricted = None
    if kind == "QF" or (kind == "Pi" and level == 1):
        restricted = _prefix_restricted(prefix, image)
    return FragmentInfo(in_prenex, kind, level, universal, restricted)


def _prefix_restricted(prefix: Prefix, image: Formula) -> bool:
    ys = [v for _, v in prefix]
    _, matrix = split_prenex(image)
    for t in all_terms(matrix):
        if isinstance(t, App):
            a = len(t.args)
            if a > len(ys) or t.args != tuple(Var(y) for y in ys[:a]):
                return False
    return True


def is_prefix_restricted(phi) -> bool:
    """True iff every arity-a function variable is applied exactly to the first a prefix variables."""
    f = _body(phi)
    if not is_prenex(f):
        raise PreconditionError("is_prefix_restricted needs a prenex Pi1 formula; got a non-prenex formula")
    prefix, _ = split_prenex(f)
    if any(q == "E" for q, _ in prefix):
        raise PreconditionError("is_prefix_restricted needs a Pi1 formula; the prefix contains 'exists'")
    return _prefix_restricted(prefix, f)
