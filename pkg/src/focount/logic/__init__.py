from .syntax import (
    And, App, BuiltinAtom, Const, Eq, Exists, Forall, Formula, Implies, Max, Min, Not, Or,
    Query, Rel, RelVar, Term, Truth, Var, as_query,
)
from .parser import Document, parse_document, parse_formula
from .normal import FragmentInfo, classify_fragment, is_prefix_restricted, to_nnf, to_prenex
