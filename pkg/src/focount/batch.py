"""Vectorized evaluation of one formula over a batch of assignments.

Every free symbol is bound to a numpy column: individual variables to int
arrays of shape (B,), relation variables to bool arrays (B, n**a), function
variables to int arrays (B, n**a). Tables are flattened in lexicographic
argument order, so ``F(i, j)`` lives at column ``i*n + j``.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from .logic.syntax import (
    And, App, BuiltinAtom, Const, Eq, Exists, Forall, Formula, Implies, Max, Min, Not, Or, Rel,
    RelVar, Term, Truth, Var,
)
from .structures import Structure


class BatchEvaluator:
    def __init__(self, A: Structure, size: int, tables: Mapping[str, np.ndarray]):
        self.A = A
        self.n = A.size
        self.size = size
        self.tables = tables
        self.rows = np.arange(size)
        self.dense = A.dense

    def _lookup(self, table: np.ndarray, args):
        idx = 0
        for a in args:
            idx = idx * self.n + a
        if isinstance(idx, np.ndarray):
            return table[self.rows, idx]
        return table[:, idx]

    def term(self, t: Term, env):
        if isinstance(t, Var):
            return env[t.name]
        if isinstance(t, Const):
            return self.A.constants[t.name]
        if isinstance(t, Min):
            return 0
        if isinstance(t, Max):
            return self.n - 1
        if isinstance(t, App):
            args = [self.term(a, env) for a in t.args]
            return self._lookup(self.tables[t.func], args)
        raise TypeError(f"not a term: {t!r}")

    def formula(self, f: Formula, env):
        if isinstance(f, Truth):
            return f.value
        if isinstance(f, Eq):
            return np.equal(self.term(f.left, env), self.term(f.right, env))
        if isinstance(f, BuiltinAtom):
            left, right = self.term(f.left, env), self.term(f.right, env)
            if f.op == "LEQ":
                return np.less_equal(left, right)
            if f.op == "LT":
                return np.less(left, right)
            if f.op == "SUCC":
                return np.equal(np.add(left, 1), right)
            return np.equal(np.bitwise_and(np.right_shift(right, left), 1), 1)
        if isinstance(f, Rel):
            args = tuple(self.term(a, env) for a in f.args)
            return self.dense[f.name][args]
        if isinstance(f, RelVar):
            return self._lookup(self.tables[f.name], [self.term(a, env) for a in f.args])
        if isinstance(f, Not):
            return np.logical_not(self.formula(f.arg, env))
        if isinstance(f, And):
            acc = True
            for a in f.args:
                acc = np.logical_and(acc, self.formula(a, env))
                if not np.any(acc):
                    return False
            return acc
        if isinstance(f, Or):
            acc = False
            for a in f.args:
                acc = np.logical_or(acc, self.formula(a, env))
                if np.all(acc):
                    return True
            return acc
        if isinstance(f, Implies):
            left = self.formula(f.left, env)
            if not np.any(left):
                return True
            return np.logical_or(np.logical_not(left), self.formula(f.right, env))
        if isinstance(f, Exists):
            acc = False
            for e in range(self.n):
                acc = np.logical_or(acc, self.formula(f.body, {**env, f.var: e}))
                if np.all(acc):
                    return True
            return acc
        if isinstance(f, Forall):
            acc = True
            for e in range(self.n):
                acc = np.logical_and(acc, self.formula(f.body, {**env, f.var: e}))
                if not np.any(acc):
                    return False
            return acc
        raise TypeError(f"not a formula: {f!r}")

    def count(self, f: Formula, env) -> int:
        result = np.broadcast_to(np.asarray(self.formula(f, env), dtype=bool), (self.size,))
        return int(np.count_nonzero(result))
