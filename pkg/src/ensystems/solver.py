"""Bounded exact solving of E_n systems and oracle-driven polynomial search.

``solve_in_box`` is a plain backtracking search with forward propagation: an
atom with exactly one unassigned variable either forces that variable or
kills the branch.  Variables are branched in ascending index order with
ascending values, so solutions come out in lexicographic order.

``find_all_conditional`` and ``bound_conditional`` wrap a YES/NO oracle for
polynomial solvability.  No total, correct oracle exists for all inputs; the
shipped :class:`BoundedSearchOracle` only answers NO soundly when the caller
knows that every relevant root has coordinates within its bound.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Protocol

import numpy as np

from .core import ADD, MUL, UNIT, Assignment, Atom, System
from .poly import Polynomial


class BudgetExhausted(RuntimeError):
    """A search hit its node or iteration limit before finishing.

    Never means "no solutions": the caller does not know the answer.
    """


@dataclass(frozen=True)
class SolveBudget:
    bound: int
    cap: int | None = None
    node_limit: int | None = None

    def __post_init__(self) -> None:
        if self.bound < 0:
            raise ValueError("bound must be non-negative")
        if self.cap is not None and self.cap < 1:
            raise ValueError("cap must be positive")
        if self.node_limit is not None and self.node_limit < 1:
            raise ValueError("node_limit must be positive")


_CONFLICT = object()


def _resolve(atom: Atom, vals: list[int | None]):
    """Return ``None`` (no information), ``_CONFLICT`` or ``(var, value)``."""
    if atom.kind == UNIT:
        v = vals[atom.k]
        if v is None:
            return atom.k, 1
        return None if v == 1 else _CONFLICT

    i, j, k = atom.i, atom.j, atom.k
    unknown = {x for x in (i, j, k) if vals[x] is None}
    if not unknown:
        if atom.kind == ADD:
            ok = vals[i] + vals[j] == vals[k]
        else:
            ok = vals[i] * vals[j] == vals[k]
        return None if ok else _CONFLICT
    if len(unknown) > 1:
        return None

    (v,) = unknown
    lhs_hits = (i == v) + (j == v)
    rhs_hit = k == v
    known_lhs = [vals[x] for x in (i, j) if x != v]

    if atom.kind == ADD:
        coeff = lhs_hits - rhs_hit
        rest = (0 if rhs_hit else vals[k]) - sum(known_lhs)
        if coeff == 0:
            return None if rest == 0 else _CONFLICT
        q, r = divmod(rest, coeff)
        if r or q < 0:
            return _CONFLICT
        return v, q

    if not rhs_hit:
        target = vals[k]
        if lhs_hits == 2:
            root = math.isqrt(target)
            return (v, root) if root * root == target else _CONFLICT
        c = known_lhs[0]
        if c == 0:
            return None if target == 0 else _CONFLICT
        q, r = divmod(target, c)
        return _CONFLICT if r else (v, q)
    if lhs_hits == 0:
        return v, vals[i] * vals[j]
    if lhs_hits == 1:
        # v * c = v
        return None if known_lhs[0] == 1 else (v, 0)
    # v * v = v leaves {0, 1}; branching settles it
    return None


class _Search:
    def __init__(self, s: System, budget: SolveBudget):
        self.n = s.n
        self.atoms = s.atoms
        self.bound = budget.bound
        self.cap = budget.cap
        self.node_limit = budget.node_limit
        self.nodes = 0
        self.by_var: list[list[Atom]] = [[] for _ in range(s.n + 1)]
        for atom in s.atoms:
            for x in set(atom.variables()):
                self.by_var[x].append(atom)
        self.found: list[Assignment] = []

    def propagate(self, vals: list[int | None], queue: list[Atom]) -> bool:
        pending = list(queue)
        queued = set(pending)
        while pending:
            atom = pending.pop()
            queued.discard(atom)
            res = _resolve(atom, vals)
            if res is None:
                continue
            if res is _CONFLICT:
                return False
            var, value = res
            if value < 0 or value > self.bound:
                return False
            vals[var] = value
            for other in self.by_var[var]:
                if other not in queued:
                    queued.add(other)
                    pending.append(other)
        return True

    def run(self, fixed: Mapping[int, int]) -> list[Assignment]:
        vals: list[int | None] = [None] * (self.n + 1)
        for var, value in fixed.items():
            if not 1 <= var <= self.n:
                raise ValueError(f"pinned variable x{var} outside 1..{self.n}")
            if value < 0 or value > self.bound:
                return []
            vals[var] = value
        if self.propagate(vals, list(self.atoms)):
            self.descend(vals, 1)
        return self.found

    def descend(self, vals: list[int | None], start: int) -> bool:
        """Depth-first search; returns ``True`` once the cap is reached."""
        var = start
        while var <= self.n and vals[var] is not None:
            var += 1
        if var > self.n:
            self.found.append(tuple(vals[1:]))  # type: ignore[arg-type]
            return self.cap is not None and len(self.found) >= self.cap
        for value in range(self.bound + 1):
            self.nodes += 1
            if self.node_limit is not None and self.nodes > self.node_limit:
                raise BudgetExhausted(f"node limit {self.node_limit} exceeded")
            child = list(vals)
            child[var] = value
            if self.propagate(child, self.by_var[var]) and self.descend(child, var + 1):
                return True
        return False


def solve_in_box(
    s: System, budget: SolveBudget | int, fixed: Mapping[int, int] | None = None
) -> list[Assignment]:
    """All solutions of ``s`` in ``[0, bound]^n``, lexicographically, up to ``cap``.

    ``fixed`` pins 1-based variables to values before the search starts.
    Raises :class:`BudgetExhausted` when ``node_limit`` branch nodes are used.
    """
    if isinstance(budget, int):
        budget = SolveBudget(budget)
    return _Search(s, budget).run(fixed or {})


def brute_force_solutions(s: System, bound: int) -> list[Assignment]:
    """Filter every tuple of ``[0, bound]^n``; only for tiny boxes."""
    return [
        a
        for a in itertools.product(range(bound + 1), repeat=s.n)
        if all(atom.holds(a) for atom in s.atoms)
    ]


# -- polynomial box search --------------------------------------------------

_BLOCK = 1 << 18


def _int64_safe(d: Polynomial, bound: int) -> bool:
    worst = sum(abs(c) * bound ** sum(e) for e, c in d.terms.items())
    return worst < 1 << 62


def poly_roots_in_box(
    d: Polynomial, bound: int, first_only: bool = False
) -> list[Assignment]:
    """Roots of ``d`` in ``[0, bound]^p`` in lexicographic order, by exhaustive search.

    The innermost coordinates are evaluated as a numpy block; int64 is used
    only when no intermediate can overflow, otherwise Python integers.
    """
    p = d.vars
    if bound < 0:
        return []
    side = bound + 1
    inner = 0
    while inner < p and side ** (inner + 1) <= _BLOCK:
        inner += 1
    outer = p - inner
    dtype = np.int64 if _int64_safe(d, bound) else object

    grid = np.indices((side,) * inner, dtype=np.int64).reshape(inner, -1)
    if dtype is object:
        grid = grid.astype(object)
    inner_pows = {}
    for e in d.terms:
        for axis in range(inner):
            k = e[outer + axis]
            if k and (axis, k) not in inner_pows:
                inner_pows[axis, k] = grid[axis] ** k

    roots: list[Assignment] = []
    npoints = grid.shape[1] if inner else 1
    for prefix in itertools.product(range(side), repeat=outer):
        acc = np.zeros(npoints, dtype=dtype)
        for e, c in d.terms.items():
            coef = c
            for x, k in zip(prefix, e[:outer]):
                if k:
                    coef *= x**k
            if coef == 0:
                continue
            term = np.full(npoints, coef, dtype=dtype)
            for axis in range(inner):
                k = e[outer + axis]
                if k:
                    term = term * inner_pows[axis, k]
            acc = acc + term
        hits = np.flatnonzero(acc == 0)
        for h in hits:
            tail = tuple(int(grid[axis, h]) for axis in range(inner))
            roots.append(tuple(prefix) + tail)
            if first_only:
                return roots
    return roots


class Oracle(Protocol):
    def __call__(self, d: Polynomial) -> bool:
        """YES (``True``) or NO (``False``) for solvability of ``d = 0`` over N."""


@dataclass(frozen=True)
class BoundedSearchOracle:
    """Answers YES iff ``d = 0`` has a root with every coordinate at most ``bound``.

    A NO from this stub is only trustworthy when the caller already knows all
    roots lie inside the bound.  It is a test double, not a decision procedure.
    """

    bound: int

    def __call__(self, d: Polynomial) -> bool:
        return bool(poly_roots_in_box(d, self.bound, first_only=True))


def padded_equation(d: Polynomial, m: int) -> Polynomial:
    """``(m + y - (x_1 + ... + x_p))^2 + d^2`` with ``y`` as variable ``p + 1``."""
    p = d.vars
    slack = Polynomial.var(p + 1, p + 1)
    total = Polynomial.const(0, p + 1)
    for i in range(1, p + 1):
        total = total + Polynomial.var(i, p + 1)
    return (slack + m - total) ** 2 + d.widen(p + 1) ** 2


def bound_conditional(
    d: Polynomial, oracle: Callable[[Polynomial], bool], max_m: int | None = None
) -> int:
    """First ``m`` at which the oracle says the padded equation is unsolvable.

    Loops forever while the oracle keeps answering YES; ``max_m`` turns that
    divergence into :class:`BudgetExhausted`.
    """
    m = 0
    while True:
        if max_m is not None and m > max_m:
            raise BudgetExhausted(f"oracle still answered YES at m={max_m}")
        if not oracle(padded_equation(d, m)):
            return m
        m += 1


def find_all_conditional(
    d: Polynomial, oracle: Callable[[Polynomial], bool], max_m: int | None = None
) -> list[Assignment]:
    """All roots with ``max < m`` once the oracle first answers NO."""
    m = bound_conditional(d, oracle, max_m)
    return poly_roots_in_box(d, m - 1) if m > 0 else []
