"""Atoms of E_n, systems, assignments and exact evaluation.

E_n is the finite set of equations ``x_k = 1``, ``x_i + x_j = x_k`` and
``x_i * x_j = x_k`` over variables ``x_1 .. x_n``.  Commutative atoms are
stored once, with ``i <= j``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

UNIT, ADD, MUL = 0, 1, 2
_KIND_NAMES = {UNIT: "unit", ADD: "add", MUL: "mul"}

Assignment = tuple[int, ...]


class SystemSyntaxError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True, order=True)
class Atom:
    """One equation of E_n in canonical form.

    Ordering compares ``(kind, i, j, k)``; unit atoms keep ``i = j = 0``.
    """

    kind: int
    i: int
    j: int
    k: int

    def __post_init__(self) -> None:
        if self.kind == UNIT:
            if self.i or self.j:
                raise ValueError("unit atom carries only k")
            if self.k < 1:
                raise ValueError("variable indices start at 1")
        elif self.kind in (ADD, MUL):
            if min(self.i, self.j, self.k) < 1:
                raise ValueError("variable indices start at 1")
            if self.i > self.j:
                raise ValueError("non-canonical atom, use Atom.add/Atom.mul")
        else:
            raise ValueError(f"unknown atom kind {self.kind!r}")

    @classmethod
    def unit(cls, k: int) -> Atom:
        return cls(UNIT, 0, 0, k)

    @classmethod
    def add(cls, i: int, j: int, k: int) -> Atom:
        return cls(ADD, min(i, j), max(i, j), k)

    @classmethod
    def mul(cls, i: int, j: int, k: int) -> Atom:
        return cls(MUL, min(i, j), max(i, j), k)

    @property
    def max_index(self) -> int:
        return max(self.i, self.j, self.k)

    def variables(self) -> tuple[int, ...]:
        if self.kind == UNIT:
            return (self.k,)
        return (self.i, self.j, self.k)

    def holds(self, a: Sequence[int]) -> bool:
        if self.kind == UNIT:
            return a[self.k - 1] == 1
        if self.kind == ADD:
            return a[self.i - 1] + a[self.j - 1] == a[self.k - 1]
        return a[self.i - 1] * a[self.j - 1] == a[self.k - 1]

    def __str__(self) -> str:
        if self.kind == UNIT:
            return f"x{self.k} = 1"
        op = "+" if self.kind == ADD else "*"
        return f"x{self.i} {op} x{self.j} = x{self.k}"

    def __repr__(self) -> str:
        if self.kind == UNIT:
            return f"Unit({self.k})"
        return f"{_KIND_NAMES[self.kind].title()}({self.i},{self.j},{self.k})"


@dataclass(frozen=True)
class System:
    """A canonical subset of E_n: sorted, duplicate-free atoms plus ``n``.

    ``n`` is part of the identity; the same atoms over a larger ``n`` give a
    different system.
    """

    n: int
    atoms: tuple[Atom, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        canon = tuple(sorted(set(self.atoms)))
        if canon != self.atoms:
            object.__setattr__(self, "atoms", canon)
        for atom in self.atoms:
            if atom.max_index > self.n:
                raise ValueError(f"{atom!r} mentions an index above n={self.n}")

    @classmethod
    def of(cls, atoms: Iterable[Atom], n: int | None = None) -> System:
        atoms = tuple(atoms)
        top = max((a.max_index for a in atoms), default=1)
        return cls(top if n is None else n, atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.atoms)

    def __contains__(self, atom: object) -> bool:
        return atom in set(self.atoms)

    def issubset(self, other: System) -> bool:
        return set(self.atoms) <= set(other.atoms)

    def union(self, atoms: Iterable[Atom]) -> System:
        return System(self.n, self.atoms + tuple(atoms))


def canonical_atoms(n: int) -> list[Atom]:
    """All canonical atoms of E_n in system order."""
    if n < 1:
        raise ValueError("n must be positive")
    out = [Atom.unit(k) for k in range(1, n + 1)]
    for kind in (ADD, MUL):
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                for k in range(1, n + 1):
                    out.append(Atom(kind, i, j, k))
    return out


def _check_assignment(a: Sequence[int], n: int) -> None:
    if len(a) != n:
        raise ValueError(f"assignment has length {len(a)}, expected {n}")
    if any(v < 0 for v in a):
        raise ValueError("assignments are over the non-negative integers")


def satisfies(a: Sequence[int], s: System) -> bool:
    _check_assignment(a, s.n)
    return all(atom.holds(a) for atom in s.atoms)


def type_of(a: Sequence[int], n: int | None = None) -> System:
    """The maximal subsystem of E_n satisfied by ``a``."""
    if n is None:
        n = len(a)
    _check_assignment(a, n)
    return System(n, tuple(atom for atom in canonical_atoms(n) if atom.holds(a)))


def max_coord(a: Sequence[int]) -> int:
    return max(a, default=0)


# -- text format ---------------------------------------------------------

_VAR = r"x(\d+)"
_UNIT_RE = re.compile(rf"^{_VAR}\s*=\s*1$")
_BIN_RE = re.compile(rf"^{_VAR}\s*([+*])\s*{_VAR}\s*=\s*{_VAR}$")
_HEADER_RE = re.compile(r"^n\s+(\d+)$")


def parse_system(text: str) -> System:
    """Parse the line format ``x<k> = 1`` / ``x<i> + x<j> = x<k>`` / ``x<i> * x<j> = x<k>``.

    Blank lines and ``#`` comments are skipped.  An ``n <N>`` header may widen
    the variable count beyond the largest mentioned index.
    """
    atoms: list[Atom] = []
    header: tuple[int, int] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER_RE.match(line)
        if m:
            if header is not None:
                raise SystemSyntaxError(lineno, "duplicate n header")
            header = (lineno, int(m.group(1)))
            continue
        m = _UNIT_RE.match(line)
        if m:
            k = int(m.group(1))
            if k < 1:
                raise SystemSyntaxError(lineno, "variable index 0 (indices are 1-based)")
            atoms.append(Atom.unit(k))
            continue
        m = _BIN_RE.match(line)
        if not m:
            raise SystemSyntaxError(lineno, f"cannot parse {raw.strip()!r}")
        i, j, k = int(m.group(1)), int(m.group(3)), int(m.group(4))
        if min(i, j, k) < 1:
            raise SystemSyntaxError(lineno, "variable index 0 (indices are 1-based)")
        atoms.append(Atom.add(i, j, k) if m.group(2) == "+" else Atom.mul(i, j, k))
    top = max((a.max_index for a in atoms), default=0)
    if header is not None:
        lineno, n = header
        if n < top:
            raise SystemSyntaxError(lineno, f"n {n} is smaller than max index {top}")
        if n < 1:
            raise SystemSyntaxError(lineno, "n must be positive")
    else:
        if not atoms:
            raise SystemSyntaxError(0, "empty system without an n header")
        n = top
    return System(n, tuple(atoms))


def format_system(s: System) -> str:
    lines = [f"n {s.n}"]
    lines.extend(str(a) for a in s.atoms)
    return "\n".join(lines) + "\n"
