"""Sparse multivariate polynomials with exact integer coefficients."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

Monomial = tuple[int, ...]


def _pad(e: Monomial, p: int) -> Monomial:
    return e + (0,) * (p - len(e))


@dataclass(frozen=True)
class Polynomial:
    """``terms`` maps exponent vectors of length ``vars`` to nonzero coefficients."""

    vars: int
    terms: Mapping[Monomial, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.vars < 1:
            raise ValueError("a polynomial has at least one variable slot")
        clean: dict[Monomial, int] = {}
        for e, c in self.terms.items():
            if len(e) > self.vars or any(x < 0 for x in e):
                raise ValueError(f"bad exponent vector {e!r}")
            if c:
                e = _pad(tuple(e), self.vars)
                clean[e] = clean.get(e, 0) + c
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c})

    # -- constructors ------------------------------------------------------

    @classmethod
    def const(cls, c: int, p: int = 1) -> Polynomial:
        return cls(p, {(0,) * p: c})

    @classmethod
    def var(cls, i: int, p: int | None = None) -> Polynomial:
        """The polynomial ``x_i`` (1-based)."""
        p = i if p is None else p
        if not 1 <= i <= p:
            raise ValueError(f"variable x{i} outside 1..{p}")
        e = [0] * p
        e[i - 1] = 1
        return cls(p, {tuple(e): 1})

    def widen(self, p: int) -> Polynomial:
        if p < self.vars:
            raise ValueError("cannot narrow a polynomial")
        return Polynomial(p, {_pad(e, p): c for e, c in self.terms.items()})

    # -- arithmetic --------------------------------------------------------

    def _align(self, other: Polynomial | int) -> tuple[Polynomial, Polynomial]:
        if isinstance(other, int):
            other = Polynomial.const(other, self.vars)
        p = max(self.vars, other.vars)
        return self.widen(p), other.widen(p)

    def __add__(self, other: Polynomial | int) -> Polynomial:
        a, b = self._align(other)
        out = dict(a.terms)
        for e, c in b.terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(a.vars, out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Polynomial | int) -> Polynomial:
        a, b = self._align(other)
        return a + (-b)

    def __rsub__(self, other: int) -> Polynomial:
        return (-self) + other

    def __mul__(self, other: Polynomial | int) -> Polynomial:
        a, b = self._align(other)
        out: dict[Monomial, int] = {}
        for (e1, c1), (e2, c2) in itertools.product(a.terms.items(), b.terms.items()):
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(a.vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __call__(self, *xs: int) -> int:
        return self.evaluate(xs)

    def evaluate(self, xs: Sequence[int]) -> int:
        if len(xs) < self.vars:
            raise ValueError(f"need {self.vars} values, got {len(xs)}")
        total = 0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(xs, e):
                if k:
                    t *= x**k
            total += t
        return total

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        """Graded lexicographic order, highest first."""
        return sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), ec[0]), reverse=True)

    def split_signs(self) -> tuple[Polynomial, Polynomial]:
        """``(P, Q)`` with non-negative coefficients and ``self == P - Q``."""
        pos = {e: c for e, c in self.terms.items() if c > 0}
        neg = {e: -c for e, c in self.terms.items() if c < 0}
        return Polynomial(self.vars, pos), Polynomial(self.vars, neg)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Polynomial.const(other, self.vars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        p = max(self.vars, other.vars)
        return self.widen(p).terms == other.widen(p).terms

    def __hash__(self) -> int:
        trimmed = {}
        for e, c in self.terms.items():
            while e and e[-1] == 0:
                e = e[:-1]
            trimmed[e] = c
        return hash(frozenset(trimmed.items()))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for idx, (e, c) in enumerate(self.sorted_terms()):
            factors = []
            for i, k in enumerate(e, start=1):
                if k == 1:
                    factors.append(f"x{i}")
                elif k > 1:
                    factors.append(f"x{i}^{k}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if idx == 0:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"{'+' if c > 0 else '-'} {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self.vars}, {str(self)!r})"
