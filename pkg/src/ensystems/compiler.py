"""Translation between polynomial equations and E_n systems.

* :func:`parse_poly` reads ``x1^2 - 3*x2*(x1 + 1)``-style text.
* :func:`compile_to_system` lowers ``D = 0`` to a system whose solutions
  project onto the roots of ``D`` with a unique, computable extension.
* :func:`dioph` folds a system back into one equation, the sum of squared
  atom residuals.
* :func:`build_sn` pads a graph system for ``g`` into the n-variable system
  whose solutions carry ``u = g(n) + 1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .core import ADD, MUL, UNIT, Assignment, Atom, System, satisfies
from .poly import Monomial, Polynomial


class PolySyntaxError(ValueError):
    def __init__(self, pos: int, message: str):
        super().__init__(f"position {pos}: {message}")
        self.pos = pos


# -- parsing -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|x(\d+)|(\*\*|[-+*^()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PolySyntaxError(start, f"unexpected character {text[start]!r}")
        start = m.end() - len(m.group(0).lstrip())
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("var", m.group(2), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            tokens.append(("op", op, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent over::

        expr   := term (('+' | '-') term)*
        term   := unary ('*' unary)*
        unary  := '-' unary | '+' unary | power
        power  := atom ('^' NUMBER)?
        atom   := NUMBER | VAR | '(' expr ')'
    """

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.nvars = max(
            [int(v) for kind, v, _ in self.tokens if kind == "var"], default=1
        )
        for kind, v, at in self.tokens:
            if kind == "var" and int(v) < 1:
                raise PolySyntaxError(at, "variable index 0 (indices are 1-based)")

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value: str) -> None:
        kind, v, at = self.take()
        if kind != "op" or v != value:
            raise PolySyntaxError(at, f"expected {value!r}")

    def parse(self) -> Polynomial:
        result = self.expr()
        kind, v, at = self.peek()
        if kind != "end":
            raise PolySyntaxError(at, f"unexpected {v!r}")
        return result

    def expr(self) -> Polynomial:
        acc = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> Polynomial:
        acc = self.unary()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            acc = acc * self.unary()
        return acc

    def unary(self) -> Polynomial:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, v, at = self.take()
            if kind != "num":
                raise PolySyntaxError(at, "exponent must be a non-negative integer literal")
            return base ** int(v)
        return base

    def atom(self) -> Polynomial:
        kind, v, at = self.take()
        if kind == "num":
            return Polynomial.const(int(v), self.nvars)
        if kind == "var":
            return Polynomial.var(int(v), self.nvars)
        if (kind, v) == ("op", "("):
            inner = self.expr()
            self.expect(")")
            return inner
        raise PolySyntaxError(at, "expected a number, variable or '('" if kind != "end"
                              else "unexpected end of input")


def parse_poly(text: str) -> Polynomial:
    """Expand a polynomial expression over ``x1 .. xp`` exactly.

    ``p`` is the largest variable index mentioned (at least 1).
    """
    return _Parser(text).parse()


# -- polynomial -> system ---------------------------------------------------------

@dataclass(frozen=True)
class Step:
    """How to compute one auxiliary coordinate from earlier ones."""

    target: int
    op: str  # "unit", "zero", "add", "mul"
    args: tuple[int, ...] = ()


@dataclass(frozen=True)
class CompilationResult:
    system: System
    p: int
    aux_plan: tuple[Step, ...]
    polynomial: Polynomial
    roles: dict[int, str] = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return self.system.n


class _Builder:
    def __init__(self, p: int):
        self.p = p
        self.next = p + 1
        self.atoms: list[Atom] = []
        self.plan: list[Step] = []
        self.roles: dict[int, str] = {}
        self.consts: dict[int, int] = {}
        self.monos: dict[Monomial, int] = {}

    def fresh(self, role: str) -> int:
        idx = self.next
        self.next += 1
        self.roles[idx] = role
        return idx

    def emit_unit(self) -> int:
        v = self.fresh("1")
        self.atoms.append(Atom.unit(v))
        self.plan.append(Step(v, "unit"))
        self.consts[1] = v
        return v

    def emit_zero(self) -> int:
        v = self.fresh("0")
        self.atoms.append(Atom.add(v, v, v))
        self.plan.append(Step(v, "zero"))
        self.consts[0] = v
        return v

    def add(self, a: int, b: int, role: str) -> int:
        v = self.fresh(role)
        self.atoms.append(Atom.add(a, b, v))
        self.plan.append(Step(v, "add", (a, b)))
        return v

    def mul(self, a: int, b: int, role: str) -> int:
        v = self.fresh(role)
        self.atoms.append(Atom.mul(a, b, v))
        self.plan.append(Step(v, "mul", (a, b)))
        return v

    def const(self, c: int) -> int:
        """Double-and-add from 1 along the binary digits of ``c``."""
        if c in self.consts:
            return self.consts[c]
        bits = bin(c)[3:]
        value, var = 1, self.consts[1]
        for bit in bits:
            value *= 2
            if value in self.consts:
                var = self.consts[value]
            else:
                var = self.add(var, var, str(value))
                self.consts[value] = var
            if bit == "1":
                value += 1
                if value in self.consts:
                    var = self.consts[value]
                else:
                    var = self.add(var, self.consts[1], str(value))
                    self.consts[value] = var
        return var

    def monomial(self, e: Monomial) -> int | None:
        """Left-to-right product chain; ``None`` for the empty monomial."""
        factors = [i + 1 for i, k in enumerate(e) for _ in range(k)]
        if not factors:
            return None
        var = factors[0]
        for r in range(2, len(factors) + 1):
            prefix = tuple(factors[:r])
            key = _exponents(prefix, self.p)
            if key in self.monos:
                var = self.monos[key]
            else:
                var = self.mul(var, factors[r - 1], _mono_name(key))
                self.monos[key] = var
        return var

    def balanced_sum(self, parts: list[int], role: str) -> int:
        if not parts:
            return self.consts[0]
        level = parts
        while len(level) > 1:
            nxt = []
            for a in range(0, len(level) - 1, 2):
                nxt.append(self.add(level[a], level[a + 1], role))
            if len(level) % 2:
                nxt.append(level[-1])
            level = nxt
        return level[0]

    def side(self, poly: Polynomial, role: str) -> int:
        parts = []
        for e, c in poly.sorted_terms():
            mono = self.monomial(e)
            if mono is None:
                parts.append(self.const(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(self.mul(self.const(c), mono, f"{c}*{_mono_name(e)}"))
        return self.balanced_sum(parts, role)


def _exponents(factors: tuple[int, ...], p: int) -> Monomial:
    e = [0] * p
    for f in factors:
        e[f - 1] += 1
    return tuple(e)


def _mono_name(e: Monomial) -> str:
    return "*".join(f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e, 1) if k)


def compile_to_system(d: Polynomial) -> CompilationResult:
    """Lower ``d = 0`` to a system over ``n > p`` variables.

    Layout: ``x1 .. xp`` are the polynomial's variables, then a unit variable,
    a zero variable (``z + z = z``), constants, monomials, term products and
    the two sums ``u_P`` and ``u_Q`` of ``d = P - Q``; the last atom is
    ``u_P + z = u_Q``.  Every auxiliary is a function of earlier coordinates.
    """
    if d.is_zero():
        raise ValueError("the zero polynomial has no finite encoding; refusing")
    p = d.vars
    b = _Builder(p)
    b.emit_unit()
    zero = b.emit_zero()
    pos, neg = d.split_signs()
    u_p = b.side(pos, "P")
    u_q = b.side(neg, "Q")
    b.atoms.append(Atom.add(u_p, zero, u_q))
    system = System(b.next - 1, tuple(b.atoms))
    return CompilationResult(system, p, tuple(b.plan), d, b.roles)


def extend_witness(r: CompilationResult, base: Assignment) -> Assignment:
    """The unique extension of a root of the compiled polynomial."""
    if len(base) != r.p:
        raise ValueError(f"base has length {len(base)}, expected {r.p}")
    if any(v < 0 for v in base):
        raise ValueError("base must be non-negative")
    if r.polynomial.evaluate(base) != 0:
        raise ValueError(f"{tuple(base)} is not a root of {r.polynomial}")
    full = run_plan(r, base)
    if not satisfies(full, r.system):
        raise AssertionError("extension does not satisfy the compiled system")
    return full


def run_plan(r: CompilationResult, base: Assignment) -> Assignment:
    """Evaluate every auxiliary from ``base``, root or not.

    All steps are sums and products of non-negative values, so each
    coordinate is monotone in ``base``.
    """
    vals = [0] * (r.n + 1)
    vals[1 : r.p + 1] = base
    for step in r.aux_plan:
        if step.op == "unit":
            vals[step.target] = 1
        elif step.op == "zero":
            vals[step.target] = 0
        elif step.op == "add":
            vals[step.target] = vals[step.args[0]] + vals[step.args[1]]
        else:
            vals[step.target] = vals[step.args[0]] * vals[step.args[1]]
    return tuple(vals[1:])


# -- system -> polynomial ----------------------------------------------------------

def dioph(s: System) -> Polynomial:
    """Sum of squared residuals; same non-negative solutions as ``s``."""
    if not s.atoms:
        raise ValueError("dioph needs a non-empty system")
    n = s.n
    x = [None] + [Polynomial.var(i, n) for i in range(1, n + 1)]
    total = Polynomial.const(0, n)
    for atom in s.atoms:
        if atom.kind == UNIT:
            residual = x[atom.k] - 1
        elif atom.kind == ADD:
            residual = x[atom.i] + x[atom.j] - x[atom.k]
        else:
            residual = x[atom.i] * x[atom.j] - x[atom.k]
        total = total + residual * residual
    return total


# -- padded S_n systems -------------------------------------------------------------

@dataclass(frozen=True)
class SnLayout:
    """1-based positions of the named blocks of a built S_n."""

    s: int
    pad: tuple[int, ...]
    t: tuple[int, ...]
    w: int
    y: int
    u: int


def sn_layout(s: int, n: int) -> SnLayout:
    """``phi`` on ``1..s``, then the ``z_i = 1`` padding, then ``t``, ``w``, ``y``, ``u``."""
    if s < 3:
        raise ValueError("phi needs at least 3 variables")
    if n < 6 + 2 * s:
        raise ValueError(f"n must be at least 6 + 2s = {6 + 2 * s}")
    half = n // 2
    pad_count = n - half - 3 - s
    pad = tuple(range(s + 1, s + 1 + pad_count))
    t = tuple(range(s + 1 + pad_count, s + 1 + pad_count + half))
    w = t[-1] + 1
    layout = SnLayout(s, pad, t, w, w + 1, w + 2)
    assert layout.u == n
    return layout


def build_sn(phi: System, n: int) -> System:
    """Pad ``phi`` (``x1 -> x2`` graph over ``s`` variables) to exactly ``n`` variables.

    The chain ``t_1 = 1, t_{r+1} = t_r + t_1`` reaches ``t_h = h`` with
    ``h = floor(n/2)``, then ``w = 2h``, ``x1 = w + y`` with ``y = 0`` for even
    ``n`` and ``y = 1`` for odd ``n``, so ``x1 = n``; finally ``u = x2 + 1``.
    """
    lay = sn_layout(phi.n, n)
    atoms = list(phi.atoms)
    atoms += [Atom.unit(z) for z in lay.pad]
    t = lay.t
    atoms.append(Atom.unit(t[0]))
    for r in range(1, len(t)):
        atoms.append(Atom.add(t[r - 1], t[0], t[r]))
    atoms.append(Atom.add(t[-1], t[-1], lay.w))
    atoms.append(Atom.add(lay.w, lay.y, 1))
    if n % 2 == 0:
        atoms.append(Atom.add(lay.y, lay.y, lay.y))
    else:
        atoms.append(Atom.unit(lay.y))
    atoms.append(Atom.add(2, t[0], lay.u))
    return System(n, tuple(atoms))
