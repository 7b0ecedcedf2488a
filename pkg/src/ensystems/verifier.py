"""Explicit system families with closed-form big-integer solutions.

Every witness is checked with exact integer arithmetic against the system it
belongs to.  The families are indexed by the tower length ``n``; the
Mersenne family needs ``2^n - 1`` prime and the Fermat family needs
``2^(2^n) + 1`` prime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Assignment, Atom, System, max_coord, satisfies
from .solver import BudgetExhausted, SolveBudget, solve_in_box

FAMILIES = ("thm2", "thm3", "thm4", "uncond", "intro1", "intro2")
FERMAT_EXPONENTS = (1, 2, 3, 4)
BINOMIAL_LIMIT = 1 << 13
UNCOND_LIMIT = 4
THM4_LIMIT = 4


class VerificationError(AssertionError):
    pass


def is_prime_trial(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for f in range(3, math.isqrt(n) + 1, 2):
        if n % f == 0:
            return False
    return True


def lucas_lehmer(p: int) -> bool:
    """Lucas-Lehmer test of ``2^p - 1`` for an odd prime ``p``."""
    if p < 3 or p % 2 == 0:
        raise ValueError("Lucas-Lehmer needs an odd prime exponent p >= 3")
    if not is_prime_trial(p):
        raise ValueError(f"exponent {p} is not prime")
    mp = (1 << p) - 1
    s = 4
    for _ in range(p - 2):
        s = (s * s - 2) % mp
    return s == 0


def mersenne_is_prime(n: int) -> bool:
    if n == 2:
        return True
    if n < 2 or not is_prime_trial(n):
        return False
    return lucas_lehmer(n)


def tower(n: int, start: int = 1) -> list[Atom]:
    """``x_i * x_i = x_{i+1}`` for ``i = start .. start + n - 1``."""
    return [Atom.mul(i, i, i + 1) for i in range(start, start + n)]


def tail_sum(big_m: int, x: int) -> int:
    """``sum_{k=2}^{M} C(M, k) x^(k-2)`` by Horner's rule."""
    if big_m < 2:
        return 0
    acc = 0
    c = 1  # C(M, M)
    for k in range(big_m, 1, -1):
        acc = acc * x + c
        c = c * k // (big_m - k + 1)
    return acc


def binomial_identity_check(big_m: int, x: int) -> bool:
    """``(x + 1)^M == 1 + M x + x^2 * tail_sum(M, x)``, exactly."""
    if big_m < 1:
        raise ValueError("M must be positive")
    if big_m > BINOMIAL_LIMIT:
        raise BudgetExhausted(f"M={big_m} exceeds the expansion limit {BINOMIAL_LIMIT}")
    if x < 0:
        raise ValueError("x must be non-negative")
    return (x + 1) ** big_m == 1 + big_m * x + x * x * tail_sum(big_m, x)


# -- Pell -------------------------------------------------------------------------

@dataclass(frozen=True)
class PellSolution:
    k: int
    x: int
    y: int

    @property
    def modulus(self) -> int:
        return 5 ** (2 * self.k + 1)

    def holds(self) -> bool:
        return self.x * self.x + 1 == self.modulus * self.y * self.y


def lucas_pair_linear(j: int) -> tuple[int, int]:
    """``(s_j, t_j)`` by the recurrence ``u_{j+1} = 4 u_j + u_{j-1}``."""
    s0, s1, t0, t1 = 2, 4, 0, 2
    if j == 0:
        return s0, t0
    for _ in range(j - 1):
        s0, s1 = s1, 4 * s1 + s0
        t0, t1 = t1, 4 * t1 + t0
    return s1, t1


def lucas_pair(j: int) -> tuple[int, int]:
    """``(s_j, t_j)`` by index doubling.

    With ``V = s`` and ``U = t / 2`` (P = 4, Q = -1, D = 20):
    ``U_2j = U_j V_j``, ``V_2j = V_j^2 - 2 (-1)^j``,
    ``U_{j+1} = (4 U_j + V_j) / 2``, ``V_{j+1} = (20 U_j + 4 V_j) / 2``.
    """
    if j < 0:
        raise ValueError("index must be non-negative")
    u, v = 0, 2
    idx = 0
    for bit in bin(j)[2:]:
        u, v = u * v, v * v - (2 if idx % 2 == 0 else -2)
        idx *= 2
        if bit == "1":
            u, v = (4 * u + v) // 2, (20 * u + 4 * v) // 2
            idx += 1
    return v, 2 * u


def pell_minimal(k: int) -> PellSolution:
    """Minimal solution of ``x^2 + 1 = 5^(2k+1) y^2``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    j = 5**k
    s, t = lucas_pair(j)
    x, rem_x = divmod(s, 2)
    y, rem_y = divmod(t, 2 * j)
    sol = PellSolution(k, x, y)
    if rem_x or rem_y or not sol.holds():
        raise VerificationError(f"Lucas sequence values do not solve the equation for k={k}")
    return sol


def pell_next(sol: PellSolution) -> PellSolution:
    """Next solution of ``x^2 - N y^2 = -1`` from ``(x + y sqrt N)^3``."""
    if not sol.holds():
        raise ValueError("input is not a solution")
    big_n = sol.modulus
    x, y = sol.x, sol.y
    nxt = PellSolution(sol.k, x**3 + 3 * x * y * y * big_n, 3 * x * x * y + y**3 * big_n)
    if not nxt.holds() or nxt.x <= x:
        raise VerificationError("cubing did not produce a larger solution")
    return nxt


# -- systems -----------------------------------------------------------------------

def intro1_system(n: int) -> System:
    if n < 3:
        raise ValueError("intro1 needs n >= 3")
    atoms = [Atom.unit(1), Atom.add(1, 1, 2)] + tower(n - 2, start=2)
    return System(n, tuple(atoms))


def intro2_system(n: int) -> System:
    if n < 2:
        raise ValueError("intro2 needs n >= 2")
    atoms = [Atom.add(1, 1, 2), Atom.mul(1, 1, 2)] + tower(n - 2, start=2)
    return System(n, tuple(atoms))


def thm2_system(n: int) -> System:
    a = lambda r: n + r  # noqa: E731
    atoms = tower(n) + [
        Atom.unit(a(2)),
        Atom.add(a(3), a(2), a(4)),
        Atom.add(a(4), a(2), a(5)),
        Atom.add(a(5), a(2), 1),
        Atom.mul(a(5), a(5), a(6)),
        Atom.mul(a(6), a(7), a(8)),
        Atom.add(a(8), 1, a(1)),
    ]
    return System(n + 8, tuple(atoms))


def thm3_system(n: int) -> System:
    a = lambda r: n + r  # noqa: E731
    atoms = tower(n) + [
        Atom.unit(a(2)),
        Atom.add(1, a(2), a(3)),
        Atom.add(a(3), a(2), a(4)),
        Atom.add(a(1), a(2), a(5)),
        Atom.mul(a(4), a(6), a(5)),
    ]
    return System(n + 6, tuple(atoms))


def thm4_system(n: int) -> System:
    a = lambda r: n + r  # noqa: E731
    atoms = tower(n) + [
        Atom.mul(1, a(1), a(2)),
        Atom.unit(a(3)),
        Atom.add(a(3), a(3), a(4)),
        Atom.add(a(4), a(4), a(5)),
        Atom.add(a(5), a(3), 1),
        Atom.mul(a(6), a(6), a(7)),
        Atom.mul(a(8), a(8), a(9)),
        Atom.add(a(9), a(3), a(10)),
        Atom.mul(a(2), a(7), a(10)),
    ]
    return System(n + 10, tuple(atoms))


def uncond_system(n: int) -> System:
    a = lambda r: n + r  # noqa: E731
    atoms = tower(n) + [
        Atom.unit(a(2)),
        Atom.add(a(3), a(2), 1),
        Atom.add(a(4), a(2), a(3)),
        Atom.mul(a(4), a(5), a(1)),
    ]
    return System(n + 5, tuple(atoms))


def family_system(family: str, n: int) -> System:
    builders = {
        "thm2": thm2_system,
        "thm3": thm3_system,
        "thm4": thm4_system,
        "uncond": uncond_system,
        "intro1": intro1_system,
        "intro2": intro2_system,
    }
    if family not in builders:
        raise ValueError(f"unknown family {family!r}")
    if n < 1:
        raise ValueError("n must be positive")
    return builders[family](n)


# -- closed forms -------------------------------------------------------------------

def _powers(base: int, count: int) -> list[int]:
    """``base^(2^(i-1))`` for ``i = 1 .. count``."""
    out = [base]
    for _ in range(count - 1):
        out.append(out[-1] * out[-1])
    return out


def thm2_solution(n: int) -> tuple[Assignment, int]:
    q = 1 << n
    head = _powers(q, n + 1)
    rest = [
        1,
        q - 3,
        q - 2,
        q - 1,
        (q - 1) ** 2,
        1 + tail_sum(q, q - 1),
        q**q - q,
    ]
    return tuple(head + rest), q**q


def thm3_solution(n: int) -> tuple[Assignment, int]:
    big = 1 << (1 << n)  # 2^(2^n)
    e = 1 << n
    head = _powers(big - 1, n + 1)
    quotient = 1 + sum(
        math.comb(e, k) * (big + 1) ** (k - 1) * (-2) ** (e - k) for k in range(1, e + 1)
    )
    top = (big - 1) ** e + 1
    return tuple(head + [1, big, big + 1, top, quotient]), top


def uncond_solution(n: int) -> tuple[Assignment, int]:
    big = 1 << (1 << n)
    e = 1 << n
    head = _powers(2 + big, n + 1)
    tail = [1, 1 + big, big, (1 + (big >> 1)) ** e]
    sol = tuple(head + tail)
    return sol, max(sol)


def thm4_solution(n: int) -> tuple[Assignment, int]:
    pell = pell_minimal(1 << (n - 1))
    head = _powers(5, n + 1)
    x_n2 = 5 * head[-1]
    rest = [x_n2, 1, 2, 4, pell.y, pell.y**2, pell.x, pell.x**2, pell.x**2 + 1]
    sol = tuple(head + rest)
    return sol, max(sol)


def intro1_solution(n: int) -> tuple[Assignment, int]:
    sol = tuple([1] + _powers(2, n - 1))
    return sol, sol[-1]


def intro2_solution(n: int) -> tuple[Assignment, int]:
    sol = tuple(_powers(2, n))
    return sol, sol[-1]


@dataclass(frozen=True)
class FamilyWitness:
    family: str
    param: int
    system: System
    solution: Assignment
    claimed_max: int

    @property
    def ok(self) -> bool:
        return satisfies(self.solution, self.system) and max_coord(self.solution) == self.claimed_max


def _check_preconditions(family: str, n: int) -> None:
    if n < 1:
        raise ValueError("n must be positive")
    if family == "thm2" and not mersenne_is_prime(n):
        raise ValueError(f"2^{n} - 1 is not prime")
    if family == "thm3":
        if n not in FERMAT_EXPONENTS:
            raise ValueError(f"Fermat parameter restricted to {FERMAT_EXPONENTS}")
        if not is_prime_trial((1 << (1 << n)) + 1):
            raise ValueError(f"2^(2^{n}) + 1 is not prime")
    if family == "thm4" and n > THM4_LIMIT:
        raise BudgetExhausted(f"thm4 witnesses beyond n={THM4_LIMIT} are too large")
    if family == "uncond" and n > UNCOND_LIMIT:
        raise BudgetExhausted(f"uncond beyond n={UNCOND_LIMIT} is too large")
    if family == "intro1" and n < 3:
        raise ValueError("intro1 needs n >= 3")
    if family == "intro2" and n < 2:
        raise ValueError("intro2 needs n >= 2")


_SOLUTIONS = {
    "thm2": thm2_solution,
    "thm3": thm3_solution,
    "thm4": thm4_solution,
    "uncond": uncond_solution,
    "intro1": intro1_solution,
    "intro2": intro2_solution,
}


def family_witness(family: str, n: int) -> FamilyWitness:
    """Build a family's system and closed-form solution and check both exactly.

    Raises :class:`VerificationError` on any mismatch.
    """
    if family not in _SOLUTIONS:
        raise ValueError(f"unknown family {family!r}")
    _check_preconditions(family, n)
    system = family_system(family, n)
    solution, claimed = _SOLUTIONS[family](n)
    witness = FamilyWitness(family, n, system, solution, claimed)
    if len(solution) != system.n:
        raise VerificationError(f"{family}({n}): solution length {len(solution)} != {system.n}")
    if not satisfies(solution, system):
        raise VerificationError(f"{family}({n}): closed form does not satisfy the system")
    if max_coord(solution) != claimed:
        raise VerificationError(f"{family}({n}): maximum differs from the closed form")
    return witness


def unique_in_box(witness: FamilyWitness, node_limit: int | None = None) -> bool:
    """Search ``[0, claimed_max]^n``; true iff the witness is the only solution."""
    found = solve_in_box(
        witness.system, SolveBudget(witness.claimed_max, cap=2, node_limit=node_limit)
    )
    return found == [witness.solution]


def uncond_all_solutions(n: int) -> list[Assignment]:
    """Every N-solution of the unconditional family.

    ``x_{n+4}`` must divide ``(x_{n+4} + 2)^(2^n)``, hence divide ``2^(2^n)``,
    so it is a power of two; each power determines the rest.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > UNCOND_LIMIT:
        raise BudgetExhausted(f"uncond beyond n={UNCOND_LIMIT} is too large")
    system = uncond_system(n)
    e = 1 << n
    out = []
    for j in range(e + 1):
        d = 1 << j
        x1 = d + 2
        head = _powers(x1, n + 1)
        q, r = divmod(head[-1], d)
        if r:
            continue
        sol = tuple(head + [1, d + 1, d, q])
        if not satisfies(sol, system):
            raise VerificationError(f"uncond({n}): reconstructed tuple fails for divisor {d}")
        out.append(sol)
    return sorted(out)
