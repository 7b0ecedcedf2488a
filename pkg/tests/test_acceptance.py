"""Acceptance checks, one test per criterion.

Each check prints a single ``PASS``/``FAIL`` line with its runtime and budget
(visible with ``pytest tests/test_acceptance.py -s``, and in the captured
output of a failing test otherwise).
"""

from __future__ import annotations

import io
import random
import time
from contextlib import contextmanager

import pytest

from ensystems.cli import main
from ensystems.compiler import build_sn, dioph, sn_layout
from ensystems.core import Atom, System, canonical_atoms, satisfies
from ensystems.enumerator import beta2, beta_kappa, system_enumeration_beta
from ensystems.solver import brute_force_solutions, poly_roots_in_box, solve_in_box
from ensystems.verifier import (
    PellSolution,
    binomial_identity_check,
    family_witness,
    is_prime_trial,
    lucas_lehmer,
    pell_minimal,
    pell_next,
    thm4_system,
    uncond_all_solutions,
)

from test_compiler import check_compilation, random_polynomial


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number: int, title: str, budget: float):
        start = time.perf_counter()
        status = "FAIL"
        try:
            yield
            elapsed = time.perf_counter() - start
            assert elapsed < budget, f"took {elapsed:.1f}s, budget {budget}s"
            status = "PASS"
        finally:
            elapsed = time.perf_counter() - start
            with capsys.disabled():
                print(f"\n[{status}] criterion {number:2d}: {title} "
                      f"({elapsed:.2f}s / {budget:.0f}s)")

    return run


def cli(*argv: str) -> tuple[int, str]:
    out = io.StringIO()
    return main(list(argv), out=out), out.getvalue()


def limit_values(n: int, max_m: int) -> dict[int, int]:
    code, text = cli("limit", "--n", str(n), "--kappa", "2", "--max-m", str(max_m))
    assert code == 0
    fields = [dict(kv.split("=", 1) for kv in line.split()) for line in text.splitlines()]
    return {int(f["m"]): int(f["value"]) for f in fields}


def test_c01_small_limits(criterion):
    with criterion(1, "f(1)=1 and f(2)=2 via the limit stream", 60):
        one = limit_values(1, 6)
        assert all(one[m] == 1 for m in range(1, 7))
        two = limit_values(2, 5)
        assert all(two[m] == 2 for m in range(2, 6))


def test_c02_oracle_equivalence(criterion):
    with criterion(2, "beta2 / beta_kappa equal system enumeration", 300):
        for n in (1, 2):
            for m in range(4):
                expected = system_enumeration_beta(n, m, 2)
                assert beta2(n, m) == expected, (n, m)
                assert beta_kappa(n, m, 2) == expected, (n, m)
            for m in range(3):
                assert beta_kappa(n, m, 3) == system_enumeration_beta(n, m, 3), (n, m)


def test_c03_double_exponential_family(criterion):
    with criterion(3, "x_i = 2^(n 2^(i-1)) family, n in {2,3,5,7,13}", 120):
        for n in (2, 3, 5, 7, 13):
            w = family_witness("thm2", n)
            assert w.ok and w.claimed_max == (2**n) ** (2**n)
        w = family_witness("thm2", 2)
        assert solve_in_box(w.system, 256) == [w.solution]


def test_c04_fermat_family(criterion):
    with criterion(4, "Fermat-number family, n in {1..4}", 120):
        for n in (1, 2, 3, 4):
            w = family_witness("thm3", n)
            assert w.ok and w.claimed_max == (2 ** (2**n) - 1) ** (2**n) + 1
        assert family_witness("thm3", 1).solution == (3, 9, 1, 4, 5, 10, 2)


def test_c05_pell(criterion):
    with criterion(5, "Pell minimal solutions and successors", 10):
        assert pell_minimal(0) == PellSolution(0, 2, 1)
        sol = pell_minimal(1)
        assert (sol.x, sol.y) == (682, 61)
        assert 682**2 + 1 == 5**3 * 61**2
        w = family_witness("thm4", 1)
        assert w.solution[10] == w.claimed_max == 465125
        system = thm4_system(1)
        seen = {w.solution}
        for _ in range(2):
            sol = pell_next(sol)
            assert sol.holds()
            t = w.solution[:6] + (sol.y, sol.y**2, sol.x, sol.x**2, sol.x**2 + 1)
            assert satisfies(t, system)
            seen.add(t)
        assert len(seen) == 3


def test_c06_unconditional_family(criterion):
    with criterion(6, "unconditional family solution counts", 10):
        for n, count, x1 in ((1, 3, 6), (2, 5, 18)):
            sols = uncond_all_solutions(n)
            assert len(sols) == count
            assert max(s[0] for s in sols) == x1 == 2 + 2 ** (2**n)
            w = family_witness("uncond", n)
            assert max(sols) == w.solution
            assert solve_in_box(w.system, w.claimed_max) == sols


def test_c07_lucas_lehmer(criterion):
    with criterion(7, "Lucas-Lehmer on 2203, 11 and odd p <= 31", 10):
        assert lucas_lehmer(2203)
        assert not lucas_lehmer(11)
        for p in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
            assert lucas_lehmer(p) == is_prime_trial(2**p - 1), p


def test_c08_compiler_round_trip(criterion):
    with criterion(8, "compiled systems preserve roots, unique extensions", 300):
        rng = random.Random(20260101)
        for _ in range(20):
            d = random_polynomial(rng, rng.randint(1, 3), degree=3, coeff=5)
            direct, lifted = check_compilation(d, 5 if d.vars < 3 else 3)
            assert direct == lifted, str(d)


def random_system(rng: random.Random) -> System:
    n = rng.randint(1, 3)
    atoms = canonical_atoms(n)
    return System(n, tuple(rng.sample(atoms, rng.randint(1, min(5, len(atoms))))))


def test_c09_dioph_round_trip(criterion):
    with criterion(9, "Sol(S) equals Sol(dioph(S)) on [0,4]^n", 60):
        rng = random.Random(99)
        for _ in range(20):
            s = random_system(rng)
            assert poly_roots_in_box(dioph(s), 4) == brute_force_solutions(s, 4), s


def test_c10_sn_builder(criterion):
    square = System(3, (Atom.mul(1, 1, 2), Atom.unit(3)))  # x2 = x1^2, x3 = 1
    with criterion(10, "S_n builder gives u = n^2 + 1 at n=12, 13", 60):
        for n, u in ((12, 145), (13, 170)):
            found = solve_in_box(build_sn(square, n), u)
            assert len(found) == 1
            assert found[0][sn_layout(3, n).u - 1] == u == n * n + 1


def test_c11_binomial_identity(criterion):
    with criterion(11, "binomial identity for M in {4,8,128,2^13}", 60):
        for big_m in (4, 8, 128, 2**13):
            for x in (0, 1, 2, big_m - 1):
                assert binomial_identity_check(big_m, x), (big_m, x)


def test_c12_determinism(criterion):
    with criterion(12, "beta2(2,3) identical for 1, 2, 8 workers", 60):
        values = {beta2(2, 3, workers) for workers in (1, 2, 8)}
        assert values == {2}
