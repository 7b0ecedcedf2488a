import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import systems
from ensystems.compiler import (
    PolySyntaxError,
    build_sn,
    compile_to_system,
    dioph,
    extend_witness,
    parse_poly,
    run_plan,
    sn_layout,
)
from ensystems.core import Atom, System, satisfies
from ensystems.poly import Polynomial
from ensystems.solver import brute_force_solutions, poly_roots_in_box, solve_in_box


def P(terms, p):
    return Polynomial(p, terms)


# -- parsing ---------------------------------------------------------------------

def test_parse_examples():
    assert parse_poly("x1^2 - x2") == P({(2, 0): 1, (0, 1): -1}, 2)
    assert parse_poly("(x1 + 1)^2 - x1^2 - 2*x1 - 1").is_zero()
    assert parse_poly("3*x1*x2 - 5") == P({(1, 1): 3, (0, 0): -5}, 2)


def test_parse_unary_and_nesting():
    assert parse_poly("-(x1 - 2)*(x1 + 2)") == P({(2,): -1, (0,): 4}, 1)
    assert parse_poly("x1**3") == P({(3,): 1}, 1)
    assert parse_poly("2^10") == 1024


@pytest.mark.parametrize("text, pos", [("x1 + ", 5), ("x1 ^ x2", 5), ("x1 $ 2", 3), ("(x1", 3)])
def test_parse_errors(text, pos):
    with pytest.raises(PolySyntaxError) as err:
        parse_poly(text)
    assert err.value.pos == pos


def test_canonical_print_is_graded_lex():
    assert str(parse_poly("x2 - 5 + x1^2 + 3*x1*x2")) == "x1^2 + 3*x1*x2 + x2 - 5"
    assert parse_poly(str(parse_poly("x3*x1 - 2*x2^3 + 7"))) == parse_poly("x3*x1 - 2*x2^3 + 7")


@settings(max_examples=100)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-5, 5)), max_size=5),
       st.tuples(st.integers(0, 4), st.integers(0, 4)))
def test_print_parse_round_trip_and_evaluation(terms, point):
    poly = Polynomial(2, {(a, b): c for a, b, c in terms})
    assert parse_poly(str(poly)).widen(2) == poly
    direct = sum(c * point[0] ** a * point[1] ** b for (a, b), c in poly.terms.items())
    assert poly.evaluate(point) == direct


# -- compile ----------------------------------------------------------------------

def projected(r, bound):
    return sorted({a[: r.p] for a in solve_in_box(r.system, bound)})


def test_compile_square():
    r = compile_to_system(parse_poly("x1^2 - x2"))
    assert r.n > r.p == 2
    assert projected(r, 25) == [(0, 0), (1, 1), (2, 4), (3, 9), (4, 16), (5, 25)]


def test_compile_unit_forcing():
    r = compile_to_system(parse_poly("x1 - 1"))
    assert projected(r, 5) == [(1,)]


def test_compile_linear():
    r = compile_to_system(parse_poly("x1 + x2 - 3"))
    base = [a for a in projected(r, 3) if max(a) <= 3]
    assert base == [(0, 3), (1, 2), (2, 1), (3, 0)]


def test_compile_rejects_zero():
    with pytest.raises(ValueError):
        compile_to_system(parse_poly("x1 - x1"))


def test_extend_witness():
    r = compile_to_system(parse_poly("x1^2 - x2"))
    full = extend_witness(r, (2, 4))
    assert satisfies(full, r.system)
    full = extend_witness(r, (1, 1))
    assert full[r.p] == 1 and full[r.p + 1] == 0  # unit, then zero
    with pytest.raises(ValueError):
        extend_witness(r, (2, 5))


def random_polynomial(rng, p, degree=3, coeff=5):
    monos = [e for e in itertools.product(range(degree + 1), repeat=p) if sum(e) <= degree]
    while True:
        terms = {e: rng.randint(-coeff, coeff) for e in rng.sample(monos, rng.randint(1, 4))}
        poly = Polynomial(p, terms)
        if not poly.is_zero():
            return poly


def check_compilation(d, base_bound):
    """Roots are preserved and extend uniquely over [0, base_bound]^p, each base tuple pinned."""
    r = compile_to_system(d)
    ceiling = max(run_plan(r, (base_bound,) * r.p) + (base_bound,))
    direct = poly_roots_in_box(d, base_bound)
    lifted = []
    for base in itertools.product(range(base_bound + 1), repeat=r.p):
        pins = {i + 1: v for i, v in enumerate(base)}
        found = solve_in_box(r.system, ceiling, fixed=pins)
        assert len(found) <= 1, f"extension of {base} not unique for {d}"
        if found:
            assert found[0] == extend_witness(r, base)
            lifted.append(base)
    return direct, lifted


@pytest.mark.parametrize("seed", range(24))
def test_compile_random_round_trip(seed):
    rng = random.Random(seed)
    d = random_polynomial(rng, rng.randint(1, 3))
    direct, lifted = check_compilation(d, 5 if d.vars < 3 else 4)
    assert direct == lifted


def test_compile_negative_only_and_constant_terms():
    for text in ["-x1 - 2*x2", "x1*x2*x3 - 6", "5 - x1^3", "13*x1 - 26"]:
        direct, lifted = check_compilation(parse_poly(text), 3)
        assert direct == lifted


def test_compile_constants_by_doubling():
    r = compile_to_system(parse_poly("x1 - 13"))
    assert extend_witness(r, (13,))
    assert r.roles[r.p + 1] == "1"
    consts = sorted(int(v) for v in r.roles.values() if v.isdigit())
    assert consts == [0, 1, 2, 3, 6, 12, 13]


# -- dioph -------------------------------------------------------------------------

def test_dioph_examples():
    assert dioph(System(2, (Atom.add(1, 1, 2),))) == parse_poly("(x1 + x1 - x2)^2")
    assert dioph(System(1, (Atom.unit(1), Atom.mul(1, 1, 1)))) == parse_poly(
        "(x1 - 1)^2 + (x1*x1 - x1)^2"
    )


def test_dioph_intro2():
    s = System(3, (Atom.add(1, 1, 2), Atom.mul(1, 1, 2), Atom.mul(2, 2, 3)))
    assert poly_roots_in_box(dioph(s), 16) == [(0, 0, 0), (2, 4, 16)]


def test_dioph_rejects_empty():
    with pytest.raises(ValueError):
        dioph(System(2, ()))


@settings(max_examples=40, deadline=None)
@given(systems(max_n=3, max_atoms=5).filter(lambda s: len(s) > 0))
def test_dioph_round_trip(s):
    assert poly_roots_in_box(dioph(s), 4) == brute_force_solutions(s, 4)


# -- S_n ------------------------------------------------------------------------------

SQUARE = System(3, (Atom.mul(1, 1, 2), Atom.unit(3)))


@pytest.mark.parametrize("n, x1, u", [(12, 12, 145), (13, 13, 170), (14, 14, 197), (17, 17, 290)])
def test_build_sn_square(n, x1, u):
    s = build_sn(SQUARE, n)
    lay = sn_layout(3, n)
    assert s.n == n
    found = solve_in_box(s, u, fixed=None)
    assert len(found) == 1
    sol = found[0]
    assert sol[0] == x1 and sol[1] == x1 * x1 and sol[lay.u - 1] == u
    assert sol[lay.y - 1] == n % 2


def test_build_sn_padding_count():
    for n in range(12, 22):
        lay = sn_layout(3, n)
        assert len(lay.pad) == n - n // 2 - 3 - 3
        assert len(lay.t) == n // 2


def test_build_sn_preconditions():
    with pytest.raises(ValueError):
        build_sn(SQUARE, 11)
    with pytest.raises(ValueError):
        build_sn(System(2, (Atom.mul(1, 1, 2),)), 20)
