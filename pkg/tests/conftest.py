import itertools

from hypothesis import strategies as st

from ensystems.core import Atom, System, canonical_atoms


@st.composite
def systems(draw, max_n=3, max_atoms=6):
    n = draw(st.integers(1, max_n))
    pool = canonical_atoms(n)
    atoms = draw(st.lists(st.sampled_from(pool), min_size=0, max_size=max_atoms))
    return System(n, tuple(atoms))


def tuples_of(n, max_value=4):
    return st.tuples(*[st.integers(0, max_value)] * n)


def naive_type(a):
    """Satisfied atoms of E_n, enumerated straight from the definition."""
    n = len(a)
    out = set()
    for k in range(n):
        if a[k] == 1:
            out.add(Atom.unit(k + 1))
    for i, j, k in itertools.product(range(n), repeat=3):
        if a[i] + a[j] == a[k]:
            out.add(Atom.add(i + 1, j + 1, k + 1))
        if a[i] * a[j] == a[k]:
            out.add(Atom.mul(i + 1, j + 1, k + 1))
    return out
