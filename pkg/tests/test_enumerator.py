import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import tuples_of
from ensystems.core import type_of
from ensystems.enumerator import (
    CacheCorrupt,
    CombinatorialLimit,
    beta,
    beta2,
    beta_kappa,
    beta_omega1,
    f_stream,
    is_duplicate,
    lonely_tuples,
    mode_name,
    parse_mode,
    system_enumeration_beta,
)


def test_duplicate_examples():
    assert is_duplicate((3, 1), (3, 1))
    assert not is_duplicate((1,), (0,), 1)
    assert is_duplicate((5,), (2,), 1)


@settings(max_examples=200)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(tuples_of(n), tuples_of(n), tuples_of(n))))
def test_duplicate_is_preorder(xyz):
    x, y, z = xyz
    assert is_duplicate(x, x)
    if is_duplicate(y, x) and is_duplicate(z, y):
        assert is_duplicate(z, x)


@settings(max_examples=200)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(tuples_of(n), tuples_of(n))))
def test_duplicate_is_type_containment(xy):
    x, y = xy
    assert is_duplicate(y, x) == type_of(x).issubset(type_of(y))


def test_beta2_examples():
    for n in range(1, 4):
        assert beta2(n, 0) == 0
    assert [beta2(1, m) for m in range(1, 8)] == [1] * 7
    assert beta2(2, 2) == 2


def test_e1_lonely_tuples_are_zero_and_one():
    for m in range(1, 6):
        assert lonely_tuples(1, m) == [(0,), (1,)]


def test_one_two_is_lonely():
    assert (1, 2) in lonely_tuples(2, 2)


@pytest.mark.parametrize("n, m", [(n, m) for n in (1, 2, 3) for m in range(0, 4)])
def test_zero_tuple_is_lonely(n, m):
    assert (0,) * n in lonely_tuples(n, m)


@pytest.mark.parametrize("n, m", [(n, m) for n in (1, 2) for m in range(0, 4)])
def test_kappa2_agrees_with_system_enumeration(n, m):
    expected = system_enumeration_beta(n, m, 2)
    assert beta2(n, m) == expected
    assert beta_kappa(n, m, 2) == expected


@pytest.mark.parametrize("n, m", [(1, m) for m in range(5)] + [(2, m) for m in range(3)])
def test_kappa3_agrees_with_system_enumeration(n, m):
    assert beta_kappa(n, m, 3) == system_enumeration_beta(n, m, 3)


@pytest.mark.parametrize("n, m", [(1, m) for m in range(4)] + [(2, m) for m in range(3)])
def test_kappa4_agrees_with_system_enumeration(n, m):
    assert beta_kappa(n, m, 4) == system_enumeration_beta(n, m, 4)


@pytest.mark.parametrize("n, m", [(1, m) for m in range(6)] + [(2, m) for m in range(4)])
def test_omega1_agrees_with_system_enumeration(n, m):
    assert beta_omega1(n, m) == system_enumeration_beta(n, m, None)


def test_kappa_is_monotone_in_kappa():
    for m in range(3):
        vals = [beta_kappa(2, m, k) for k in (2, 3, 4)]
        assert vals == sorted(vals)
        assert vals[-1] <= beta_omega1(2, m)


def test_omega1_at_zero():
    for n in (1, 2, 3):
        assert beta_omega1(n, 0) == 0


def test_size_guard():
    with pytest.raises(CombinatorialLimit):
        beta_kappa(3, 6, 4, subset_limit=1000)


@pytest.mark.parametrize("workers", [1, 2, 8])
def test_worker_count_does_not_change_results(workers):
    assert beta2(2, 3, workers) == beta2(2, 3, 1)
    assert beta_kappa(2, 2, 3, workers) == beta_kappa(2, 2, 3, 1)
    assert beta_omega1(2, 3, workers) == beta_omega1(2, 3, 1)


def test_mode_names():
    assert mode_name(2) == "kappa=2"
    assert mode_name(None) == "omega1"
    assert parse_mode("kappa=5") == 5
    assert parse_mode("omega1") is None
    with pytest.raises(ValueError):
        mode_name(1)


def test_stream_n1():
    values = [r.value for r in f_stream(1, 2, max_m=6)]
    assert values == [0, 1, 1, 1, 1, 1, 1]


def test_stream_n2_reaches_two():
    recs = list(f_stream(2, 2, max_m=5))
    assert [r.value for r in recs] == [0, 1, 2, 2, 2, 2]
    assert [r.stable_for for r in recs] == [1, 1, 1, 2, 3, 4]
    assert all(r.value <= r.m for r in recs)


def test_stream_omega1_starts_at_zero():
    assert next(iter(f_stream(3, None, max_m=0))).value == 0


def test_stream_values_at_most_m():
    for kappa in (2, 3):
        for r in f_stream(2, kappa, max_m=3):
            assert r.value <= r.m


def test_stream_is_unbounded_without_max_m():
    stream = f_stream(1, 2)
    got = [next(stream).value for _ in range(10)]
    assert got == [0] + [1] * 9


def test_cache_resume_matches_uninterrupted(tmp_path, monkeypatch):
    cache = tmp_path / "beta.jsonl"
    full = list(f_stream(2, 2, max_m=4))
    first = list(f_stream(2, 2, max_m=2, cache=cache))
    assert first == full[:3]

    import ensystems.enumerator as enum_mod

    calls = []
    real = enum_mod.beta

    def counting(*args, **kwargs):
        calls.append(args[1])
        return real(*args, **kwargs)

    monkeypatch.setattr(enum_mod, "beta", counting)
    resumed = list(f_stream(2, 2, max_m=4, cache=cache))
    assert resumed == full
    assert calls == [3, 4]  # nothing recomputed

    lines = [json.loads(x) for x in cache.read_text().splitlines()]
    assert [rec["m"] for rec in lines] == [0, 1, 2, 3, 4]
    assert set(lines[0]) == {"n", "mode", "m", "value"}


def test_cache_keys_are_independent(tmp_path):
    cache = tmp_path / "beta.jsonl"
    list(f_stream(1, 2, max_m=3, cache=cache))
    list(f_stream(1, None, max_m=2, cache=cache))
    assert [r.value for r in f_stream(1, 2, max_m=3, cache=cache)] == [0, 1, 1, 1]


@pytest.mark.parametrize(
    "junk",
    [
        "not json\n",
        '{"n": 1, "mode": "kappa=2", "m": 5, "value": 1}\n',
        '{"n": 1, "mode": "kappa=2", "m": 1, "value": 1}\n',
        '{"n": 1, "mode": "kappa=2", "m": 2, "value": 9}\n',
    ],
)
def test_corrupt_cache_refuses_without_restart(tmp_path, junk):
    cache = tmp_path / "beta.jsonl"
    list(f_stream(1, 2, max_m=1, cache=cache))
    with open(cache, "a") as fh:
        fh.write(junk)
    with pytest.raises(CacheCorrupt):
        list(f_stream(1, 2, max_m=3, cache=cache))
    values = [r.value for r in f_stream(1, 2, max_m=3, cache=cache, restart=True)]
    assert values == [0, 1, 1, 1]
    assert [r.value for r in f_stream(1, 2, max_m=3, cache=cache)] == [0, 1, 1, 1]


def test_beta_dispatch():
    assert beta(2, 3, 2) == beta2(2, 3)
    assert beta(2, 2, 3) == beta_kappa(2, 2, 3)
    assert beta(2, 3, None) == beta_omega1(2, 3)
