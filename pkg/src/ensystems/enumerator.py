"""The duplicate relation and the box approximations beta(n, m) of f_kappa(n).

A tuple ``y`` duplicates ``x`` when every atom of E_n satisfied by ``x`` is
satisfied by ``y``.  Types are encoded as bitmasks over ``canonical_atoms(n)``
so that the duplicate test is ``mask_x & ~mask_y == 0``.

Three box values are computed, all for the box ``[0, m]^n``:

* ``beta2``: the largest coordinate among *lonely* tuples (no duplicate other
  than themselves).  This is beta for kappa = 2.
* ``beta_kappa``: the witness-set method for any finite kappa >= 2.  A
  non-empty set ``A`` of at most ``kappa - 1`` box tuples is the box solution
  set of some system iff the tuples whose type contains the meet of the types
  in ``A`` are exactly ``A``.
* ``beta_omega1``: keep ``x`` unless some duplicate has a strictly smaller
  maximum coordinate; report the largest maximum among kept tuples.

``system_enumeration_beta`` is the literal enumeration over all ``2^|E_n|``
systems, kept as an independent oracle for ``n <= 2``.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterator, Sequence

from .core import Assignment, canonical_atoms, max_coord

OMEGA1 = "omega1"
DEFAULT_SUBSET_LIMIT = 5_000_000


class CombinatorialLimit(RuntimeError):
    """Refusal to enumerate more candidate witness sets than configured."""


class CacheCorrupt(RuntimeError):
    pass


def mode_name(kappa: int | None) -> str:
    """``"kappa=K"`` for finite kappa, ``"omega1"`` for ``None``."""
    if kappa is None:
        return OMEGA1
    if kappa < 2:
        raise ValueError("kappa must be at least 2")
    return f"kappa={kappa}"


def parse_mode(name: str) -> int | None:
    if name == OMEGA1:
        return None
    if name.startswith("kappa="):
        kappa = int(name[len("kappa="):])
        mode_name(kappa)
        return kappa
    raise ValueError(f"unknown mode {name!r}")


# -- duplicates ---------------------------------------------------------------

def is_duplicate(y: Sequence[int], x: Sequence[int], n: int | None = None) -> bool:
    """Whether ``y`` satisfies every atom of E_n that ``x`` satisfies.

    Direct check over all ``i <= j`` and ``k``, independent of the bitmask path.
    """
    if n is None:
        n = len(x)
    if len(x) != n or len(y) != n:
        raise ValueError("both tuples must have length n")
    for i in range(n):
        if x[i] == 1 and y[i] != 1:
            return False
        for j in range(i, n):
            xs, xp = x[i] + x[j], x[i] * x[j]
            ys, yp = y[i] + y[j], y[i] * y[j]
            for k in range(n):
                if xs == x[k] and ys != y[k]:
                    return False
                if xp == x[k] and yp != y[k]:
                    return False
    return True


def box(n: int, m: int) -> list[Assignment]:
    return list(itertools.product(range(m + 1), repeat=n))


def type_mask(a: Sequence[int], n: int) -> int:
    mask = 0
    for bit, atom in enumerate(canonical_atoms(n)):
        if atom.holds(a):
            mask |= 1 << bit
    return mask


def _type_masks(n: int, tuples: Sequence[Assignment]) -> list[int]:
    atoms = canonical_atoms(n)
    masks = []
    for a in tuples:
        mask = 0
        for bit, atom in enumerate(atoms):
            if atom.holds(a):
                mask |= 1 << bit
        masks.append(mask)
    return masks


# -- parallel reductions --------------------------------------------------------
#
# Each worker gets a contiguous slice of tuple positions plus the full mask
# table and returns a partial max.  max() is order-independent, so results do
# not depend on the worker count.

def _lonely_max(args: tuple[range, list[int], list[int]]) -> int:
    span, masks, heights = args
    best = 0
    for s in span:
        ms = masks[s]
        for t, mt in enumerate(masks):
            if t != s and ms & ~mt == 0:
                break
        else:
            best = max(best, heights[s])
    return best


def _omega1_max(args: tuple[range, list[int], list[int]]) -> int:
    span, masks, heights = args
    best = 0
    for s in span:
        ms, hs = masks[s], heights[s]
        for mt, ht in zip(masks, heights):
            if ht < hs and ms & ~mt == 0:
                break
        else:
            best = max(best, hs)
    return best


def _witness_max(args: tuple[list[tuple[int, ...]], list[int], list[int]]) -> int:
    candidates, masks, heights = args
    full = len(masks)
    best = 0
    for subset in candidates:
        meet = -1
        for s in subset:
            meet &= masks[s]
        members = set(subset)
        closed = True
        for t in range(full):
            if t not in members and masks[t] & meet == meet:
                closed = False
                break
        if closed:
            best = max(best, min(heights[s] for s in subset))
    return best


def _split(total: int, workers: int) -> list[range]:
    chunks = max(1, min(total, workers * 4))
    step = math.ceil(total / chunks)
    return [range(a, min(a + step, total)) for a in range(0, total, step)]


def _reduce_max(func, jobs: list, workers: int) -> int:
    if workers <= 1 or len(jobs) <= 1:
        return max((func(job) for job in jobs), default=0)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return max(pool.map(func, jobs), default=0)


def beta2(n: int, m: int, workers: int = 1) -> int:
    """Largest coordinate of a lonely tuple of ``[0, m]^n``."""
    tuples = box(n, m)
    masks = _type_masks(n, tuples)
    heights = [max_coord(a) for a in tuples]
    jobs = [(span, masks, heights) for span in _split(len(tuples), workers)]
    return _reduce_max(_lonely_max, jobs, workers)


def lonely_tuples(n: int, m: int) -> list[Assignment]:
    tuples = box(n, m)
    masks = _type_masks(n, tuples)
    return [
        a
        for s, a in enumerate(tuples)
        if not any(t != s and masks[s] & ~mt == 0 for t, mt in enumerate(masks))
    ]


def beta_omega1(n: int, m: int, workers: int = 1) -> int:
    tuples = box(n, m)
    masks = _type_masks(n, tuples)
    heights = [max_coord(a) for a in tuples]
    jobs = [(span, masks, heights) for span in _split(len(tuples), workers)]
    return _reduce_max(_omega1_max, jobs, workers)


def witness_set_count(n: int, m: int, kappa: int) -> int:
    size = (m + 1) ** n
    return sum(math.comb(size, r) for r in range(1, kappa))


def beta_kappa(
    n: int,
    m: int,
    kappa: int,
    workers: int = 1,
    subset_limit: int = DEFAULT_SUBSET_LIMIT,
) -> int:
    """Smallest ``b`` such that every system with between 1 and ``kappa - 1``
    solutions in ``[0, m]^n`` has one of them in ``[0, b]^n``."""
    if kappa < 2:
        raise ValueError("kappa must be at least 2")
    count = witness_set_count(n, m, kappa)
    if count > subset_limit:
        raise CombinatorialLimit(
            f"{count} candidate witness sets for n={n}, m={m}, kappa={kappa} "
            f"exceeds the limit {subset_limit}"
        )
    tuples = box(n, m)
    masks = _type_masks(n, tuples)
    heights = [max_coord(a) for a in tuples]
    candidates = [
        subset
        for r in range(1, kappa)
        for subset in itertools.combinations(range(len(tuples)), r)
    ]
    jobs = [
        ([candidates[i] for i in span], masks, heights)
        for span in _split(len(candidates), workers)
    ]
    return _reduce_max(_witness_max, jobs, workers)


def beta(n: int, m: int, kappa: int | None = 2, workers: int = 1) -> int:
    """Dispatch on mode: ``kappa=None`` means omega1."""
    if kappa is None:
        return beta_omega1(n, m, workers)
    if kappa == 2:
        return beta2(n, m, workers)
    return beta_kappa(n, m, kappa, workers)


def system_enumeration_beta(n: int, m: int, kappa: int | None = 2) -> int:
    """Literal list-all-systems computation of beta; exponential in ``|E_n|``.

    Solution sets are built from per-atom satisfaction bitsets over the box,
    evaluated atom by atom; no types or duplicates are involved.
    """
    atoms = canonical_atoms(n)
    if len(atoms) > 20:
        raise CombinatorialLimit(f"2^{len(atoms)} systems is too many")
    tuples = box(n, m)
    heights = [max_coord(a) for a in tuples]
    everything = (1 << len(tuples)) - 1
    atom_sols = []
    for atom in atoms:
        bits = 0
        for pos, a in enumerate(tuples):
            if atom.holds(a):
                bits |= 1 << pos
        atom_sols.append(bits)

    # sols[S] for every subset S of atoms, built from S minus its lowest atom
    sols = [everything] * (1 << len(atoms))
    best = 0
    for system in range(1, 1 << len(atoms)):
        low = (system & -system).bit_length() - 1
        sols[system] = sols[system & (system - 1)] & atom_sols[low]
    for bits in sols:
        count = bin(bits).count("1")
        if count == 0 or (kappa is not None and count >= kappa):
            continue
        nearest = min(heights[pos] for pos in range(len(tuples)) if bits >> pos & 1)
        best = max(best, nearest)
    return best


# -- limit stream ------------------------------------------------------------------

@dataclass(frozen=True)
class BetaRecord:
    n: int
    m: int
    mode: str
    value: int
    stable_for: int = 1

    def cache_line(self) -> str:
        data = asdict(self)
        del data["stable_for"]
        return json.dumps(data, sort_keys=True)


def _load_cache(path: Path, n: int, mode: str) -> list[int]:
    """Values for ``m = 0, 1, ...`` stored for ``(n, mode)``.

    Lines for other keys are ignored; gaps, duplicates, bad JSON or value
    conflicts raise :class:`CacheCorrupt`.
    """
    if not path.exists():
        return []
    found: dict[int, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                rec = json.loads(raw)
                key = (int(rec["n"]), str(rec["mode"]))
                m, value = int(rec["m"]), int(rec["value"])
            except (ValueError, KeyError, TypeError) as exc:
                raise CacheCorrupt(f"{path}:{lineno}: unreadable record") from exc
            if key != (n, mode):
                continue
            if m in found or value < 0 or value > m:
                raise CacheCorrupt(f"{path}:{lineno}: inconsistent record for m={m}")
            found[m] = value
    if sorted(found) != list(range(len(found))):
        raise CacheCorrupt(f"{path}: records for n={n} {mode} are not contiguous from m=0")
    return [found[m] for m in range(len(found))]


def _drop_key(path: Path, n: int, mode: str) -> None:
    if not path.exists():
        return
    kept = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            try:
                rec = json.loads(raw)
                if (int(rec["n"]), str(rec["mode"])) == (n, mode):
                    continue
            except (ValueError, KeyError, TypeError):
                continue
            kept.append(raw if raw.endswith("\n") else raw + "\n")
    path.write_text("".join(kept), encoding="utf-8")


def f_stream(
    n: int,
    kappa: int | None = 2,
    *,
    max_m: int | None = None,
    cache: str | os.PathLike | None = None,
    restart: bool = False,
    workers: int = 1,
) -> Iterator[BetaRecord]:
    """Yield beta(n, m) for ``m = 0, 1, 2, ...`` (forever when ``max_m`` is None).

    ``stable_for`` is the length of the current constant run of values.  It is
    a report only; no convergence is ever claimed.  With ``cache`` the stream
    replays stored values without recomputing and appends new ones as soon as
    they are known.
    """
    mode = mode_name(kappa)
    path = Path(cache) if cache is not None else None
    stored: list[int] = []
    if path is not None:
        try:
            stored = _load_cache(path, n, mode)
        except CacheCorrupt:
            if not restart:
                raise
            _drop_key(path, n, mode)
        else:
            if restart:
                _drop_key(path, n, mode)
                stored = []

    prev, run = None, 0
    m = 0
    while max_m is None or m <= max_m:
        if m < len(stored):
            value = stored[m]
        else:
            value = beta(n, m, kappa, workers)
        run = run + 1 if value == prev else 1
        prev = value
        record = BetaRecord(n, m, mode, value, run)
        if path is not None and m >= len(stored):
            with open(path, "a", encoding="utf-8") as fh:
                fh.write(record.cache_line() + "\n")
                fh.flush()
        yield record
        m += 1
