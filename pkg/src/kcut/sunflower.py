"""Sunflower extraction from families of small sets.

Sets are handled internally as Python int bitmasks over the universe.
The classical argument gives a constructive finder: take a maximal
pairwise-disjoint subfamily; if it has r sets we are done (empty core),
otherwise some element of its union lies in many sets and we recurse on
the link of that element, moving it into the core.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations
from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_PARAM = 20


def erdos_rado_threshold(d: int, r: int) -> int:
    """d!(r-1)^d: more sets than this (each of size <= d) force an r-sunflower."""
    if d < 1 or r < 1:
        raise ValueError("d and r must be positive")
    if d > MAX_PARAM or r > MAX_PARAM:
        raise OverflowError(f"d and r are limited to {MAX_PARAM}")
    return math.factorial(d) * (r - 1) ** d


def _mask(s: Iterable[int]) -> int:
    m = 0
    for x in s:
        m |= 1 << x
    return m


def _elements(m: int) -> list[int]:
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return out


class SetFamily:
    """Distinct nonempty subsets of {0..N-1}."""

    def __init__(self, universe: int, sets: Iterable[Iterable[int]]):
        masks = []
        for i, s in enumerate(sets):
            fs = [int(x) for x in s]
            if any(not 0 <= x < universe for x in fs):
                raise ValueError(f"set {i} leaves the universe 0..{universe - 1}")
            masks.append(_mask(fs))
        self._init(universe, masks)

    @classmethod
    def from_masks(cls, universe: int, masks: Iterable[int]) -> "SetFamily":
        self = cls.__new__(cls)
        self._init(universe, [int(m) for m in masks])
        return self

    def _init(self, universe: int, masks: list[int]) -> None:
        if universe < 1:
            raise ValueError("universe size must be positive")
        top = 1 << universe
        seen = set()
        for i, m in enumerate(masks):
            if m == 0:
                raise ValueError(f"set {i} is empty")
            if m >= top or m < 0:
                raise ValueError(f"set {i} leaves the universe 0..{universe - 1}")
            if m in seen:
                raise ValueError(f"set {i} is a duplicate")
            seen.add(m)
        self.universe = universe
        self.masks = masks
        self.d = max((m.bit_count() for m in masks), default=0)
        self._sets: list[frozenset[int]] | None = None

    @property
    def sets(self) -> list[frozenset[int]]:
        if self._sets is None:
            self._sets = [frozenset(_elements(m)) for m in self.masks]
        return self._sets

    def __len__(self) -> int:
        return len(self.masks)

    def subfamily(self, indices: Sequence[int]) -> "SetFamily":
        return SetFamily.from_masks(self.universe, [self.masks[i] for i in indices])

    def __repr__(self) -> str:
        return f"SetFamily(N={self.universe}, size={len(self)}, d={self.d})"


@dataclass(frozen=True)
class Sunflower:
    members: tuple[int, ...]  # indices into the family
    core: frozenset[int]

    def validate(self, family: SetFamily) -> None:
        sets = [family.masks[i] for i in self.members]
        core = _mask(self.core)
        assert len(set(self.members)) == len(self.members), "repeated member"
        for a in range(len(sets)):
            for b in range(a + 1, len(sets)):
                assert sets[a] & sets[b] == core, \
                    f"members {self.members[a]} and {self.members[b]} meet outside the core"

    def petals(self, family: SetFamily) -> list[frozenset[int]]:
        return [family.sets[i] - self.core for i in self.members]


def _find(items: list[tuple[int, int]], r: int, core: int) -> tuple[list[int], int] | None:
    """items: (index, mask with the current core removed)."""
    chosen, used = [], 0
    for idx, m in items:
        if m & used == 0:
            chosen.append(idx)
            used |= m
            if len(chosen) == r:
                return chosen, core
    if used == 0:
        return None
    counts: dict[int, int] = {}
    for _, m in items:
        hit = m & used
        for x in _elements(hit):
            counts[x] = counts.get(x, 0) + 1
    x = max(sorted(counts), key=lambda e: counts[e])
    if counts[x] < r:
        return None
    bit = 1 << x
    link = [(idx, m & ~bit) for idx, m in items if m & bit]
    return _find(link, r, core | bit)


def _make(family: SetFamily, found) -> Sunflower | None:
    if found is None:
        return None
    members, core = found
    sf = Sunflower(tuple(members), frozenset(_elements(core)))
    sf.validate(family)
    return sf


def find_sunflower(family: SetFamily, r: int) -> Sunflower | None:
    """An r-sunflower, guaranteed when the family exceeds erdos_rado_threshold(d, r)."""
    if r < 2:
        raise ValueError("r must be at least 2")
    items = list(enumerate(family.masks))
    return _make(family, _find(items, r, 0))


def _nonempty_core(items: list[tuple[int, int]], r: int) -> tuple[list[int], int] | None:
    degree: dict[int, int] = {}
    for _, m in items:
        for x in _elements(m):
            degree[x] = degree.get(x, 0) + 1
    for v in sorted(degree, key=lambda e: (-degree[e], e)):
        if degree[v] < r:
            break
        bit = 1 << v
        link = [(idx, m & ~bit) for idx, m in items if m & bit]
        found = _find(link, r, bit)
        if found is not None:
            return found
    return None


def find_sunflower_nonempty_core(family: SetFamily, r: int) -> Sunflower | None:
    """An r-sunflower whose core is nonempty.

    Each element's star {F : v in F} is searched with the classical finder,
    so success is guaranteed once the family exceeds threshold·N.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    return _make(family, _nonempty_core(list(enumerate(family.masks)), r))


@dataclass
class ManySunflowers:
    sunflowers: list[Sunflower]
    requested: int

    @property
    def shortfall(self) -> bool:
        return len(self.sunflowers) < self.requested

    @property
    def cores(self) -> list[frozenset[int]]:
        return [s.core for s in self.sunflowers]


def _maximal_core(items: list[tuple[int, int]], r: int) -> tuple[list[int], int] | None:
    """A sunflower whose core cannot be grown by one found in its link."""
    found = _nonempty_core(items, r)
    if found is None:
        return None
    members, core = found
    while True:
        link = [(idx, m & ~core) for idx, m in items if m & core == core and m != core]
        grown = _nonempty_core(link, r)
        if grown is None:
            return members, core
        members, extra = grown
        core |= extra


def find_many_sunflowers(family: SetFamily, r: int, s: int) -> ManySunflowers:
    """Up to ``s`` r-sunflowers with pairwise distinct nonempty cores.

    After each core C is fixed, every set containing C is removed, so later
    cores cannot equal C.  Because C cannot be grown, the removed sets
    number at most about threshold(d-1, r)·N, which keeps enough sets
    for the next round whenever |F| > threshold(d, r)·s·N.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    if s < 0:
        raise ValueError("s must be nonnegative")
    items = list(enumerate(family.masks))
    out: list[Sunflower] = []
    while len(out) < s:
        found = _maximal_core(items, r)
        if found is None:
            break
        sf = _make(family, found)
        core = _mask(sf.core)
        assert sf.core and sf.core not in [x.core for x in out]
        items = [(idx, m) for idx, m in items if m & core != core]
        assert all(m & core != core for _, m in items)
        out.append(sf)
    return ManySunflowers(out, s)


@lru_cache(maxsize=32)
def all_subsets_upto(universe: int, d: int) -> tuple[int, ...]:
    """Bitmasks of every nonempty subset of size <= d, in increasing size."""
    out = []
    for size in range(1, d + 1):
        for c in combinations(range(universe), size):
            out.append(_mask(c))
    return tuple(out)


def random_family(universe: int, d: int, size: int, gen) -> SetFamily:
    """``size`` distinct sets drawn uniformly from the nonempty subsets of size <= d."""
    pool = all_subsets_upto(universe, d)
    if size > len(pool):
        raise ValueError(f"only {len(pool)} distinct sets of size <= {d} over {universe} elements")
    pick = gen.choice(len(pool), size=size, replace=False)
    return SetFamily.from_masks(universe, [pool[i] for i in sorted(pick)])


def min_universe(d: int, per_element: int, extra: int = 0) -> int:
    """Smallest N admitting per_element·N + extra + 1 distinct sets of size <= d."""
    n = 1
    while sum(math.comb(n, i) for i in range(1, d + 1)) < per_element * n + extra + 1:
        n += 1
        if n > 10_000:
            raise ValueError("no universe size fits")
    return n
