"""Exhaustive ground truth for small graphs.

Everything here enumerates: k-partitions as restricted growth strings,
2-cuts as bitmasks.  Threshold comparisons are done in exact integer or
rational arithmetic because λ_k/k is rarely an integer and the interval
boundaries are strict.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .multigraph import (GraphError, KCut, TwoCut, WeightedMultigraph,
                         normalize_edge_set)

EXACT_MAX_N = 14
TWO_CUT_MAX_N = 20
PREDICATE_MAX_N = 12
MAX_TUPLE_ENUM = 64
_CHUNK_ROWS = 1 << 20


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Number of partitions of an n-set into exactly k nonempty blocks."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def _check_guard(n: int, k: int, guard: int) -> None:
    if not 1 <= k <= n:
        raise GraphError(f"need 1 <= k <= n, got n={n}, k={k}")
    if n > guard:
        raise GraphError(
            f"n={n} exceeds the exhaustive guard {guard}; use the randomized solver instead")


def enumerate_k_partitions(n: int, k: int, guard: int = EXACT_MAX_N
                           ) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Yield every partition of ``range(n)`` into k nonempty blocks once.

    Partitions come out in lexicographic order of their restricted growth
    strings, each as canonical blocks (sorted by minimum).
    """
    _check_guard(n, k, guard)
    labels = [0] * n

    def rec(i: int, used: int):
        if i == n:
            if used == k:
                blocks: list[list[int]] = [[] for _ in range(k)]
                for v, lab in enumerate(labels):
                    blocks[lab].append(v)
                yield tuple(tuple(b) for b in blocks)
            return
        for lab in range(min(used + 1, k)):
            nu = used + (lab == used)
            if k - nu > n - i - 1:
                continue
            labels[i] = lab
            yield from rec(i + 1, nu)

    yield from rec(1, 1)


def iter_rgs_chunks(n: int, k: int, chunk_rows: int = _CHUNK_ROWS) -> Iterator[np.ndarray]:
    """All k-block restricted growth strings of length n, as int8 row chunks."""
    if not 1 <= k <= n:
        raise GraphError(f"need 1 <= k <= n, got n={n}, k={k}")

    def expand(arr: np.ndarray, used: np.ndarray, i: int):
        if i == n:
            yield arr
            return
        if len(arr) > chunk_rows // max(1, k) and len(arr) > 1:
            half = len(arr) // 2
            yield from expand(arr[:half], used[:half], i)
            yield from expand(arr[half:], used[half:], i)
            return
        parts, uparts = [], []
        for lab in range(k):
            nu = used + (used == lab)
            ok = (lab <= used) & (k - nu <= n - i - 1)
            if not ok.any():
                continue
            sub = arr[ok]
            col = np.full((len(sub), 1), lab, dtype=np.int8)
            parts.append(np.hstack([sub, col]))
            uparts.append(nu[ok])
        if parts:
            yield from expand(np.vstack(parts), np.concatenate(uparts), i + 1)

    yield from expand(np.zeros((1, 1), dtype=np.int8), np.ones(1, dtype=np.int64), 1)


def labelling_weights(g: WeightedMultigraph, labels: np.ndarray) -> np.ndarray:
    """Crossing weight of each row of a (rows x n) labelling of the original vertices."""
    us, vs, ws = g.edge_arrays()
    out = np.zeros(len(labels), dtype=np.int64)
    for u, v, w in zip(us, vs, ws):
        out += (labels[:, u] != labels[:, v]) * w
    return out


@dataclass
class ExactResult:
    lambda_k: int
    count: int
    cuts: list[KCut]


def exact_lambda_k(g: WeightedMultigraph, k: int, guard: int = EXACT_MAX_N) -> ExactResult:
    """Minimum k-cut weight, the number of minimum k-cuts, and the cuts."""
    if not g.is_original:
        raise GraphError("exact_lambda_k expects the original graph")
    _check_guard(g.n, k, guard)
    best = None
    rows: list[np.ndarray] = []
    for chunk in iter_rgs_chunks(g.n, k):
        w = labelling_weights(g, chunk)
        lo = int(w.min())
        if best is None or lo < best:
            best, rows = lo, []
        if lo == best:
            rows.append(chunk[w == lo])
    mins = np.vstack(rows)
    cuts = sorted((KCut.from_labels(r, best) for r in mins), key=lambda c: c.blocks)
    return ExactResult(best, len(cuts), cuts)


def all_k_cuts(g: WeightedMultigraph, k: int, max_weight: int | None = None,
               guard: int = EXACT_MAX_N) -> list[KCut]:
    """Every k-cut, optionally only those of weight at most ``max_weight``."""
    _check_guard(g.n, k, guard)
    out = []
    for chunk in iter_rgs_chunks(g.n, k):
        w = labelling_weights(g, chunk)
        keep = np.ones(len(w), dtype=bool) if max_weight is None else w <= max_weight
        out.extend(KCut.from_labels(r, int(x)) for r, x in zip(chunk[keep], w[keep]))
    out.sort(key=lambda c: (c.weight, c.blocks))
    return out


# -- 2-cuts -------------------------------------------------------------------

def _position_arrays(g: WeightedMultigraph):
    verts = g.super_vertices()
    pos = {v: i for i, v in enumerate(verts)}
    el = g.edge_list()
    pu = np.array([pos[a] for a, _, _ in el], dtype=np.int64)
    pv = np.array([pos[b] for _, b, _ in el], dtype=np.int64)
    w = np.array([x for _, _, x in el], dtype=np.int64)
    return verts, pos, pu, pv, w


def two_cut_weights(g: WeightedMultigraph, J: dict | None = None):
    """Weights of all 2^(ns-1)-1 two-cuts of the (possibly contracted) graph.

    Returns ``(verts, masks, weights, j_weights)``; bit ``i`` of a mask puts
    ``verts[i]`` on the mask side, and the last super-vertex is never on it.
    """
    verts, pos, pu, pv, w = _position_arrays(g)
    ns = len(verts)
    masks = np.arange(1, 1 << (ns - 1), dtype=np.int64)
    weights = np.zeros(len(masks), dtype=np.int64)
    for a, b, x in zip(pu, pv, w):
        weights += (((masks >> a) ^ (masks >> b)) & 1) * x
    jw = np.zeros(len(masks), dtype=np.int64)
    for (a, b), x in (J or {}).items():
        jw += (((masks >> pos[a]) ^ (masks >> pos[b])) & 1) * x
    return verts, masks, weights, jw


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


@dataclass
class CutStats:
    lambda_k: int
    k: int
    lambda_bar: Fraction
    small_threshold: Fraction
    medium_upper: Fraction
    n_small: int
    n_medium: int
    n_large: int
    n_good: int | None = None
    epsilon: Fraction | None = None
    verts: list[int] = field(default_factory=list, repr=False)
    members: dict = field(default_factory=dict, repr=False)
    n_original: int = 0
    small_masks: np.ndarray = field(default=None, repr=False)
    medium_masks: np.ndarray = field(default=None, repr=False)
    good_masks: np.ndarray = field(default=None, repr=False)
    medium_weights: np.ndarray = field(default=None, repr=False)
    small_weights: np.ndarray = field(default=None, repr=False)

    @property
    def total(self) -> int:
        return self.n_small + self.n_medium + self.n_large

    def side(self, mask: int) -> frozenset[int]:
        """Original vertices on the mask side of a 2-cut."""
        out: set[int] = set()
        for i, sv in enumerate(self.verts):
            if (int(mask) >> i) & 1:
                out |= self.members[sv]
        return frozenset(out)

    def shores(self, kind: str = "medium") -> list[TwoCut]:
        masks = {"small": self.small_masks, "medium": self.medium_masks,
                 "good": self.good_masks}[kind]
        weights = {"small": self.small_weights, "medium": self.medium_weights}.get(kind)
        if weights is None:
            weights = np.zeros(len(masks), dtype=np.int64)
        return [TwoCut.from_side(self.side(m), self.n_original, int(w))
                for m, w in zip(masks, weights)]


def classify_two_cuts(g: WeightedMultigraph, k: int, J=None, epsilon=None,
                      lambda_k: int | None = None, guard: int = TWO_CUT_MAX_N) -> CutStats:
    """Sort every 2-cut into small / medium / large, and count good cuts.

    ``lambda_k`` defaults to the exact value (original graphs only).  On a
    contracted graph pass the original graph's λ_k: the thresholds refer
    to it.  Good cuts are counted when ``epsilon`` is given; ``J`` is an
    edge set on the graph's current super-vertex ids.
    """
    if k < 2:
        raise GraphError("k must be at least 2")
    ns = g.n_super
    if ns > guard:
        raise GraphError(f"{ns} vertices exceeds the 2-cut enumeration guard {guard}")
    if lambda_k is None:
        lambda_k = exact_lambda_k(g, k).lambda_k
    J = normalize_edge_set(g, J)
    lam_bar = Fraction(lambda_k, k)
    small_thr = Fraction(k, k - 1) * lam_bar
    medium_up = 2 * lam_bar
    if ns < 2:
        empty = np.zeros(0, dtype=np.int64)
        return CutStats(lambda_k, k, lam_bar, small_thr, medium_up, 0, 0, 0,
                        0 if epsilon is not None else None, None, g.super_vertices(),
                        dict(g.members), g.n, empty, empty, empty, empty, empty)
    verts, masks, w, jw = two_cut_weights(g, J)
    # w < λ/(k-1)  <=>  w(k-1) < λ ;  w < 2λ/k  <=>  wk < 2λ
    small = w * (k - 1) < lambda_k
    large = w * k >= 2 * lambda_k
    medium = ~small & ~large
    n_good = None
    good_masks = np.zeros(0, dtype=np.int64)
    eps = None
    if epsilon is not None:
        eps = Fraction(epsilon)
        if not 0 <= eps < Fraction(1, k):
            raise GraphError(f"epsilon must lie in [0, 1/k), got {epsilon}")
        need = _ceil_frac((1 - eps) * small_thr)
        good = medium & (w - jw >= need)
        n_good = int(good.sum())
        good_masks = masks[good]
    return CutStats(
        lambda_k, k, lam_bar, small_thr, medium_up,
        int(small.sum()), int(medium.sum()), int(large.sum()), n_good, eps,
        verts, dict(g.members), g.n, masks[small], masks[medium], good_masks,
        w[medium], w[small])


def count_good_cuts(g: WeightedMultigraph, k: int, lambda_k: int, J, epsilon) -> int:
    return classify_two_cuts(g, k, J=J, epsilon=epsilon, lambda_k=lambda_k).n_good


# -- exact survival -----------------------------------------------------------

def exact_survival_probability(g: WeightedMultigraph, cut: KCut, tau: int) -> Fraction:
    """Probability that no edge of ∂K is contracted before τ super-vertices remain.

    Exact dynamic programme over contraction states; small graphs only.
    """
    block_of = {}
    for i, b in enumerate(cut.blocks):
        for v in b:
            block_of[v] = i

    memo: dict[frozenset, Fraction] = {}

    def prob(h: WeightedMultigraph) -> Fraction:
        if h.n_super <= tau:
            return Fraction(1)
        key = frozenset(h.members.values())
        if key in memo:
            return memo[key]
        total = Fraction(0)
        W = h.total_weight
        if W == 0:
            raise GraphError("graph disconnected before reaching tau")
        for a, b, w in h.edge_list():
            if block_of[min(h.members[a])] != block_of[min(h.members[b])]:
                continue
            total += Fraction(w, W) * prob(h.contract_edge((a, b)))
        memo[key] = total
        return total

    return prob(g)


# -- extremal predicates ------------------------------------------------------

@dataclass
class Check:
    name: str
    status: str  # pass | fail | skip
    witness: str = ""

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def line(self) -> str:
        return f"check {self.name} status {self.status} witness {self.witness or '-'}"


def _venn_counts(bits: np.ndarray, tuples: np.ndarray) -> np.ndarray:
    """Number of Venn atoms for each row of ``tuples`` (indices into ``bits``)."""
    sig = np.zeros((len(tuples), bits.shape[1]), dtype=np.int64)
    for i in range(tuples.shape[1]):
        sig |= bits[tuples[:, i]].astype(np.int64) << i
    sig.sort(axis=1)
    return 1 + (np.diff(sig, axis=1) != 0).sum(axis=1)


def medium_venn_check(stats: CutStats, k: int, rng_seed: int = 0,
                      sample_size: int = 20000) -> Check:
    """Any ⌈k/2⌉ medium cuts: the first r-1 or all r have few Venn atoms."""
    r = math.ceil(k / 2)
    med = stats.medium_masks
    name = "medium_venn_growth"
    if len(med) < r or r < 1:
        return Check(name, "pass", f"vacuous ({len(med)} medium cuts)")
    ns = len(stats.verts)
    bits = ((med[:, None] >> np.arange(ns)) & 1).astype(np.int8)
    if len(med) <= MAX_TUPLE_ENUM:
        tuples = np.array(list(itertools.permutations(range(len(med)), r)), dtype=np.int64)
        mode = "all"
    else:
        rs = np.random.default_rng(rng_seed)
        tuples = np.array([rs.choice(len(med), size=r, replace=False)
                           for _ in range(sample_size)], dtype=np.int64)
        mode = "sampled"
    full = _venn_counts(bits, tuples)
    if r > 1:
        head = _venn_counts(bits, tuples[:, :r - 1])
    else:
        head = np.ones(len(tuples), dtype=np.int64)
    bad = (head >= 2 * (r - 1)) & (full >= 2 * r)
    if bad.any():
        t = tuples[np.argmax(bad)]
        sides = [sorted(stats.side(med[i])) for i in t]
        return Check(name, "fail", f"tuple={sides}")
    return Check(name, "pass", f"{mode} {len(tuples)} tuples r={r}")


def check_extremal_predicates(g: WeightedMultigraph, k: int, J=None, epsilon=None,
                              lambda_k: int | None = None,
                              guard: int = PREDICATE_MAX_N) -> list[Check]:
    """Evaluate the extremal inequalities on ``g`` exactly.

    Checks the edge-count lower bound, the small-cut count, the Venn growth
    restriction on medium cuts, and the two good-cut edge bounds for the
    supplied ``J`` (default empty) and ``epsilon`` (default (k+1)/(2k^2)).
    """
    if g.n > guard:
        raise GraphError(f"n={g.n} exceeds the predicate guard {guard}")
    if lambda_k is None:
        lambda_k = exact_lambda_k(g, k).lambda_k
    from .contraction import AnalysisParams

    J = normalize_edge_set(g, J)
    params = AnalysisParams.make(k, lambda_k, sum(J.values()), epsilon)
    beta = params.beta
    stats = classify_two_cuts(g, k, J=J, epsilon=params.epsilon, lambda_k=lambda_k)
    lam_bar = stats.lambda_bar
    n, m = g.n, g.total_weight
    checks = []

    if n >= k:
        bound = Fraction(n * k, 2 * (k - 1)) * lam_bar
        checks.append(Check("edge_count_bound", "pass" if m >= bound else "fail",
                            f"m={m} bound={bound}"))
    else:
        checks.append(Check("edge_count_bound", "skip", f"n={n} < k={k}"))

    limit = 2 ** (k - 2)
    checks.append(Check("few_small_cuts", "pass" if stats.n_small < limit else "fail",
                        f"small={stats.n_small} limit={limit}"))

    checks.append(medium_venn_check(stats, k))

    s = stats.n_good
    if n >= beta:
        bound = s * stats.small_threshold / 2 + (n - s - beta) * lam_bar
        checks.append(Check("good_cut_edge_bound", "pass" if m >= bound else "fail",
                            f"m={m} bound={bound} s={s}"))
    else:
        checks.append(Check("good_cut_edge_bound", "skip", f"n={n} < beta={beta}"))

    bound = (n - beta) * lam_bar - min(Fraction(s), n - beta) * lam_bar / 2
    checks.append(Check("crude_edge_bound", "pass" if m >= bound else "fail",
                        f"m={m} bound={bound} s={s}"))
    return checks


# -- census -------------------------------------------------------------------

@dataclass
class CensusRow:
    family: str
    n: int
    k: int
    count: int

    def line(self) -> str:
        return f"{self.family}\t{self.n}\t{self.k}\t{self.count}"


def medium_cut_census(family: str, ns: Sequence[int], k: int,
                      constant: float | None = None, seed: int = 0) -> list[CensusRow]:
    """Medium-cut counts across graph sizes of one family.

    λ_k comes from the family's closed form when known, otherwise from the
    exhaustive oracle.  With ``constant`` set, a count above constant·n
    raises ``AssertionError``.
    """
    from . import families

    rows = []
    for n in ns:
        g = families.make(family, n, seed=seed)
        lam = families.known_lambda_k(family, n, k)
        if lam is None:
            lam = exact_lambda_k(g, k).lambda_k
        stats = classify_two_cuts(g, k, lambda_k=lam)
        rows.append(CensusRow(family, n, k, stats.n_medium))
        if constant is not None:
            assert stats.n_medium <= constant * n, (
                f"{family} n={n}: {stats.n_medium} medium cuts exceeds {constant}*n")
    return rows


def census_slope_spread(rows: Sequence[CensusRow]) -> float | None:
    """max/min of count/n over rows with a nonzero count (None if fewer than two)."""
    slopes = [r.count / r.n for r in rows if r.count > 0]
    if len(slopes) < 2:
        return None
    return max(slopes) / min(slopes)
