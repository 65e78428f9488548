"""Recursive Contraction: level schedule, recursion, and cut enumeration.

A run starts at level 0 with the input graph.  Below the last level each
instance runs ``t_l`` independent contractions down to ``n_{l+1}``
super-vertices and recurses on every result; a leaf draws one uniformly
random k-cut.  Cuts from all leaves go into a deduplicated
:class:`CutFamily`.  The whole recursion is repeated to amplify the
chance that every target cut is seen at least once.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterator

import numpy as np

from .contraction import Rng, final_random_k_cut, random_k_labellings, run_contraction
from .multigraph import DisconnectedGraphError, GraphError, KCut, WeightedMultigraph
from .oracle import labelling_weights, stirling2

MAX_LEVELS = 64
LEAF_BATCH = 1 << 16
RECURSION_BLOCK = 8
UNION_SLACK_BITS = 10


def _ceil(x: float) -> int:
    r = round(x)
    if abs(x - r) <= 1e-9 * max(1.0, abs(x)):
        return int(r)
    return math.ceil(x)


def _ratio_power(a: int, b: int, exponent) -> int:
    """⌈(a/b)^exponent⌉, exactly when the exponent is an integer."""
    e = Fraction(exponent).limit_denominator(10**9)
    if e.denominator == 1:
        q = Fraction(a, b) ** int(e)
        return -((-q.numerator) // q.denominator)
    return _ceil((a / b) ** float(exponent))


@dataclass(frozen=True)
class Schedule:
    n: int
    k: int
    alpha: float
    floor: float
    levels: tuple[int, ...]
    trials: tuple[int, ...]
    kind: str = "recursive"  # recursive | ks | direct
    capped: bool = False

    @property
    def T(self) -> int:
        return len(self.levels) - 1

    @property
    def leaves_per_run(self) -> int:
        return math.prod(self.trials)

    def lines(self) -> list[str]:
        out = [f"schedule kind {self.kind} n {self.n} k {self.k} alpha {self.alpha} "
               f"floor {self.floor} T {self.T} capped {str(self.capped).lower()}"]
        for lvl, size in enumerate(self.levels):
            t = self.trials[lvl] if lvl < self.T else 0
            out.append(f"level {lvl} size {size} trials {t}")
        return out


def default_floor(k: int, alpha) -> int:
    return _ceil(20 * float(alpha) * k * k)


def build_schedule(n: int, k: int, alpha=1, floor=None,
                   max_trials: int | None = None) -> Schedule:
    """Level sizes n_l = ⌈max(n^{(2/(αk))^l}, floor)⌉ and trials t_l = ⌈(n_l/n_{l+1})^{αk}⌉.

    For k = 2 the exponent 2/(αk) can reach 1 and the sizes would stall,
    so levels shrink by a factor √2 instead (t_l = 2 when α = 1).
    """
    if n < 2 or k < 2:
        raise GraphError("need n >= 2 and k >= 2")
    if alpha < 1:
        raise GraphError("alpha must be at least 1")
    if floor is None:
        floor = default_floor(k, alpha)
    if floor < k:
        raise GraphError(f"floor {floor} is below k={k}")
    bottom = _ceil(floor)
    levels = [n]
    kind = "ks" if k == 2 else "recursive"
    if n > bottom:
        expo = 2.0 / (float(alpha) * k)
        i = 0
        while levels[-1] > bottom:
            i += 1
            if kind == "ks":
                nxt = max(_ceil(levels[-1] / math.sqrt(2)), bottom)
            else:
                nxt = max(_ceil(n ** (expo ** i)), bottom)
            if nxt >= levels[-1]:
                nxt = levels[-1] - 1
            levels.append(nxt)
            if len(levels) - 1 > MAX_LEVELS:
                raise GraphError("schedule exceeds the level guard")
    trials = []
    capped = False
    for a, b in zip(levels, levels[1:]):
        t = _ratio_power(a, b, float(alpha) * k)
        if max_trials is not None and t > max_trials:
            t, capped = max_trials, True
        trials.append(t)
    return Schedule(n, k, float(alpha), floor, tuple(levels), tuple(trials), kind, capped)


# -- cut store ----------------------------------------------------------------

class CutFamily:
    """Deduplicated store of k-cuts keyed by canonical partition.

    ``max_weight`` drops heavier cuts on insertion; ``keep_min`` keeps only
    the cuts at the lightest weight seen so far.
    """

    def __init__(self, max_weight: int | None = None, keep_min: bool = False):
        self.store: dict[tuple, KCut] = {}
        self.max_weight = max_weight
        self.keep_min = keep_min
        self.min_weight: int | None = None

    def accepts(self, weight: int) -> bool:
        if self.max_weight is not None and weight > self.max_weight:
            return False
        if self.keep_min and self.min_weight is not None and weight > self.min_weight:
            return False
        return True

    def insert(self, cut: KCut) -> bool:
        if not self.accepts(cut.weight):
            return False
        if self.min_weight is None or cut.weight < self.min_weight:
            self.min_weight = cut.weight
            if self.keep_min:
                self.store = {}
        if cut.key in self.store:
            return False
        self.store[cut.key] = cut
        return True

    def merge(self, other: "CutFamily") -> "CutFamily":
        for cut in other.store.values():
            self.insert(cut)
        return self

    def __len__(self) -> int:
        return len(self.store)

    def __contains__(self, cut: KCut) -> bool:
        return cut.key in self.store

    def __iter__(self) -> Iterator[KCut]:
        return iter(self.cuts())

    def cuts(self) -> list[KCut]:
        return sorted(self.store.values(), key=lambda c: (c.weight, c.blocks))

    def at_weight(self, weight: int) -> "CutFamily":
        out = CutFamily()
        for c in self.store.values():
            if c.weight == weight:
                out.insert(c)
        return out

    def restricted(self, max_weight: int) -> "CutFamily":
        out = CutFamily(max_weight=max_weight)
        out.merge(self)
        return out

    def __repr__(self) -> str:
        return f"CutFamily(size={len(self)}, min_weight={self.min_weight})"


# -- configuration ------------------------------------------------------------

@dataclass(frozen=True)
class SolverConfig:
    k: int
    alpha: float = 1
    floor_override: int | None = None
    repetitions: int | None = None
    max_trials_per_level: int | None = None
    seed: int = 0
    max_repetitions: int = 10_000_000
    threads: int = 1
    max_seconds: float | None = None

    def __post_init__(self):
        if self.k < 2:
            raise GraphError("k must be at least 2")
        if self.alpha < 1:
            raise GraphError("alpha must be at least 1")
        if self.repetitions is not None and self.repetitions < 1:
            raise GraphError("repetitions must be at least 1")


def plan_schedule(n: int, cfg: SolverConfig) -> Schedule:
    """The schedule a solver run actually uses.

    An explicit ``floor_override`` always selects the level recursion.
    Otherwise graphs with n <= 2^k go straight to the Contraction Algorithm
    with τ = ⌈4αk⌉, and larger graphs use the level recursion down to
    ⌈20αk²⌉.
    """
    k, alpha = cfg.k, cfg.alpha
    if cfg.floor_override is not None:
        return build_schedule(n, k, alpha, cfg.floor_override, cfg.max_trials_per_level)
    if k >= 3 and n <= 2 ** k:
        tau = _ceil(4 * float(alpha) * k)
        if n <= tau:
            return Schedule(n, k, float(alpha), tau, (n,), (), "direct")
        return Schedule(n, k, float(alpha), tau, (n, tau), (1,), "direct")
    return build_schedule(n, k, alpha, None, cfg.max_trials_per_level)


def default_repetitions(schedule: Schedule, max_repetitions: int | None = None) -> int:
    """Outer repeat count: base × amplification.

    The base makes one fixed target cut appear with probability about 1/2
    when the unspecified per-level constant is taken as 1: a factor 2 per
    level, the exact leaf factor S(n_T, k), and for a direct run below the
    leaf size the survival factor (n/τ)^{2α(k-1)}.  The amplification
    factor ⌈αk² ln k ln n⌉ then drives the miss probability of each cut
    down to 2^-amplification.  It is raised to at least ⌈αk log2 n⌉ + 10
    so that a union bound over the at most n^{αk} target cuts still leaves
    a failure chance near 2^-10 when k is small.
    """
    n, k, alpha = schedule.n, schedule.k, schedule.alpha
    amp = max(_ceil(alpha * k * k * math.log(k) * math.log(max(n, 2))),
              _ceil(alpha * k * math.log2(max(n, 2))) + UNION_SLACK_BITS)
    leaf = schedule.levels[-1]
    log_base = math.log(math.log(2)) + math.log(stirling2(leaf, k))
    if schedule.kind == "direct" and schedule.T > 0:
        log_base += 2 * alpha * (k - 1) * math.log(n / leaf)
    else:
        log_base += schedule.T * math.log(2)
    limit = max_repetitions if max_repetitions is not None else 10**15
    if log_base + math.log(amp) > math.log(limit) + 1:
        return limit + 1
    return max(1, math.ceil(math.exp(log_base))) * amp


@dataclass
class SolveResult:
    lambda_k: int | None
    cuts: CutFamily
    repetitions: int
    capped: bool
    schedule: Schedule
    degenerate_leaves: int = 0
    elapsed: float = 0.0

    @property
    def count(self) -> int:
        return len(self.cuts)


# -- recursion ----------------------------------------------------------------

def _labels_weight(original: WeightedMultigraph, cut: KCut) -> int:
    lab = cut.labels(original.n)
    return sum(w for u, v, w in original.edge_list() if lab[u] != lab[v])


def recursive_contract(g: WeightedMultigraph, level: int, schedule: Schedule, cfg: SolverConfig,
                       rng: Rng, sink: CutFamily, original: WeightedMultigraph | None = None,
                       stats: dict | None = None) -> None:
    """One instance of the recursion at ``level``; leaves insert into ``sink``."""
    original = g if original is None else original
    if level >= schedule.T:
        if g.n_super < cfg.k:
            if stats is not None:
                stats["degenerate_leaves"] = stats.get("degenerate_leaves", 0) + 1
            return
        cut = final_random_k_cut(g, cfg.k, rng)
        weight = _labels_weight(original, cut)
        assert weight == cut.weight
        sink.insert(cut)
        return
    target = schedule.levels[level + 1]
    for t in range(schedule.trials[level]):
        child = rng.child(t)
        h = run_contraction(g, target, child)
        recursive_contract(h, level + 1, schedule, cfg, child.child(0), sink, original, stats)


def canonical_rows(labels: np.ndarray, k: int) -> np.ndarray:
    """Relabel each row so labels appear in order of first occurrence."""
    if len(labels) == 0:
        return labels
    eq = labels[:, :, None] == np.arange(k, dtype=labels.dtype)
    first = eq.argmax(axis=1)
    rank = np.argsort(np.argsort(first, axis=1), axis=1).astype(labels.dtype)
    return np.take_along_axis(rank, labels.astype(np.int64), axis=1)


def _leaf_batch(g: WeightedMultigraph, k: int, count: int, gen: np.random.Generator,
                sink: CutFamily) -> None:
    """``count`` leaves on an uncontracted graph, vectorised."""
    done = 0
    while done < count:
        size = min(LEAF_BATCH, count - done)
        lab = random_k_labellings(g.n, k, size, gen)
        w = labelling_weights(g, lab)
        done += size
        if sink.keep_min:
            lo = int(w.min())
            if sink.min_weight is not None and lo > sink.min_weight:
                continue
            keep = w == lo
        elif sink.max_weight is not None:
            keep = w <= sink.max_weight
        else:
            keep = np.ones(len(w), dtype=bool)
        if not keep.any():
            continue
        rows = canonical_rows(lab[keep], k)
        uniq, idx = np.unique(rows, axis=0, return_index=True)
        ws = w[keep][idx]
        for row, x in zip(uniq, ws):
            sink.insert(KCut.from_labels(row, int(x)))


def _new_sink(keep_min: bool, max_weight: int | None) -> CutFamily:
    return CutFamily(max_weight=max_weight, keep_min=keep_min)


def _run_block(g: WeightedMultigraph, schedule: Schedule, cfg: SolverConfig, block: int,
               start: int, count: int, keep_min: bool, max_weight: int | None):
    sink = _new_sink(keep_min, max_weight)
    stats: dict = {}
    rng = Rng(cfg.seed).child(block)
    if schedule.T == 0:
        _leaf_batch(g, cfg.k, count, rng.gen, sink)
    else:
        for r in range(count):
            recursive_contract(g, 0, schedule, cfg, rng.child(r), sink, g, stats)
    return sink, stats.get("degenerate_leaves", 0)


def _run_block_star(args):
    return _run_block(*args)


def _repeat(g: WeightedMultigraph, cfg: SolverConfig, keep_min: bool,
            max_weight: int | None) -> SolveResult:
    if not g.is_original:
        raise GraphError("the solver expects an uncontracted graph")
    if g.n < cfg.k:
        raise GraphError(f"graph has {g.n} vertices, fewer than k={cfg.k}")
    if not g.is_connected():
        raise DisconnectedGraphError("the randomized solver needs a connected graph")
    t0 = time.perf_counter()
    schedule = plan_schedule(g.n, cfg)
    capped = schedule.capped
    reps = cfg.repetitions
    if reps is None:
        reps = default_repetitions(schedule, cfg.max_repetitions)
    if reps > cfg.max_repetitions:
        reps, capped = cfg.max_repetitions, True
    block_size = LEAF_BATCH if schedule.T == 0 else RECURSION_BLOCK
    blocks = [(b, s, min(block_size, reps - s)) for b, s in enumerate(range(0, reps, block_size))]
    sink = _new_sink(keep_min, max_weight)
    degenerate = 0
    done = 0
    jobs = [(g, schedule, cfg, b, s, c, keep_min, max_weight) for b, s, c in blocks]
    if cfg.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            for (part, deg), job in zip(pool.map(_run_block_star, jobs), jobs):
                sink.merge(part)
                degenerate += deg
                done += job[5]
    else:
        for job in jobs:
            if cfg.max_seconds is not None and time.perf_counter() - t0 > cfg.max_seconds:
                capped = True
                break
            part, deg = _run_block(*job)
            sink.merge(part)
            degenerate += deg
            done += job[5]
    return SolveResult(sink.min_weight, sink, done, capped, schedule, degenerate,
                       time.perf_counter() - t0)


def solve_min_k_cut(g: WeightedMultigraph, cfg: SolverConfig) -> SolveResult:
    """Minimum k-cut weight and every minimum cut found (α is fixed to 1)."""
    cfg = replace(cfg, alpha=1)
    res = _repeat(g, cfg, keep_min=True, max_weight=None)
    res.cuts = res.cuts.at_weight(res.lambda_k)
    return res


def enumerate_near_min_cuts(g: WeightedMultigraph, cfg: SolverConfig,
                            lambda_k: int | None = None) -> SolveResult:
    """All k-cuts of weight at most α·λ_k that the amplified recursion finds."""
    if lambda_k is None:
        lambda_k = solve_min_k_cut(g, cfg).lambda_k
    alpha = Fraction(cfg.alpha).limit_denominator(10**6)
    bound = math.floor(alpha * lambda_k)
    res = _repeat(g, cfg, keep_min=False, max_weight=bound)
    return res
