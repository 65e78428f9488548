"""The Contraction Algorithm and the instrumented Contraction Process.

Edges are chosen with probability proportional to weight.  The process
variant never selects weight from a protected edge set J and records the
running statistic R_i = sum over stages j > i of λ̄_k / m_j, where m_j is
the total weight left when j super-vertices remain.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate

import numpy as np

from .multigraph import GraphError, KCut, WeightedMultigraph, normalize_edge_set


class Rng:
    """Reproducible generator whose children are keyed by a branch path.

    ``Rng(seed).child(3, 1)`` always yields the same stream, independent of
    any other path, so recursion branches and trial blocks can be run in
    any order (or in parallel) without changing results.
    """

    __slots__ = ("seed", "path", "gen")

    def __init__(self, seed: int = 0, path: tuple[int, ...] = ()):
        if seed < 0:
            raise ValueError("seed must be nonnegative")
        self.seed = int(seed)
        self.path = tuple(int(p) for p in path)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.path)
        self.gen = np.random.Generator(np.random.PCG64(ss))

    def child(self, *index: int) -> "Rng":
        return Rng(self.seed, self.path + index)

    def random(self) -> float:
        return self.gen.random()

    def __repr__(self) -> str:
        return f"Rng(seed={self.seed}, path={self.path})"


def _as_rng(rng) -> Rng:
    if isinstance(rng, Rng):
        return rng
    return Rng(0 if rng is None else int(rng))


def sample_edge(g: WeightedMultigraph, rng: Rng, excluded: dict | None = None) -> tuple[int, int]:
    """Pick a live pair with probability proportional to its (non-excluded) weight.

    ``excluded`` maps pairs of current super-vertex ids to the weight on
    that pair that may not be chosen.
    """
    rng = _as_rng(rng)
    el = g.edge_list()
    if excluded:
        weights = [w - excluded.get((a, b), 0) for a, b, w in el]
    else:
        weights = [w for _, _, w in el]
    cum = list(accumulate(weights))
    total = cum[-1] if cum else 0
    if total <= 0:
        raise GraphError("no selectable edge weight remains")
    x = rng.random() * total
    i = bisect_right(cum, x)
    # guard the measure-zero float edge case x == total
    i = min(i, len(el) - 1)
    while weights[i] == 0:
        i -= 1
    return el[i][0], el[i][1]


def run_contraction(g: WeightedMultigraph, tau: int, rng) -> WeightedMultigraph:
    """Contract weight-proportional random edges until at most ``tau`` super-vertices remain."""
    if tau < 1:
        raise GraphError("tau must be at least 1")
    if g.n_super <= tau:
        return g
    rng = _as_rng(rng)
    h = g.copy()
    adj = h.adj
    gen = rng.gen
    while len(adj) > tau:
        pairs = []
        cum = []
        acc = 0
        for a, nbrs in adj.items():
            for b, w in nbrs.items():
                if a < b:
                    acc += w
                    pairs.append((a, b))
                    cum.append(acc)
        if acc == 0:
            raise GraphError(
                f"graph is disconnected: edges ran out with {len(adj)} super-vertices left")
        i = bisect_right(cum, gen.random() * acc)
        h.contract_edge(pairs[min(i, len(pairs) - 1)], in_place=True)
    return h


def random_k_labellings(ns: int, k: int, count: int, gen: np.random.Generator,
                        batch: int | None = None) -> np.ndarray:
    """``count`` uniform surjections of ``ns`` items onto ``k`` labels (rows of int8).

    Every partition into k blocks corresponds to exactly k! surjections, so
    forgetting the labels gives the uniform distribution over partitions.
    """
    if k > ns:
        raise GraphError(f"cannot split {ns} super-vertices into {k} nonempty blocks")
    if count == 0:
        return np.zeros((0, ns), dtype=np.int8)
    # acceptance rate k! S(ns,k) / k^ns, computed in logs to avoid overflow
    from .oracle import stirling2
    log_acc = math.lgamma(k + 1) + math.log(stirling2(ns, k)) - ns * math.log(k)
    acc = math.exp(log_acc)
    out = []
    got = 0
    while got < count:
        want = count - got
        size = int(want / acc * 1.1) + 16
        if batch is not None:
            size = min(size, batch)
        lab = gen.integers(0, k, size=(size, ns), dtype=np.int8)
        ok = np.ones(size, dtype=bool)
        for c in range(k):
            ok &= (lab == c).any(axis=1)
        lab = lab[ok][:want]
        out.append(lab)
        got += len(lab)
    return np.vstack(out)


def final_random_k_cut(g: WeightedMultigraph, k: int, rng) -> KCut:
    """A uniformly random k-partition of the super-vertices, lifted to original vertices."""
    rng = _as_rng(rng)
    verts = g.super_vertices()
    if len(verts) < k:
        raise GraphError(f"only {len(verts)} super-vertices, cannot form a {k}-cut")
    row = random_k_labellings(len(verts), k, 1, rng.gen)[0]
    labels = {v: int(x) for v, x in zip(verts, row)}
    # crossing weight is preserved by contraction, so no need to revisit the original
    return KCut.from_blocks(g.lift(labels), g.crossing_weight(labels))


@dataclass(frozen=True)
class AnalysisParams:
    """Derived constants for the good-cut analysis of a protected edge set.

    ``alpha = |J| / λ_k``; ``delta = (1 - εk)/(k-1)``; ``beta = k + 2αk/ε``.
    """

    k: int
    lambda_k: int
    alpha: Fraction
    epsilon: Fraction
    delta: Fraction
    beta: Fraction | float
    lambda_bar: Fraction

    @classmethod
    def make(cls, k: int, lambda_k: int, j_weight: int = 0, epsilon=None) -> "AnalysisParams":
        if k < 2:
            raise GraphError("k must be at least 2")
        if lambda_k < 1:
            raise GraphError("lambda_k must be positive")
        eps = Fraction(k + 1, 2 * k * k) if epsilon is None else Fraction(epsilon)
        if not 0 <= eps < Fraction(1, k):
            raise GraphError(f"epsilon must lie in [0, 1/k), got {eps}")
        alpha = Fraction(j_weight, lambda_k)
        delta = (1 - eps * k) / (k - 1)
        if eps > 0:
            beta = k + 2 * alpha * k / eps
        else:
            beta = k if alpha == 0 else math.inf
        p = cls(k, lambda_k, alpha, eps, delta, beta, Fraction(lambda_k, k))
        assert p.delta > 0
        assert 1 + p.delta == (1 - p.epsilon) * k / (k - 1)
        assert p.beta >= k
        return p


@dataclass
class ProcessTrace:
    """Per-stage record of one Contraction Process run.

    ``stages[t] = (j, m_j, pair, j_dropped)``: with ``j`` super-vertices and
    total weight ``m_j``, ``pair`` was contracted and ``j_dropped`` units
    of protected weight became self-loops.
    """

    n: int
    stop: int
    lambda_bar: Fraction
    stages: list[tuple[int, int, tuple[int, int], int]] = field(default_factory=list)
    good_cut_counts: list[int] | None = None

    @property
    def m_values(self) -> list[int]:
        return [m for _, m, _, _ in self.stages]

    @property
    def r_value(self) -> Fraction:
        return self.r_at(self.stop)

    def r_at(self, i: int) -> Fraction:
        """R_i for any ``i`` at or above the stage where this run stopped."""
        if i < self.stop:
            raise ValueError(f"trace stopped at stage {self.stop}, cannot give R_{i}")
        return sum((Fraction(1, m) for j, m, _, _ in self.stages if j > i), Fraction(0)) \
            * self.lambda_bar

    def r_float(self, i: int | None = None) -> float:
        i = self.stop if i is None else i
        return float(self.lambda_bar) * sum(1.0 / m for j, m, _, _ in self.stages if j > i)

    def lines(self) -> list[str]:
        return [f"stage {j} {m}" for j, m, _, _ in self.stages]


def contraction_process(g: WeightedMultigraph, J, stop: int, params: AnalysisParams, rng,
                        track_good_cuts: bool = False, exact: bool = True) -> ProcessTrace:
    """Run stages n, n-1, ..., stop+1, never selecting protected weight.

    ``J`` is a pair -> weight map (or iterable of pairs) on the original
    vertex ids.  Protected edges that end up inside a super-vertex are
    dropped as self-loops.  With ``track_good_cuts`` the number of good
    cuts of every intermediate graph is counted (small graphs only).
    """
    if stop < 1:
        raise GraphError("stop stage must be at least 1")
    rng = _as_rng(rng)
    J = normalize_edge_set(g, J)
    h = g.copy()
    jres: dict[tuple[int, int], int] = dict(J)
    trace = ProcessTrace(g.n_super, stop, params.lambda_bar)
    counts: list[int] | None = [] if track_good_cuts else None

    def count_now():
        from .oracle import count_good_cuts
        counts.append(count_good_cuts(h, params.k, params.lambda_k, dict(jres), params.epsilon))

    if counts is not None:
        count_now()
    while h.n_super > stop:
        j = h.n_super
        m = h.total_weight
        try:
            a, b = sample_edge(h, rng, jres)
        except GraphError:
            raise GraphError(
                f"unprotected weight exhausted at stage {j} before reaching {stop}") from None
        dropped = jres.pop((a, b), 0)
        # residual J on pairs touching a or b follows the merge
        moved: dict[int, int] = {}
        for (x, y) in [p for p in jres if a in p or b in p]:
            w = jres.pop((x, y))
            other = y if x in (a, b) else x
            moved[other] = moved.get(other, 0) + w
        new_id = h._next_id
        h.contract_edge((a, b), in_place=True)
        for other, w in moved.items():
            jres[(min(other, new_id), max(other, new_id))] = w
        trace.stages.append((j, m, (a, b), dropped))
        if counts is not None:
            count_now()
    trace.good_cut_counts = counts
    return trace


@dataclass
class SurvivalEstimate:
    survived: int
    trials: int

    @property
    def frequency(self) -> float:
        return self.survived / self.trials

    @property
    def stderr(self) -> float:
        p = self.frequency
        return math.sqrt(max(p * (1 - p), 0.0) / self.trials)


def survived(h: WeightedMultigraph, cut: KCut) -> bool:
    """True if every super-vertex of ``h`` lies inside one block of ``cut``."""
    block_of = {}
    for i, b in enumerate(cut.blocks):
        for v in b:
            block_of[v] = i
    for mem in h.members.values():
        it = iter(mem)
        first = block_of[next(it)]
        if any(block_of[v] != first for v in it):
            return False
    return True


def estimate_survival(g: WeightedMultigraph, cut: KCut, tau: int, trials: int, rng
                      ) -> SurvivalEstimate:
    """Fraction of Contraction Algorithm runs (down to ``tau``) that leave ∂K untouched."""
    if trials < 1:
        raise GraphError("trials must be positive")
    rng = _as_rng(rng)
    hits = 0
    for _ in range(trials):
        if survived(run_contraction(g, tau, rng), cut):
            hits += 1
    return SurvivalEstimate(hits, trials)
