"""Seeded experiment sweeps shared by the ``verify`` command and the test suite."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import families
from .contraction import estimate_survival
from .oracle import Check, check_extremal_predicates, exact_lambda_k, exact_survival_probability
from .sunflower import (
    erdos_rado_threshold,
    find_many_sunflowers,
    find_sunflower,
    find_sunflower_nonempty_core,
    min_universe,
    random_family,
)

# every (d, r) with d <= 4 and 2 <= r <= 4
PLAIN_CONFIGS = tuple((d, r) for d in range(1, 5) for r in range(2, 5))
# d = 1 is vacuous here: N singletons never exceed threshold·N = (r-1)·N
CORE_CONFIGS = ((2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4), (4, 2), (4, 3))
MANY_CONFIGS = ((2, 2, 2), (2, 3, 2), (2, 2, 3), (3, 2, 2), (3, 3, 2), (4, 2, 2))


def random_connected_graph(rng: np.random.Generator, n: int, max_weight: int):
    extra = int(rng.integers(0, n * (n - 1) // 2 + 1))
    return families.random_multigraph(n, seed=int(rng.integers(2**32)), extra_edges=extra,
                                      max_weight=max_weight)


# -- extremal predicates ------------------------------------------------------

@dataclass
class SweepSummary:
    name: str
    runs: int
    failures: int
    first_failure: str = ""

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def check(self) -> Check:
        w = f"runs={self.runs} failures={self.failures}"
        if self.first_failure:
            w += f" first={self.first_failure}"
        return Check(self.name, "pass" if self.ok else "fail", w)


def extremal_sweep(count: int = 500, n_max: int = 7, ks: Sequence[int] = (3, 4),
                   max_weight: int = 3, seed: int = 0,
                   names: Sequence[str] | None = None) -> dict[str, SweepSummary]:
    """Run the extremal predicates on ``count`` random connected graphs.

    Graph i uses k = ks[i % len(ks)] and n uniform in [k, n_max].
    """
    rng = np.random.default_rng(seed)
    out: dict[str, SweepSummary] = {}
    for i in range(count):
        k = ks[i % len(ks)]
        n = int(rng.integers(k, n_max + 1))
        g = random_connected_graph(rng, n, max_weight)
        for c in check_extremal_predicates(g, k):
            if names is not None and c.name not in names:
                continue
            s = out.setdefault(c.name, SweepSummary(c.name, 0, 0))
            if c.status == "skip":
                continue
            s.runs += 1
            if c.status == "fail":
                s.failures += 1
                if not s.first_failure:
                    s.first_failure = f"graph={i} n={n} k={k} {c.witness}"
    return out


# -- sunflowers ---------------------------------------------------------------

@dataclass
class SunflowerSweep:
    kind: str
    d: int
    r: int
    s: int
    universe: int
    size: int
    trials: int
    failures: int

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def check(self) -> Check:
        name = f"sunflower_{self.kind}_d{self.d}_r{self.r}" + (f"_s{self.s}" if self.kind == "many" else "")
        return Check(name, "pass" if self.ok else "fail",
                     f"N={self.universe} sets={self.size} families={self.trials} "
                     f"failures={self.failures}")


def sunflower_sweep(kind: str, d: int, r: int, s: int = 1, trials: int = 1000,
                    seed: int = 0) -> SunflowerSweep:
    """Random families one set above the relevant threshold; count finder failures.

    ``kind`` is ``plain`` (threshold), ``core`` (threshold·N) or ``many``
    (threshold·s·N).  Sets are drawn uniformly without repetition from all
    nonempty subsets of size <= d of the smallest universe that has room.
    """
    thr = erdos_rado_threshold(d, r)
    if kind == "plain":
        universe = min_universe(d, 0, thr)
        size = thr + 1
    elif kind == "core":
        universe = min_universe(d, thr)
        size = thr * universe + 1
    elif kind == "many":
        universe = min_universe(d, thr * s)
        size = thr * s * universe + 1
    else:
        raise ValueError(f"unknown sweep kind {kind!r}")
    code = {"plain": 0, "core": 1, "many": 2}[kind]
    rng = np.random.default_rng([seed, code, d, r, s])
    failures = 0
    for _ in range(trials):
        fam = random_family(universe, d, size, rng)
        if kind == "plain":
            ok = find_sunflower(fam, r) is not None
        elif kind == "core":
            sf = find_sunflower_nonempty_core(fam, r)
            ok = sf is not None and len(sf.core) > 0
        else:
            res = find_many_sunflowers(fam, r, s)
            cores = res.cores
            ok = (not res.shortfall and all(cores) and len(set(cores)) == len(cores))
            for sf in res.sunflowers:
                sf.validate(fam)
        failures += not ok
    return SunflowerSweep(kind, d, r, s, universe, size, trials, failures)


def sunflower_suite(trials: int = 1000, seed: int = 0) -> list[SunflowerSweep]:
    out = [sunflower_sweep("plain", d, r, 1, trials, seed) for d, r in PLAIN_CONFIGS]
    out += [sunflower_sweep("core", d, r, 1, trials, seed) for d, r in CORE_CONFIGS]
    out += [sunflower_sweep("many", d, r, s, trials, seed) for d, r, s in MANY_CONFIGS]
    return out


# -- survival -----------------------------------------------------------------

@dataclass
class SurvivalRow:
    tau: int
    frequency: float
    stderr: float
    trials: int
    exact: Fraction | None

    @property
    def deviation(self) -> float | None:
        if self.exact is None:
            return None
        return self.frequency - float(self.exact)

    def check(self, sigmas: float = 3.0) -> Check:
        if self.exact is None:
            return Check(f"survival_tau{self.tau}", "skip", f"freq={self.frequency:.5f}")
        dev = self.deviation
        ok = abs(dev) <= sigmas * self.stderr
        return Check(f"survival_tau{self.tau}", "pass" if ok else "fail",
                     f"freq={self.frequency:.5f} exact={float(self.exact):.5f} "
                     f"se={self.stderr:.5f} trials={self.trials}")


def survival_experiment(g, k: int, taus: Sequence[int], trials: int, seed: int = 0,
                        exact_max_n: int = 10) -> list[SurvivalRow]:
    """Survival of the first minimum k-cut (canonical order) to each τ."""
    from .contraction import Rng

    cut = exact_lambda_k(g, k).cuts[0]
    rows = []
    for tau in taus:
        est = estimate_survival(g, cut, tau, trials, Rng(seed).child(tau))
        exact = exact_survival_probability(g, cut, tau) if g.n <= exact_max_n else None
        rows.append(SurvivalRow(tau, est.frequency, est.stderr, trials, exact))
    return rows


def cycle_survival_product(n: int, tau: int, k: int) -> Fraction:
    """∏_{j=τ+1}^{n} (1 - k/j)."""
    out = Fraction(1)
    for j in range(tau + 1, n + 1):
        out *= 1 - Fraction(k, j)
    return out


def binomial_se(p: float, trials: int) -> float:
    return math.sqrt(p * (1 - p) / trials)
