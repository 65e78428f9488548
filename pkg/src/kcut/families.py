"""Built-in graph families, with closed-form minimum k-cut values where known."""

from __future__ import annotations

from math import comb

import numpy as np

from .multigraph import GraphError, WeightedMultigraph

FAMILIES = ("cycle", "clique", "path", "star", "random")


def cycle(n: int, weight: int = 1) -> WeightedMultigraph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return WeightedMultigraph.from_edge_list(n, [(i, (i + 1) % n, weight) for i in range(n)])


def clique(n: int, weight: int = 1) -> WeightedMultigraph:
    return WeightedMultigraph.from_edge_list(
        n, [(u, v, weight) for u in range(n) for v in range(u + 1, n)])


def path(n: int, weight: int = 1) -> WeightedMultigraph:
    return WeightedMultigraph.from_edge_list(n, [(i, i + 1, weight) for i in range(n - 1)])


def star(n: int, weight: int = 1) -> WeightedMultigraph:
    """K_{1,n-1} with centre 0."""
    return WeightedMultigraph.from_edge_list(n, [(0, v, weight) for v in range(1, n)])


def random_multigraph(n: int, seed: int = 0, extra_edges: int | None = None,
                      max_weight: int = 5) -> WeightedMultigraph:
    """Connected random multigraph: a random spanning tree plus random extra edges.

    Extra edges may repeat a pair; repeats aggregate into heavier edges.
    """
    rng = np.random.default_rng(seed)
    if extra_edges is None:
        extra_edges = n
    order = rng.permutation(n)
    edges = []
    for i in range(1, n):
        parent = order[rng.integers(0, i)]
        edges.append((int(order[i]), int(parent), int(rng.integers(1, max_weight + 1))))
    if n >= 2:
        for _ in range(extra_edges):
            u, v = rng.choice(n, size=2, replace=False)
            edges.append((int(u), int(v), int(rng.integers(1, max_weight + 1))))
    return WeightedMultigraph.from_edge_list(n, edges)


def make(family: str, n: int, seed: int = 0) -> WeightedMultigraph:
    if family == "cycle":
        return cycle(n)
    if family == "clique":
        return clique(n)
    if family == "path":
        return path(n)
    if family == "star":
        return star(n)
    if family == "random":
        return random_multigraph(n, seed=seed)
    raise GraphError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def clique_lambda_k(n: int, k: int) -> int:
    """Cheapest k-cut of the unit clique: split off k-1 singletons."""
    return comb(k - 1, 2) + (k - 1) * (n - k + 1)


def known_lambda_k(family: str, n: int, k: int) -> int | None:
    """Closed-form λ_k for the unit-weight deterministic families, else None."""
    if k > n:
        return None
    if family == "cycle":
        return k if n >= 3 else None
    if family == "clique":
        return clique_lambda_k(n, k)
    if family in ("path", "star"):
        return k - 1
    return None
