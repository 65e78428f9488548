"""Weighted multigraphs with edge contraction.

Parallel edges are stored aggregated: ``adj[a][b]`` is the total integer
weight between super-vertices ``a`` and ``b``.  A weight-``w`` edge is the
same thing as ``w`` parallel unit edges, so all comparisons stay exact.

Contraction never reuses an endpoint id; the merged super-vertex gets a
fresh id and carries the union of the original vertices it absorbed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Malformed graph input or an operation the graph cannot support."""


class DisconnectedGraphError(GraphError):
    pass


@dataclass(frozen=True)
class KCut:
    """A partition of the original vertices plus its crossing weight.

    ``blocks`` is canonical: each block is a sorted tuple and blocks are
    ordered by their minimum vertex, so two KCuts are equal exactly when
    they describe the same partition.
    """

    blocks: tuple[tuple[int, ...], ...]
    weight: int

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def key(self) -> tuple[tuple[int, ...], ...]:
        return self.blocks

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], weight: int) -> "KCut":
        return cls(canonical_blocks(blocks), int(weight))

    @classmethod
    def from_labels(cls, labels: Sequence[int], weight: int) -> "KCut":
        groups: dict[int, list[int]] = {}
        for v, lab in enumerate(labels):
            groups.setdefault(int(lab), []).append(v)
        return cls(canonical_blocks(groups.values()), int(weight))

    def labels(self, n: int) -> list[int]:
        out = [-1] * n
        for i, block in enumerate(self.blocks):
            for v in block:
                out[v] = i
        return out


@dataclass(frozen=True)
class TwoCut:
    """A 2-cut represented by its shore (the smaller side)."""

    shore: frozenset[int]
    weight: int

    @classmethod
    def from_side(cls, side: Iterable[int], n: int, weight: int) -> "TwoCut":
        side = frozenset(side)
        other = frozenset(range(n)) - side
        if not side or not other:
            raise GraphError("a 2-cut needs two nonempty sides")
        if len(side) < len(other):
            shore = side
        elif len(other) < len(side):
            shore = other
        else:
            # equal halves: keep the side holding the smallest vertex id
            shore = side if min(side) < min(other) else other
        return cls(shore, int(weight))


def canonical_blocks(blocks: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    out = [tuple(sorted(b)) for b in blocks]
    if any(len(b) == 0 for b in out):
        raise GraphError("partition blocks must be nonempty")
    out.sort(key=lambda b: b[0])
    return tuple(out)


class WeightedMultigraph:
    """Aggregated-weight multigraph over super-vertices.

    Treat instances as immutable; :meth:`contract_edge` returns a new graph
    unless ``in_place=True`` is passed on a copy you own.
    """

    __slots__ = ("n", "adj", "members", "total_weight", "_next_id", "_edge_list")

    def __init__(self, n: int, adj: dict[int, dict[int, int]],
                 members: dict[int, frozenset[int]], total_weight: int,
                 next_id: int | None = None):
        self.n = n
        self.adj = adj
        self.members = members
        self.total_weight = total_weight
        self._next_id = max(members, default=-1) + 1 if next_id is None else next_id
        self._edge_list: tuple[tuple[int, int, int], ...] | None = None

    @classmethod
    def from_edge_list(cls, n: int, edges: Iterable[Sequence[int]]) -> "WeightedMultigraph":
        if n < 1:
            raise GraphError(f"vertex count must be positive, got {n}")
        adj: dict[int, dict[int, int]] = {v: {} for v in range(n)}
        total = 0
        for lineno, edge in enumerate(edges, start=1):
            try:
                u, v, w = (int(x) for x in edge)
            except (TypeError, ValueError):
                raise GraphError(f"edge {lineno}: expected (u, v, w), got {edge!r}") from None
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {lineno}: vertex out of range 0..{n - 1}: ({u}, {v})")
            if u == v:
                raise GraphError(f"edge {lineno}: self-loop at vertex {u}")
            if w < 1:
                raise GraphError(f"edge {lineno}: weight must be a positive integer, got {w}")
            adj[u][v] = adj[u].get(v, 0) + w
            adj[v][u] = adj[v].get(u, 0) + w
            total += w
        members = {v: frozenset((v,)) for v in range(n)}
        return cls(n, adj, members, total, next_id=n)

    # -- queries -----------------------------------------------------------

    @property
    def n_super(self) -> int:
        return len(self.adj)

    @property
    def is_original(self) -> bool:
        return self.n_super == self.n and all(
            len(m) == 1 and v in m for v, m in self.members.items())

    def super_vertices(self) -> list[int]:
        return sorted(self.adj)

    @property
    def edges(self) -> dict[tuple[int, int], int]:
        return {(a, b): w for a, nbrs in self.adj.items() for b, w in nbrs.items() if a < b}

    def edge_list(self) -> tuple[tuple[int, int, int], ...]:
        """Edges as sorted ``(a, b, w)`` triples with ``a < b``; cached."""
        if self._edge_list is None:
            self._edge_list = tuple(sorted(
                (a, b, w) for a, nbrs in self.adj.items() for b, w in nbrs.items() if a < b))
        return self._edge_list

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        el = self.edge_list()
        if not el:
            z = np.zeros(0, dtype=np.int64)
            return z, z.copy(), z.copy()
        arr = np.array(el, dtype=np.int64)
        return arr[:, 0], arr[:, 1], arr[:, 2]

    def weight(self, a: int, b: int) -> int:
        return self.adj.get(a, {}).get(b, 0)

    def degree(self, v: int) -> int:
        return sum(self.adj[v].values())

    def owner(self) -> dict[int, int]:
        """Map each original vertex to the super-vertex that absorbed it."""
        return {orig: sv for sv, mem in self.members.items() for orig in mem}

    def is_connected(self) -> bool:
        if not self.adj:
            return True
        start = next(iter(self.adj))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u in self.adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == len(self.adj)

    def copy(self) -> "WeightedMultigraph":
        return WeightedMultigraph(
            self.n, {v: dict(nb) for v, nb in self.adj.items()}, dict(self.members),
            self.total_weight, self._next_id)

    # -- contraction -------------------------------------------------------

    def contract_edge(self, pair: tuple[int, int], in_place: bool = False) -> "WeightedMultigraph":
        """Merge the two super-vertices of ``pair`` into a fresh super-vertex.

        The self-loop formed by the pair's own weight is dropped, so
        ``total_weight`` falls by exactly ``weight(a, b)``.
        """
        a, b = pair
        g = self if in_place else self.copy()
        adj = g.adj
        if a == b or a not in adj or b not in adj[a]:
            raise GraphError(f"no live edge between super-vertices {a} and {b}")
        loop = adj[a][b]
        na = adj.pop(a)
        nb = adj.pop(b)
        del na[b]
        del nb[a]
        # merge the smaller neighbourhood into the larger one
        if len(na) < len(nb):
            na, nb = nb, na
        for u, w in nb.items():
            na[u] = na.get(u, 0) + w
        new = g._next_id
        g._next_id += 1
        for u, w in na.items():
            nbr = adj[u]
            nbr.pop(a, None)
            nbr.pop(b, None)
            nbr[new] = w
        adj[new] = na
        g.members[new] = g.members.pop(a) | g.members.pop(b)
        g.total_weight -= loop
        g._edge_list = None
        return g

    def crossing_weight(self, labels: dict[int, int]) -> int:
        """Weight of edges whose super-vertex endpoints carry different labels."""
        return sum(w for a, b, w in self.edge_list() if labels[a] != labels[b])

    def lift(self, labels: dict[int, int]) -> list[list[int]]:
        """Expand a labelling of super-vertices into blocks of original vertices."""
        groups: dict[int, list[int]] = {}
        for sv, lab in labels.items():
            groups.setdefault(lab, []).extend(self.members[sv])
        return list(groups.values())

    def __repr__(self) -> str:
        return (f"WeightedMultigraph(n={self.n}, n_super={self.n_super}, "
                f"edges={len(self.edge_list())}, total_weight={self.total_weight})")


def from_edge_list(n: int, edges: Iterable[Sequence[int]]) -> WeightedMultigraph:
    return WeightedMultigraph.from_edge_list(n, edges)


def contract_edge(g: WeightedMultigraph, pair: tuple[int, int]) -> WeightedMultigraph:
    return g.contract_edge(pair)


def _check_partition(n: int, blocks: Sequence[Iterable[int]]) -> list[int]:
    labels = [-1] * n
    count = 0
    for i, block in enumerate(blocks):
        empty = True
        for v in block:
            empty = False
            if not 0 <= v < n:
                raise GraphError(f"vertex {v} out of range 0..{n - 1}")
            if labels[v] != -1:
                raise GraphError(f"vertex {v} appears in two blocks")
            labels[v] = i
            count += 1
        if empty:
            raise GraphError("partition blocks must be nonempty")
    if count != n:
        missing = [v for v in range(n) if labels[v] == -1]
        raise GraphError(f"blocks do not cover the vertex set; missing {missing[:5]}")
    return labels


def weight_of_cut(g: WeightedMultigraph, blocks: Sequence[Iterable[int]]) -> int:
    """Total weight of edges of the original graph ``g`` crossing between blocks."""
    if not g.is_original:
        raise GraphError("weight_of_cut expects the original (uncontracted) graph")
    blocks = [list(b) for b in blocks]
    labels = _check_partition(g.n, blocks)
    return sum(w for u, v, w in g.edge_list() if labels[u] != labels[v])


def boundary_weight(g: WeightedMultigraph, side: Iterable[int]) -> int:
    """|∂S| on the original graph."""
    s = set(side)
    return sum(w for u, v, w in g.edge_list() if (u in s) != (v in s))


def atoms(sets: Sequence[Iterable[int]], n: int) -> list[frozenset[int]]:
    """Nonempty Venn cells of ``sets`` over the universe ``range(n)``.

    Vertices land in the same atom iff they have the same membership
    vector across all the sets.  Atoms are ordered by their minimum.
    """
    fams = [frozenset(s) for s in sets]
    cells: dict[tuple[bool, ...], list[int]] = {}
    for v in range(n):
        cells.setdefault(tuple(v in f for f in fams), []).append(v)
    return sorted((frozenset(c) for c in cells.values()), key=min)


def generated_cut(g: WeightedMultigraph, sets: Sequence[Iterable[int]]) -> KCut:
    """The multi-way cut whose blocks are the atoms of ``sets``."""
    sets = [frozenset(s) for s in sets]
    cells = atoms(sets, g.n)
    if len(cells) < 2:
        raise GraphError("the sets generate a single atom, which is not a cut")
    cut = KCut.from_blocks(cells, weight_of_cut(g, cells))
    bound = sum(boundary_weight(g, s) for s in sets)
    assert cut.weight <= bound, (cut.weight, bound)
    return cut


def crossing_edges(g: WeightedMultigraph, blocks: Sequence[Iterable[int]]) -> dict[tuple[int, int], int]:
    """The edge set ∂K of a partition, as a pair -> weight map."""
    labels = _check_partition(g.n, [list(b) for b in blocks])
    return {(u, v): w for u, v, w in g.edge_list() if labels[u] != labels[v]}


def normalize_edge_set(g: WeightedMultigraph, edges) -> dict[tuple[int, int], int]:
    """Accept a pair->weight map or an iterable of pairs (taken at full weight)."""
    if edges is None:
        return {}
    if isinstance(edges, dict):
        items = edges.items()
    else:
        items = ((tuple(p), None) for p in edges)
    out: dict[tuple[int, int], int] = {}
    for (a, b), w in items:
        a, b = (a, b) if a < b else (b, a)
        full = g.weight(a, b)
        if full == 0:
            raise GraphError(f"({a}, {b}) is not an edge")
        w = full if w is None else int(w)
        if not 0 < w <= full:
            raise GraphError(f"weight {w} on ({a}, {b}) exceeds the edge weight {full}")
        out[(a, b)] = w
    return out
