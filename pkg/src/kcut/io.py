"""Text formats: graph files, set-family files and cut-family records.

Graph file::

    c optional comment
    p kcut <n> <edge-line-count>
    <u> <v> <w>

Vertices are 0-based; repeated pairs are summed.

Family file: first line is the universe size ``N``, then one set per line
as space-separated element ids.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, TextIO

from .multigraph import GraphError, KCut, WeightedMultigraph


class ParseError(GraphError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_graph(text: str) -> WeightedMultigraph:
    header = None
    edges = []
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tok = line.split()
        if tok[0] == "p":
            if header is not None:
                raise ParseError("duplicate header", lineno)
            if len(tok) != 4 or tok[1] != "kcut":
                raise ParseError("header must read 'p kcut <n> <edge-line-count>'", lineno)
            try:
                header = (int(tok[2]), int(tok[3]))
            except ValueError:
                raise ParseError("header counts must be integers", lineno) from None
            if header[0] < 1 or header[1] < 0:
                raise ParseError("header counts out of range", lineno)
            continue
        if header is None:
            raise ParseError("edge line before 'p kcut' header", lineno)
        if len(tok) != 3:
            raise ParseError(f"expected '<u> <v> <w>', got {line!r}", lineno)
        try:
            u, v, w = (int(t) for t in tok)
        except ValueError:
            raise ParseError(f"non-integer field in {line!r}", lineno) from None
        n = header[0]
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"vertex out of range 0..{n - 1}", lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno)
        if w < 1:
            raise ParseError(f"weight must be a positive integer, got {w}", lineno)
        edges.append((u, v, w))
        lines.append(lineno)
    if header is None:
        raise ParseError("missing 'p kcut <n> <m>' header")
    if len(edges) != header[1]:
        raise ParseError(f"header announces {header[1]} edge lines, found {len(edges)}")
    return WeightedMultigraph.from_edge_list(header[0], edges)


def read_graph(path: str | Path) -> WeightedMultigraph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def format_graph(g: WeightedMultigraph, comment: str | None = None) -> str:
    if not g.is_original:
        raise GraphError("only uncontracted graphs can be written")
    out = []
    if comment:
        out.extend(f"c {c}" for c in comment.splitlines())
    el = g.edge_list()
    out.append(f"p kcut {g.n} {len(el)}")
    out.extend(f"{u} {v} {w}" for u, v, w in el)
    return "\n".join(out) + "\n"


def write_graph(g: WeightedMultigraph, path: str | Path, comment: str | None = None) -> None:
    Path(path).write_text(format_graph(g, comment), encoding="utf-8")


def parse_family(text: str) -> tuple[int, list[frozenset[int]]]:
    rows = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), start=1)]
    rows = [(i, ln) for i, ln in rows if ln]
    if not rows:
        raise ParseError("empty family file")
    lineno, first = rows[0]
    try:
        universe = int(first)
    except ValueError:
        raise ParseError("first line must be the universe size N", lineno) from None
    sets = []
    for lineno, ln in rows[1:]:
        try:
            ids = [int(t) for t in ln.split()]
        except ValueError:
            raise ParseError(f"non-integer element in {ln!r}", lineno) from None
        if any(not 0 <= x < universe for x in ids):
            raise ParseError(f"element out of range 0..{universe - 1}", lineno)
        sets.append(frozenset(ids))
    return universe, sets


def read_family(path: str | Path) -> tuple[int, list[frozenset[int]]]:
    return parse_family(Path(path).read_text(encoding="utf-8"))


def format_family(universe: int, sets: Iterable[Iterable[int]]) -> str:
    lines = [str(universe)] + [" ".join(str(x) for x in sorted(s)) for s in sets]
    return "\n".join(lines) + "\n"


# -- cut records ------------------------------------------------------------

def cut_line(cut: KCut) -> str:
    blocks = "|".join(",".join(str(v) for v in b) for b in cut.blocks)
    return f"weight {cut.weight} blocks {blocks}"


def parse_cut_line(line: str) -> KCut:
    tok = line.split()
    if len(tok) != 4 or tok[0] != "weight" or tok[2] != "blocks":
        raise ParseError(f"not a cut record: {line!r}")
    blocks = [[int(v) for v in b.split(",")] for b in tok[3].split("|")]
    return KCut.from_blocks(blocks, int(tok[1]))


def summary_line(lambda_k: int | None, count: int, repetitions: int, capped: bool) -> str:
    lam = "none" if lambda_k is None else str(lambda_k)
    return f"lambda_k {lam} count {count} repetitions {repetitions} capped {str(capped).lower()}"


def cut_record(cut: KCut) -> dict:
    return {"type": "cut", "weight": cut.weight, "blocks": [list(b) for b in cut.blocks]}


def write_records(records: Iterable[dict], fh: TextIO) -> None:
    for rec in records:
        fh.write(json.dumps(rec, sort_keys=True) + "\n")
