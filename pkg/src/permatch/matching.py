"""Materialized matchings and the verifiers shared by every construction."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Protocol

from .graphs import Graph, GraphError

DEFAULT_CAP = 10**7


class CapExceeded(RuntimeError):
    pass


class SymmetryViolation(AssertionError):
    pass


def enumeration_cap() -> int:
    raw = os.environ.get("PERMATCH_CAP")
    return int(raw) if raw else DEFAULT_CAP


def check_cap(g: Graph, cap: int | None = None, what: str = "vertices") -> None:
    cap = enumeration_cap() if cap is None else cap
    size = g.vertex_count if what == "vertices" else g.edge_count
    if size > cap:
        raise CapExceeded(f"{g.describe()} has {size} {what}, above the cap {cap} (set PERMATCH_CAP)")


class QueryMatching(Protocol):
    graph: Graph

    def match(self, v: int) -> Optional[int]: ...


@dataclass
class MaterializedMatching:
    edges: set[tuple[int, int]] = field(default_factory=set)
    exposed: set[int] = field(default_factory=set)

    @property
    def size(self) -> int:
        return len(self.edges)

    def covered(self) -> set[int]:
        return {x for e in self.edges for x in e}

    def mate(self) -> dict[int, int]:
        out = {}
        for u, w in self.edges:
            out[u] = w
            out[w] = u
        return out

    @classmethod
    def from_edges(cls, g: Graph, edges: Iterable[tuple[int, int]]) -> "MaterializedMatching":
        es = {(min(u, w), max(u, w)) for u, w in edges}
        covered = {x for e in es for x in e}
        return cls(es, {v for v in g.vertices() if v not in covered})


def _materialize_range(qm: QueryMatching, lo: int, hi: int) -> tuple[list[tuple[int, int]], list[int]]:
    edges, exposed = [], []
    for v in range(lo, hi):
        w = qm.match(v)
        if w is None:
            exposed.append(v)
            continue
        if qm.match(w) != v:
            raise SymmetryViolation(f"match({v}) = {w} but match({w}) = {qm.match(w)}")
        if v < w:
            edges.append((v, w))
    return edges, exposed


def materialize(g: Graph, qm: QueryMatching, cap: int | None = None, threads: int = 1) -> MaterializedMatching:
    """Query every vertex once; each matched pair is recorded from its smaller end."""
    check_cap(g, cap)
    n = g.vertex_count
    if threads <= 1 or n < 10_000:
        edges, exposed = _materialize_range(qm, 0, n)
        return MaterializedMatching(set(edges), set(exposed))
    step = -(-n // threads)
    bounds = [(lo, min(n, lo + step)) for lo in range(0, n, step)]
    out = MaterializedMatching()
    with ProcessPoolExecutor(threads) as pool:
        for edges, exposed in pool.map(_materialize_range, [qm] * len(bounds), *zip(*bounds)):
            out.edges.update(edges)
            out.exposed.update(exposed)
    return out


def verify_matching(g: Graph, m: MaterializedMatching) -> bool:
    """No vertex lies on two edges.  Raises if an edge is not in ``g``."""
    seen: set[int] = set()
    ok = True
    for u, w in m.edges:
        if not g.has_edge(u, w):
            raise GraphError(f"{g.format(u)} {g.format(w)} is not an edge of {g.describe()}")
        if u in seen or w in seen:
            ok = False
        seen.update((u, w))
    return ok


def uncovered_edges(g: Graph, covered: set[int]) -> Iterable[tuple[int, int]]:
    for u, w, _ in g.edges():
        if u not in covered and w not in covered:
            yield u, w


def verify_maximal(g: Graph, m: MaterializedMatching) -> bool:
    """A matching whose exposed vertices form an independent set."""
    if not verify_matching(g, m):
        return False
    covered = m.covered()
    return next(iter(uncovered_edges(g, covered)), None) is None


def verify_covering_pair(g: Graph, a: MaterializedMatching, b: MaterializedMatching) -> bool:
    return not (a.exposed & b.exposed)


def greedy_extend(g: Graph, edges: set[tuple[int, int]], order: Iterable[int] | None = None) -> set[tuple[int, int]]:
    """Extend a matching to a maximal one: scan vertices ascending, take the smallest-label free edge."""
    covered = {x for e in edges for x in e}
    out = set(edges)
    for v in (g.vertices() if order is None else order):
        if v in covered:
            continue
        for w, _ in g.neighbors(v):
            if w not in covered:
                out.add((min(v, w), max(v, w)))
                covered.update((v, w))
                break
    return out


@dataclass(frozen=True)
class TableMatching:
    """A QueryMatching backed by an explicit mate table (desk-scale graphs)."""

    graph: Graph
    mates: dict

    def match(self, v: int) -> Optional[int]:
        return self.mates.get(v)

    @classmethod
    def of(cls, g: Graph, m: MaterializedMatching) -> "TableMatching":
        return cls(g, m.mate())


def matching_report(g: Graph, m: MaterializedMatching) -> dict:
    is_matching = verify_matching(g, m)
    return {
        "is_matching": is_matching,
        "is_maximal": is_matching and verify_maximal(g, m),
        "size": m.size,
        "exposed_count": g.vertex_count - 2 * m.size if is_matching else len(m.exposed),
    }


MatchFn = Callable[[int], Optional[int]]
