"""Exact solvers for small graphs: minimum maximal matching and maximum independent set.

Both are depth-first branch and bound over Python-int bitsets.  Lower bounds
for the matching problem come from the fact that the covered vertices of a
maximal matching form a vertex cover, packed from disjoint triangles,
5-cycles and edges; upper bounds for the independent set problem come from
the same packing (cliques and 5-cycles).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Any, Sequence

from .graphs import Graph

MMM_EDGE_GUARD = 500
MIS_VERTEX_GUARD = 10_000


class TooLarge(RuntimeError):
    pass


@dataclass
class ExactResult:
    problem: str
    optimum: int
    witness: list
    nodes_explored: int
    proven: bool
    time_limit_hit: bool
    lower_bound: int
    upper_bound: int
    elapsed: float = 0.0
    notes: list[str] = field(default_factory=list)

    def as_json(self, g: Graph | None = None, include_witness: bool = True) -> dict[str, Any]:
        out: dict[str, Any] = {
            "problem": self.problem,
            "optimum": self.optimum,
            "proven": self.proven,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "nodes_explored": self.nodes_explored,
            "time_limit_hit": self.time_limit_hit,
        }
        if include_witness:
            fmt = g.format if g is not None else str
            if self.problem == "mmm":
                out["witness"] = [[fmt(u), fmt(w)] for u, w in self.witness]
            else:
                out["witness"] = [fmt(v) for v in self.witness]
        if self.notes:
            out["notes"] = self.notes
        return out


def _adjacency(g: Graph | Sequence[Sequence[int]]) -> list[list[int]]:
    if isinstance(g, Graph):
        return g.adjacency()
    return [list(a) for a in g]


def _bitsets(adj: Sequence[Sequence[int]]) -> list[int]:
    out = []
    for a in adj:
        b = 0
        for w in a:
            b |= 1 << w
        out.append(b)
    return out


def _low(x: int) -> int:
    return (x & -x).bit_length() - 1


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _popcount(x: int) -> int:
    return bin(x).count("1")


def short_odd_cycles(nb: Sequence[int], limit: int = 20_000) -> tuple[list[int], list[int]]:
    """Vertex masks of triangles and of 5-cycles (chordless or not), each once."""
    n = len(nb)
    tri, pent = set(), set()
    for a in range(n):
        higher = nb[a] >> (a + 1) << (a + 1)
        for b in _bits(higher):
            for c in _bits(nb[b] & higher & ~((1 << (b + 1)) - 1)):
                if nb[a] >> c & 1:
                    tri.add((1 << a) | (1 << b) | (1 << c))
    for a in range(n):
        # a is the smallest vertex of the 5-cycle a-b-c-d-e-a
        above = ~((1 << (a + 1)) - 1)
        for b in _bits(nb[a] & above):
            for c in _bits(nb[b] & above & ~(1 << b)):
                for d in _bits(nb[c] & above & ~((1 << b) | (1 << c))):
                    for e in _bits(nb[d] & nb[a] & above & ~((1 << b) | (1 << c) | (1 << d))):
                        pent.add((1 << a) | (1 << b) | (1 << c) | (1 << d) | (1 << e))
                        if len(pent) >= limit:
                            return sorted(tri), sorted(pent)
    return sorted(tri), sorted(pent)


# ---------------------------------------------------------------------------
# maximum independent set


class _Timeout(Exception):
    pass


class _Optimal(Exception):
    pass


def max_independent_set(
    g: Graph | Sequence[Sequence[int]],
    time_limit: float | None = None,
    guard: int | None = MIS_VERTEX_GUARD,
) -> ExactResult:
    if guard is not None and isinstance(g, Graph) and g.vertex_count > guard:
        raise TooLarge(f"{g.vertex_count} vertices exceed the independent-set guard {guard}")
    adj = _adjacency(g)
    n = len(adj)
    if guard is not None and n > guard:
        raise TooLarge(f"{n} vertices exceed the independent-set guard {guard}")
    nb = _bitsets(adj)
    _, pents = short_odd_cycles(nb)
    start = time.monotonic()
    deadline = None if time_limit is None else start + time_limit

    # greedy incumbent: repeatedly take a minimum-degree vertex
    rest, inc = (1 << n) - 1, 0
    while rest:
        v = min(_bits(rest), key=lambda x: (_popcount(nb[x] & rest), x))
        inc |= 1 << v
        rest &= ~(nb[v] | (1 << v))
    best = [_popcount(inc), inc]
    nodes = 0

    def cover_bound(r: int) -> int:
        """Number of parts in a packing of r by 5-cycles (2 each) and cliques (1 each)."""
        total = 0
        for p in pents:
            if p & r == p:
                r ^= p
                total += 2
        while r:
            v = _low(r)
            r ^= 1 << v
            cand = nb[v] & r
            while cand:
                w = _low(cand)
                r ^= 1 << w
                cand &= nb[w] & r
            total += 1
        return total

    def rec(r: int, chosen: int, size: int) -> None:
        nonlocal nodes
        nodes += 1
        if deadline is not None and nodes & 1023 == 0 and time.monotonic() > deadline:
            raise _Timeout
        # degree 0 / 1 vertices are always safe to take
        changed = True
        while changed:
            changed = False
            for v in _bits(r):
                if not r >> v & 1:
                    continue
                d = nb[v] & r
                if d & (d - 1) == 0:
                    chosen |= 1 << v
                    size += 1
                    r &= ~((1 << v) | d)
                    changed = True
        if not r:
            if size > best[0]:
                best[0], best[1] = size, chosen
            return
        if size + cover_bound(r) <= best[0]:
            return
        v = max(_bits(r), key=lambda x: (_popcount(nb[x] & r), -x))
        rec(r & ~((1 << v) | nb[v]), chosen | (1 << v), size + 1)
        rec(r & ~(1 << v), chosen, size)

    root_upper = cover_bound((1 << n) - 1)
    hit = False
    try:
        rec((1 << n) - 1, 0, 0)
    except _Timeout:
        hit = True
    witness = sorted(_bits(best[1]))
    if any(nb[v] & best[1] for v in witness):
        raise AssertionError("independent set witness is not independent")
    upper = best[0] if not hit else root_upper
    return ExactResult("mis", best[0], witness, nodes, not hit, hit, best[0], upper, time.monotonic() - start)


def exact_mis(g: Graph | Sequence[Sequence[int]], time_limit: float | None = None,
              force: bool = False) -> ExactResult:
    """Maximum independent set by branch and bound."""
    return max_independent_set(g, time_limit, guard=None if force else MIS_VERTEX_GUARD)


# ---------------------------------------------------------------------------
# minimum maximal matching


def _mmm_local_search(adj: Sequence[Sequence[int]], iterations: int, seed: int, deadline: float | None):
    """Iterated greedy: drop a few matching edges near a random vertex, repair, keep if not worse."""
    rng = random.Random(seed)
    n = len(adj)

    def repair(mate: list[int]) -> None:
        while True:
            best, cands = -1, []
            for u in range(n):
                if mate[u] >= 0:
                    continue
                fu = [x for x in adj[u] if mate[x] < 0]
                for w in fu:
                    if w < u:
                        continue
                    s = len(fu) + sum(1 for x in adj[w] if mate[x] < 0) - 1
                    if s > best:
                        best, cands = s, [(u, w)]
                    elif s == best:
                        cands.append((u, w))
            if not cands:
                return
            u, w = rng.choice(cands)
            mate[u], mate[w] = w, u

    mate = [-1] * n
    repair(mate)
    size = sum(1 for v in range(n) if mate[v] > v)
    best, best_mate = size, list(mate)
    for it in range(iterations):
        if deadline is not None and it & 63 == 0 and time.monotonic() > deadline:
            break
        new = list(mate)
        v = rng.randrange(n)
        ball = [v, *adj[v], *(y for x in adj[v] for y in adj[x])]
        rng.shuffle(ball)
        removed = 0
        for x in ball:
            if new[x] >= 0 and removed < 3:
                y = new[x]
                new[x] = new[y] = -1
                removed += 1
        repair(new)
        s = sum(1 for u in range(n) if new[u] > u)
        if s <= size:
            mate, size = new, s
            if s < best:
                best, best_mate = s, list(new)
    return [(u, best_mate[u]) for u in range(n) if best_mate[u] > u]


def mmm_root_bound(adj: Sequence[Sequence[int]]) -> int:
    """Vertex-cover packing bound at the root (no decisions taken)."""
    nb = _bitsets(adj)
    tris, pents = short_odd_cycles(nb)
    return _vc_bound(nb, tris, pents, (1 << len(adj)) - 1, 0)


def _vc_bound(nb, tris, pents, free: int, must: int) -> int:
    """Lower bound on further matching edges: (must + vertex cover of G[free - must]) / 2, rounded up,
    and the edge-counting bound |E(free)| / (2 D - 1)."""
    vc = _popcount(must)
    r = free & ~must
    for t in tris:
        if t & r == t:
            r ^= t
            vc += 2
    for p in pents:
        if p & r == p:
            r ^= p
            vc += 3
    while r:
        v = _low(r)
        r ^= 1 << v
        m = nb[v] & r
        if m:
            r ^= m & -m
            vc += 1
    bound = (vc + 1) // 2
    # counting: each new edge dominates at most deg(u) + deg(w) - 1 of the undominated edges
    degs = [_popcount(nb[v] & free) for v in _bits(free)]
    m_edges = sum(degs) // 2
    if m_edges:
        top = sorted(degs)[-2:]
        per_edge = max(1, sum(top) - 1)
        bound = max(bound, -(-m_edges // per_edge))
    return bound


def exact_mmm(
    g: Graph | Sequence[Sequence[int]],
    time_limit: float | None = None,
    force: bool = False,
    heuristic_iterations: int | None = None,
    seed: int = 0,
    lower_hint: int = 0,
) -> ExactResult:
    """Minimum maximal matching by branch and bound.

    Branching: a must-cover vertex with the fewest options, otherwise a free
    vertex of maximum free degree; "matched to w" branches (neighbors in
    label order) come before "exposed".  ``lower_hint`` is a proven lower bound
    supplied by the caller (e.g. from the independence number) and only
    strengthens the reported ``lower_bound`` and the stopping test.
    """
    if not force and isinstance(g, Graph) and g.edge_count > MMM_EDGE_GUARD:
        raise TooLarge(f"{g.edge_count} edges exceed the matching guard {MMM_EDGE_GUARD} (use force / --hard)")
    adj = _adjacency(g)
    n = len(adj)
    m_total = sum(len(a) for a in adj) // 2
    if not force and m_total > MMM_EDGE_GUARD:
        raise TooLarge(f"{m_total} edges exceed the matching guard {MMM_EDGE_GUARD} (use force / --hard)")
    start = time.monotonic()
    deadline = None if time_limit is None else start + time_limit
    nb = _bitsets(adj)
    tris, pents = short_odd_cycles(nb)
    root = max(_vc_bound(nb, tris, pents, (1 << n) - 1, 0), lower_hint)

    iterations = heuristic_iterations if heuristic_iterations is not None else 250 * n
    heuristic_deadline = None if time_limit is None else start + time_limit / 4
    inc_edges = _mmm_local_search(adj, iterations, seed, heuristic_deadline) if n else []
    best = [len(inc_edges), inc_edges]
    nodes = 0

    def rec(free: int, must: int, count: int, chosen: list) -> None:
        nonlocal nodes
        nodes += 1
        if deadline is not None and nodes & 1023 == 0 and time.monotonic() > deadline:
            raise _Timeout
        while True:
            changed = False
            for v in _bits(free):
                if not free >> v & 1:
                    continue
                if not nb[v] & free:
                    # no free neighbor left: v stays exposed, which is fine unless it must be covered
                    if must >> v & 1:
                        return
                    free ^= 1 << v
                    changed = True
            for v in _bits(must):
                if not must >> v & 1:
                    continue
                opts = nb[v] & free
                if opts & (opts - 1) == 0:
                    if not opts:
                        return
                    w = _low(opts)
                    pair = (1 << v) | (1 << w)
                    free &= ~pair
                    must &= ~pair
                    count += 1
                    chosen = chosen + [(v, w)]
                    changed = True
            if not changed:
                break
        if count + _vc_bound(nb, tris, pents, free, must) >= best[0]:
            return
        if not free:
            best[0], best[1] = count, chosen
            if count <= root:
                raise _Optimal
            return
        if must:
            v = min(_bits(must), key=lambda x: (_popcount(nb[x] & free), x))
            for w in _bits(nb[v] & free):
                pair = (1 << v) | (1 << w)
                rec(free & ~pair, must & ~pair, count + 1, chosen + [(v, w)])
                if best[0] <= count + 1:
                    return
            return
        v = max(_bits(free), key=lambda x: (_popcount(nb[x] & free), -x))
        opts = nb[v] & free
        for w in _bits(opts):
            pair = (1 << v) | (1 << w)
            rec(free & ~pair, must & ~pair, count + 1, chosen + [(v, w)])
        rec(free & ~(1 << v), must | opts, count, chosen)

    hit = False
    if best[0] > root:
        try:
            rec((1 << n) - 1, 0, 0, [])
        except _Timeout:
            hit = True
        except _Optimal:
            pass
    witness = sorted((min(u, w), max(u, w)) for u, w in best[1])
    _check_mmm_witness(nb, witness)
    lower = best[0] if not hit else root
    return ExactResult("mmm", best[0], witness, nodes, not hit, hit, lower, best[0], time.monotonic() - start)


def _check_mmm_witness(nb: Sequence[int], witness) -> None:
    covered = 0
    for u, w in witness:
        if not nb[u] >> w & 1 or (covered >> u) & 1 or (covered >> w) & 1:
            raise AssertionError("matching witness is not a matching of the graph")
        covered |= (1 << u) | (1 << w)
    for v in range(len(nb)):
        if not covered >> v & 1 and nb[v] & ~covered:
            raise AssertionError("matching witness is not maximal")


def brute_force_mmm(g: Graph | Sequence[Sequence[int]], max_edges: int = 20) -> int:
    """Smallest maximal matching by trying edge subsets in order of size."""
    adj = _adjacency(g)
    edges = sorted({(min(u, w), max(u, w)) for u in range(len(adj)) for w in adj[u]})
    if len(edges) > max_edges:
        raise TooLarge(f"brute force limited to {max_edges} edges, got {len(edges)}")
    for k in range(len(edges) + 1):
        for subset in combinations(edges, k):
            covered = [x for e in subset for x in e]
            if len(set(covered)) != 2 * k:
                continue
            cov = set(covered)
            if all(u in cov or w in cov for u, w in edges):
                return k
    raise AssertionError("unreachable: the full greedy matching is always maximal")


# ---------------------------------------------------------------------------
# LP-format model export


def emit_ip(g: Graph, problem: str, path: str | Path | None = None) -> str:
    """Write the 0/1 program in LP format; returns the text.

    ``mmm``: binary x_e per edge, sum over edges at v <= 1 for every
    non-isolated vertex, and for every edge e the sum over e and its adjacent
    edges >= 1; minimize the number of chosen edges.
    ``mis``: binary y_v, y_u + y_w <= 1 per edge; maximize.
    """
    if problem not in ("mmm", "mis"):
        raise ValueError(f"problem must be 'mmm' or 'mis', not {problem!r}")
    adj = _adjacency(g)
    edges = sorted({(min(u, w), max(u, w)) for u in range(len(adj)) for w in adj[u]})
    lines = [f"\\ {problem} for {g.describe()}"]
    if problem == "mmm":
        incident: dict[int, list[int]] = {v: [] for v in range(len(adj))}
        for k, (u, w) in enumerate(edges):
            incident[u].append(k)
            incident[w].append(k)
        for k, (u, w) in enumerate(edges):
            lines.append(f"\\ x{k} = {g.format(u)} {g.format(w)}")
        lines.append("Minimize")
        lines.append(" obj: " + _sum(f"x{k}" for k in range(len(edges))))
        lines.append("Subject To")
        for v in range(len(adj)):
            if incident[v]:
                lines.append(f" match_{v}: " + _sum(f"x{k}" for k in incident[v]) + " <= 1")
        for k, (u, w) in enumerate(edges):
            near = sorted(set(incident[u]) | set(incident[w]))
            lines.append(f" dom_{k}: " + _sum(f"x{j}" for j in near) + " >= 1")
        lines.append("Binary")
        lines.extend(f" x{k}" for k in range(len(edges)))
    else:
        for v in range(len(adj)):
            lines.append(f"\\ y{v} = {g.format(v)}")
        lines.append("Maximize")
        lines.append(" obj: " + _sum(f"y{v}" for v in range(len(adj))))
        lines.append("Subject To")
        for k, (u, w) in enumerate(edges):
            lines.append(f" edge_{k}: y{u} + y{w} <= 1")
        lines.append("Binary")
        lines.extend(f" y{v}" for v in range(len(adj)))
    lines.append("End")
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def _sum(terms) -> str:
    terms = list(terms)
    return " + ".join(terms) if terms else "0"
