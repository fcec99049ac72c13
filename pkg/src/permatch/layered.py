"""Level-by-level maximal matchings for graded bipartite graphs.

Levels ``V_0 .. V_l`` come from the graph (inversion count for the
permutahedron, popcount for the hypercube).  Below the middle, each chosen
level ``k`` gets a matching that covers ``V_{k-1}`` and ``V_k`` using exactly
``|V_k|`` edges (mirror image above the middle).  Taking the chosen levels in
one residue class mod 3 keeps those pieces vertex disjoint; a greedy pass then
makes the union maximal.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from .graphs import CubeGraph, Graph
from .matching import MaterializedMatching, greedy_extend, verify_maximal


class HallViolation(RuntimeError):
    pass


def hopcroft_karp(left: Sequence[Hashable], adj: Callable[[Hashable], Iterable[Hashable]]) -> dict:
    """Maximum matching of a bipartite graph given by its left side and a neighbor oracle.

    Returns ``{left vertex: right vertex}``.  Neighbor order is respected, so
    the result is deterministic.
    """
    nbrs = {u: list(adj(u)) for u in left}
    match_l: dict = {}
    match_r: dict = {}
    inf = float("inf")

    def bfs() -> bool:
        dist.clear()
        queue = deque()
        for u in left:
            if u not in match_l:
                dist[u] = 0
                queue.append(u)
        found = False
        while queue:
            u = queue.popleft()
            for w in nbrs[u]:
                u2 = match_r.get(w)
                if u2 is None:
                    found = True
                elif u2 not in dist:
                    dist[u2] = dist[u] + 1
                    queue.append(u2)
        return found

    def dfs(root) -> bool:
        # iterative version of the layered augmenting-path search
        stack = [(root, iter(nbrs[root]))]
        path = []
        while stack:
            u, it = stack[-1]
            advanced = False
            for w in it:
                u2 = match_r.get(w)
                if u2 is None:
                    path.append((u, w))
                    for a, b in path:
                        match_l[a] = b
                        match_r[b] = a
                    return True
                if dist.get(u2, inf) == dist[u] + 1:
                    path.append((u, w))
                    stack.append((u2, iter(nbrs[u2])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                dist[u] = inf
                if path:
                    path.pop()
        return False

    dist: dict = {}
    while bfs():
        for u in left:
            if u not in match_l:
                dfs(u)
    return match_l


def max_bipartite_matching(left: Sequence[Hashable], right: Iterable[Hashable], adj) -> dict:
    """Maximum matching restricted to ``right``; ``adj(u)`` lists candidate partners of ``u``."""
    right = set(right)
    return hopcroft_karp(list(left), lambda u: [w for w in adj(u) if w in right])


# ---------------------------------------------------------------------------
# levels and Hall checks


def _require_levels(g: Graph) -> None:
    if not g.has_levels():
        g.level_sizes()  # raises NoLevelStructure


def top_level(g: Graph) -> int:
    return len(g.level_sizes()) - 1


@dataclass
class LevelPartition:
    levels: list[list[int]]

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    @classmethod
    def of(cls, g: Graph) -> "LevelPartition":
        _require_levels(g)
        return cls([g.level_vertices(k) for k in range(top_level(g) + 1)])


def _level_neighbors(g: Graph, target: int) -> Callable[[int], list[int]]:
    return lambda v: [w for w, _ in g.neighbors(v) if g.level(w) == target]


def hall_check(g: Graph, k: int, direction: str = "up") -> bool:
    """Does a matching saturate ``V_k`` into the next level up (or down)?"""
    _require_levels(g)
    top = top_level(g)
    step = _step(direction)
    if not 0 <= k + step <= top or not 0 <= k <= top:
        raise ValueError(f"level {k} has no {direction} neighbor level (top level {top})")
    left = g.level_vertices(k)
    m = hopcroft_karp(left, _level_neighbors(g, k + step))
    return len(m) == len(left)


def _step(direction: str) -> int:
    if direction not in ("up", "down"):
        raise ValueError(f"direction must be 'up' or 'down', not {direction!r}")
    return 1 if direction == "up" else -1


def build_layer_pair(g: Graph, k: int, direction: str = "up") -> MaterializedMatching:
    """Matching with ``|V_k|`` edges covering ``V_k`` and its outer neighbor level.

    ``up`` (below the middle): first saturate ``V_{k-1}`` into ``V_k``, then
    saturate the still-exposed part of ``V_k`` into ``V_{k+1}``.  ``down`` is the
    mirror image covering ``V_k`` and ``V_{k+1}``.
    """
    _require_levels(g)
    step = _step(direction)
    outer, inner, beyond = k - step, k, k + step
    top = top_level(g)
    if not (0 <= outer <= top and 0 <= beyond <= top):
        raise ValueError(f"level pair around {k} ({direction}) leaves the range 0..{top}")
    outer_vs = g.level_vertices(outer)
    first = hopcroft_karp(outer_vs, _level_neighbors(g, inner))
    if len(first) != len(outer_vs):
        raise HallViolation(f"level {outer} cannot be saturated into level {inner}")
    used = set(first.values())
    rest = [v for v in g.level_vertices(inner) if v not in used]
    second = hopcroft_karp(rest, _level_neighbors(g, beyond))
    if len(second) != len(rest):
        raise HallViolation(f"exposed part of level {inner} cannot be saturated into level {beyond}")
    edges = {(min(a, b), max(a, b)) for a, b in list(first.items()) + list(second.items())}
    covered = {x for e in edges for x in e}
    return MaterializedMatching(edges, {v for v in g.vertices() if v not in covered})


def choose_residue(level_sizes: Sequence[int]) -> int:
    """Residue p in {1, 2, 3} minimizing the total size of levels k in [1, l] with k = p mod 3."""
    top = len(level_sizes) - 1
    totals = {p: sum(level_sizes[k] for k in range(1, top + 1) if k % 3 == p % 3) for p in (1, 2, 3)}
    return min((1, 2, 3), key=lambda p: (totals[p], p))


def chosen_levels(top: int, p: int) -> tuple[list[int], list[int]]:
    """Levels ``k = p (mod 3)`` strictly inside each half: (below middle, above middle)."""
    lo_mid, hi_mid = top // 2, (top + 1) // 2
    low = [k for k in range(1, lo_mid) if k % 3 == p % 3]
    high = [k for k in range(hi_mid + 1, top) if k % 3 == p % 3]
    return low, high


def layered_bound(level_sizes: Sequence[int]) -> tuple[int, int]:
    """(numerator, denominator) of |V|/3 + 6 max(|V_floor(l/2)|, |V_ceil(l/2)|)."""
    top = len(level_sizes) - 1
    mid = max(level_sizes[top // 2], level_sizes[(top + 1) // 2])
    return sum(level_sizes) + 18 * mid, 3


@dataclass
class LayeredResult:
    matching: MaterializedMatching
    p: int
    level_sizes: list[int]
    core_size: int  # edges before the greedy extension
    bound: tuple[int, int]
    maximal: bool = field(default=False)

    @property
    def size(self) -> int:
        return self.matching.size

    def report(self) -> dict:
        num, den = self.bound
        return {
            "p": self.p,
            "level_sizes": self.level_sizes,
            "core_size": self.core_size,
            "size": self.size,
            "bound": f"{num}/{den}",
            "bound_floor": num // den,
            "maximal": self.maximal,
        }


def layered_matching(g: Graph, verify: bool = True) -> LayeredResult:
    _require_levels(g)
    sizes = g.level_sizes()
    top = len(sizes) - 1
    p = choose_residue(sizes)
    low, high = chosen_levels(top, p)
    edges: set[tuple[int, int]] = set()
    for k in low:
        edges |= build_layer_pair(g, k, "up").edges
    for k in high:
        edges |= build_layer_pair(g, k, "down").edges
    core = len(edges)
    full = greedy_extend(g, edges)
    m = MaterializedMatching.from_edges(g, full)
    num, den = layered_bound(sizes)
    if m.size * den > num:
        raise AssertionError(f"layered matching of size {m.size} exceeds its bound {num}/{den}")
    return LayeredResult(m, p, sizes, core, (num, den), verify_maximal(g, m) if verify else False)


# ---------------------------------------------------------------------------
# symmetric chains in the hypercube (bracket rule)


def bracket_structure(word: str) -> tuple[list[int], list[int], int]:
    """(unmatched 1 positions, unmatched 0 positions, matched pairs) of a bit word.

    0 is an opening bracket, 1 a closing one; positions are 0-based.  All
    unmatched 1s lie left of all unmatched 0s.
    """
    open_stack: list[int] = []
    ones: list[int] = []
    pairs = 0
    for i, c in enumerate(word):
        if c == "0":
            open_stack.append(i)
        elif c == "1":
            if open_stack:
                open_stack.pop()
                pairs += 1
            else:
                ones.append(i)
        else:
            raise ValueError(f"not a bit word: {word!r}")
    return ones, open_stack, pairs


def _flip(word: str, i: int) -> str:
    return word[:i] + ("1" if word[i] == "0" else "0") + word[i + 1:]


def scd_chain(word: str) -> list[str]:
    """The symmetric chain through ``word``, bottom to top."""
    ones, zeros, _ = bracket_structure(word)
    free = ones + zeros  # unmatched positions, left to right
    base = list(word)
    for i in free:
        base[i] = "0"
    # the chain sets the unmatched positions to 1...10...0 patterns, filling from the left
    chain = []
    for c in range(len(free) + 1):
        w = list(base)
        for i in free[:c]:
            w[i] = "1"
        chain.append("".join(w))
    return chain


def scd_up(word: str) -> str | None:
    _, zeros, _ = bracket_structure(word)
    return _flip(word, zeros[0]) if zeros else None


def scd_down(word: str) -> str | None:
    ones, _, _ = bracket_structure(word)
    return _flip(word, ones[-1]) if ones else None


def chain_span(word: str) -> tuple[int, int]:
    """(lowest level, highest level) of the chain through ``word``."""
    ones, zeros, pairs = bracket_structure(word)
    return pairs, pairs + len(ones) + len(zeros)


def scd_chains(n: int) -> Iterable[list[str]]:
    """Every chain of Q_n once, generated from its bottom element."""
    for v in range(1 << n):
        w = format(v, f"0{n}b") if n else ""
        ones, _, _ = bracket_structure(w)
        if not ones:
            yield scd_chain(w)


def chain_edge_lows(t: int, top_t: int, low: Sequence[int], high: Sequence[int]) -> set[int]:
    """Within a chain spanning levels t..top_t, the lower levels a of matched chain edges (a, a+1)."""
    out = set()
    for k in low:
        if t <= k - 1 <= top_t and k <= top_t:
            out.add(k - 1)
        elif t == k and k + 1 <= top_t:
            out.add(k)
    for k in high:
        if t <= k and k + 1 <= top_t:
            out.add(k)
        elif top_t == k and k - 1 >= t:
            out.add(k - 1)
    return out


def cube_layered_via_chains(g: CubeGraph) -> LayeredResult:
    """The same level-pair pattern realized along symmetric chains, no bipartite matching needed."""
    from .construct import CubeMatching

    qm = CubeMatching(g.n)
    edges = set()
    for v in g.vertices():
        w = qm.match(v)
        if w is not None and v < w:
            edges.add((v, w))
    m = MaterializedMatching.from_edges(g, edges)
    sizes = g.level_sizes()
    return LayeredResult(m, qm.p, sizes, qm.core_size(), layered_bound(sizes), verify_maximal(g, m))
