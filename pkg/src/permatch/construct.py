"""Explicit maximal matchings of size |V|/3.

Permutahedron: split each permutation into a 4-letter head and a suffix
``s``; the head, relabelled into S_4, is matched by one of two fixed maximal
matchings of the 4-permutahedron (``M_PLUS`` / ``M_MINUS``), chosen by the
sign ``epsilon(s)``.  ``bullet`` uses ``M^{epsilon(s)}`` and ``circ`` uses
``M^{-epsilon(s)}``; their exposed sets are disjoint.

Products of permutahedra: only the largest factor moves; the variant used
there flips with the bipartition color of the remaining factors.  All-2
products are hypercubes and use :class:`CubeMatching`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Optional, Sequence

import numpy as np

from . import permcore
from .graphs import CubeGraph, Graph, GraphError, PermGraph, ProductGraph
from .layered import bracket_structure, chain_edge_lows, chain_span, choose_residue, chosen_levels
from .permcore import Perm

VARIANTS = ("bullet", "circ")


def _pairs(text: str) -> list[tuple[Perm, Perm]]:
    out = []
    for item in text.split():
        a, b = item.split("-")
        out.append((tuple(map(int, a)), tuple(map(int, b))))
    return out


M_PLUS = _pairs("2134-2314 3241-2341 3412-3142 2413-4213 4132-1432 1243-1423 3124-1324 4321-4231")
E_PLUS = [tuple(map(int, w)) for w in "4123 3214 4312 3421 1234 2143 1342 2431".split()]
M_MINUS = _pairs("1324-1234 2143-2413 4231-2431 3214-2314 4123-1423 3142-1342 4312-4132 3241-3421")
E_MINUS = [tuple(map(int, w)) for w in "1432 2341 3412 4321 1243 2134 3124 4213".split()]

# Sigma_2 and Sigma_3 have no 4-letter head; both variants are fixed tables there
SMALL_TABLES = {
    2: {"bullet": _pairs("12-21"), "circ": _pairs("12-21")},
    3: {"bullet": _pairs("123-213 312-321"), "circ": _pairs("213-231 132-312")},
}


@dataclass(frozen=True)
class BaseTables:
    m_plus: tuple[tuple[Perm, Perm], ...] = tuple(M_PLUS)
    m_minus: tuple[tuple[Perm, Perm], ...] = tuple(M_MINUS)
    e_plus: frozenset = frozenset(E_PLUS)
    e_minus: frozenset = frozenset(E_MINUS)

    def table(self, sign: int) -> tuple[tuple[Perm, Perm], ...]:
        return self.m_plus if sign > 0 else self.m_minus

    def exposed(self, sign: int) -> frozenset:
        return self.e_plus if sign > 0 else self.e_minus


BASE = BaseTables()


def _mate_dict(pairs) -> dict[Perm, tuple[Perm, int]]:
    out = {}
    for a, b in pairs:
        i = permcore.transposition_between(a, b)
        if i is None:
            raise AssertionError(f"table pair {a}-{b} is not an edge")
        out[a] = (b, i)
        out[b] = (a, i)
    return out


_MATES = {1: _mate_dict(M_PLUS), -1: _mate_dict(M_MINUS)}
_SMALL_MATES = {n: {v: _mate_dict(t) for v, t in tables.items()} for n, tables in SMALL_TABLES.items()}


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, not {variant!r}")


def table_sign(p: Sequence[int], variant: str) -> int:
    """Which base table (+1 / -1) governs the block of ``p``."""
    eps = permcore.epsilon_of(p)
    return eps if variant == "bullet" else -eps


def perm_matched_neighbor(n: int, v: Sequence[int], variant: str = "bullet") -> Optional[tuple[Perm, int]]:
    """Partner of ``v`` and the transposition index, or ``None`` if ``v`` is exposed.

    O(n): one parity pass, one table lookup.
    """
    _check_variant(variant)
    if len(v) != n:
        raise permcore.PermutationError(f"expected a permutation of length {n}")
    if n < 2:
        raise ValueError("the construction needs n >= 2")
    if n <= 3:
        v = permcore.make_perm(v)
        hit = _SMALL_MATES[n][variant].get(v)
        return hit
    head = v[:4]
    comp = sorted(head)
    pi = tuple(comp.index(x) + 1 for x in head)
    hit = _MATES[table_sign(v, variant)].get(pi)
    if hit is None:
        return None
    i = hit[1]
    w = list(v)
    w[i - 1], w[i] = w[i], w[i - 1]
    return tuple(w), i


# ---------------------------------------------------------------------------
# batch queries (compiled)

_S4_INDEX = {p: k for k, p in enumerate(permutations(range(1, 5)))}


def _tau_table(sign: int) -> np.ndarray:
    out = np.zeros(24, dtype=np.int8)
    for pi, (_, i) in _MATES[sign].items():
        out[_S4_INDEX[pi]] = i
    return out


_TAU_PLUS = _tau_table(1)
_TAU_MINUS = _tau_table(-1)
_kernel = None


def _get_kernel():
    global _kernel
    if _kernel is None:
        import numba

        @numba.njit(cache=True, nogil=True)
        def kernel(words, tau_plus, tau_minus, flip):
            q_count, n = words.shape
            out = np.zeros(q_count, dtype=np.int8)
            stamp = np.zeros(n + 1, dtype=np.int64)
            for q in range(q_count):
                # parity of the whole permutation from its cycle count
                mark = q + 1
                cycles = 0
                for i in range(1, n + 1):
                    if stamp[i] != mark:
                        cycles += 1
                        j = i
                        while stamp[j] != mark:
                            stamp[j] = mark
                            j = words[q, j - 1]
                a = words[q, 0]
                b = words[q, 1]
                c = words[q, 2]
                d = words[q, 3]
                head_inv = (a > b) + (a > c) + (a > d) + (b > c) + (b > d) + (c > d)
                odd = (n - cycles + head_inv + flip) & 1
                # rank of the head pattern in S_4 (lex)
                ra = (a > b) + (a > c) + (a > d)
                rb = (b > c) + (b > d)
                rc = c > d
                idx = ra * 6 + rb * 2 + rc
                out[q] = tau_minus[idx] if odd else tau_plus[idx]
            return out

        _kernel = kernel
    return _kernel


def batch_matched_tau(words: np.ndarray, variant: str = "bullet") -> np.ndarray:
    """Transposition index of each row's partner (0 = exposed), rows are permutations of [n], n >= 4."""
    _check_variant(variant)
    words = np.ascontiguousarray(words)
    if words.ndim != 2 or words.shape[1] < 4:
        raise ValueError("expected a 2-d array of permutations with n >= 4")
    return _get_kernel()(words, _TAU_PLUS, _TAU_MINUS, 0 if variant == "bullet" else 1)


def apply_tau(words: np.ndarray, taus: np.ndarray) -> np.ndarray:
    """Partners as words (exposed rows are returned unchanged)."""
    out = words.copy()
    rows = np.nonzero(taus)[0]
    cols = taus[rows].astype(np.intp) - 1
    out[rows, cols], out[rows, cols + 1] = words[rows, cols + 1], words[rows, cols]
    return out


# ---------------------------------------------------------------------------
# query matchings over graph codes


@dataclass(frozen=True)
class PermMatching:
    graph: PermGraph
    variant: str = "bullet"

    def __post_init__(self) -> None:
        _check_variant(self.variant)

    def match_word(self, p: Sequence[int]) -> Optional[tuple[Perm, int]]:
        return perm_matched_neighbor(self.graph.n, p, self.variant)

    def match(self, v: int) -> Optional[int]:
        hit = self.match_word(self.graph.decode(v))
        return None if hit is None else permcore.lex_rank(hit[0])


@dataclass
class CubeMatching:
    """Maximal matching of Q_n from symmetric chains.

    Chain edges follow the level-pair pattern of the chosen residue; the few
    vertices it leaves exposed next to exposed neighbors (around level 0, the
    middle and the top) get a greedy patch computed once at construction.
    """

    n: int
    graph: CubeGraph = field(init=False)
    p: int = field(init=False)
    extra: dict = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("cube matching needs n >= 1")
        self.graph = CubeGraph(self.n)
        sizes = self.graph.level_sizes()
        self.p = choose_residue(sizes)
        self._low, self._high = chosen_levels(self.n, self.p)
        covered_levels = {k - 1 for k in self._low} | set(self._low) | set(self._high) | {k + 1 for k in self._high}
        scan = [j for j in range(self.n + 1) if j not in covered_levels
                and ((j - 1 >= 0 and j - 1 not in covered_levels) or (j + 1 <= self.n and j + 1 not in covered_levels))]
        self.extra = {}
        for j in scan:
            for v in self.graph.level_vertices(j):
                if self._chain_match(v) is not None or v in self.extra:
                    continue
                for w, _ in self.graph.neighbors(v):
                    if w not in self.extra and self._chain_match(w) is None:
                        self.extra[v] = w
                        self.extra[w] = v
                        break

    def _chain_match(self, v: int) -> Optional[int]:
        word = format(v, f"0{self.n}b")
        t, top = chain_span(word)
        j = word.count("1")
        lows = chain_edge_lows(t, top, [k for k in self._low if abs(k - j) <= 2],
                               [k for k in self._high if abs(k - j) <= 2])
        if j in lows:
            _, zeros, _ = bracket_structure(word)
            return v ^ (1 << (self.n - 1 - zeros[0]))
        if j - 1 in lows:
            ones, _, _ = bracket_structure(word)
            return v ^ (1 << (self.n - 1 - ones[-1]))
        return None

    def match(self, v: int) -> Optional[int]:
        self.graph.check_vertex(v)
        w = self._chain_match(v)
        return self.extra.get(v) if w is None else w

    def core_size(self) -> int:
        sizes = self.graph.level_sizes()
        return sum(sizes[k] for k in self._low + self._high)


def cube_matched_neighbor(n: int, word: str, _cache: dict = {}) -> Optional[str]:
    if n not in _cache:
        _cache[n] = CubeMatching(n)
    qm = _cache[n]
    w = qm.match(qm.graph.encode(word))
    return None if w is None else qm.graph.decode(w)


@dataclass
class ProductMatching:
    """Maximal matching of a product of permutahedra of size |V|/3 (or the hypercube route)."""

    graph: ProductGraph
    variant: str = "bullet"

    def __post_init__(self) -> None:
        _check_variant(self.variant)
        factors = self.graph.factors
        if any(x < 2 for x in factors):
            raise GraphError("product construction needs factors >= 2")
        self.is_cube = all(x == 2 for x in factors)
        if self.is_cube:
            self.cube = CubeMatching(len(factors))
            self.base = -1
        else:
            # the largest factor carries the matching (first one on ties)
            self.base = max(range(len(factors)), key=lambda i: (factors[i], -i))
            self.base_matching = PermMatching(self.graph.parts[self.base], "bullet")

    def _to_cube(self, codes: Sequence[int]) -> int:
        v = 0
        for c in codes:
            v = (v << 1) | c
        return v

    def _from_cube(self, v: int) -> list[int]:
        k = len(self.graph.factors)
        return [(v >> (k - 1 - i)) & 1 for i in range(k)]

    def match(self, v: int) -> Optional[int]:
        codes = self.graph.split(v)
        if self.is_cube:
            w = self.cube.match(self._to_cube(codes))
            return None if w is None else self.graph.join(self._from_cube(w))
        flip = sum(g.color(c) for i, (g, c) in enumerate(zip(self.graph.parts, codes)) if i != self.base) & 1
        use = self.variant if not flip else ("circ" if self.variant == "bullet" else "bullet")
        g = self.graph.parts[self.base]
        hit = perm_matched_neighbor(g.n, g.decode(codes[self.base]), use)
        if hit is None:
            return None
        codes[self.base] = permcore.lex_rank(hit[0])
        return self.graph.join(codes)


def product_matched_neighbor(factors: Sequence[int], v: Sequence[Sequence[int]], variant: str = "bullet"):
    if not factors:
        raise GraphError("empty product spec")
    g = ProductGraph(factors)
    w = ProductMatching(g, variant).match(g.encode(v))
    return None if w is None else g.decode(w)


def query_matching(g: Graph, variant: str = "bullet"):
    """The explicit QueryMatching for a graph family."""
    if isinstance(g, PermGraph):
        return PermMatching(g, variant)
    if isinstance(g, CubeGraph):
        return CubeMatching(g.n)
    if isinstance(g, ProductGraph):
        return ProductMatching(g, variant)
    raise GraphError(f"no explicit construction for {g.describe()}")
