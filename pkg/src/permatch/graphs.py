"""Implicit graph families behind one neighbor-oracle interface.

Every family numbers its vertices ``0 .. vertex_count - 1`` and exposes
``neighbors(code)`` as ``(code, label)`` pairs in ascending label order.
Edge labels are family specific:

* ``perm``: the transposition index ``i`` (swap positions ``i, i+1``);
* ``cube``: the flipped bit position (1-based from the left);
* ``assoc``: the in-order indices ``(a, b)`` of the two tree nodes exchanged
  by the rotation (in-order numbering is invariant under rotation);
* ``product``: ``(factor index, inner label)``, factor index 1-based.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb, factorial, prod
from typing import Any, Hashable, Iterator, Sequence

from . import permcore
from .permcore import Perm


class GraphError(ValueError):
    pass


class NoLevelStructure(GraphError):
    pass


class NotBipartite(GraphError):
    pass


# associahedron sizes for n <= 6: (vertices, edges)
ASSOC_TABLE_COUNTS = {1: (1, 0), 2: (2, 1), 3: (5, 5), 4: (14, 21), 5: (42, 84), 6: (132, 330)}


def mahonian_row(n: int) -> list[int]:
    """Coefficients of prod_{j=1..n} (1 + q + ... + q^(j-1))."""
    row = [1]
    for j in range(1, n + 1):
        new = [0] * (len(row) + j - 1)
        for k, c in enumerate(row):
            for t in range(j):
                new[k + t] += c
        row = new
    return row


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


class Graph:
    """Common surface of all families.  Subclasses fill in the codec and oracle."""

    family: str = ""
    vertex_count: int = 0
    edge_count: int = 0
    degree: int | None = None  # set when regular

    def neighbors(self, v: int) -> list[tuple[int, Hashable]]:
        raise NotImplementedError

    def decode(self, v: int) -> Any:
        raise NotImplementedError

    def encode(self, x: Any) -> int:
        raise NotImplementedError

    def format(self, v: int) -> str:
        raise NotImplementedError

    def parse(self, text: str) -> int:
        raise NotImplementedError

    def format_label(self, label: Hashable) -> str:
        return str(label)

    def describe(self) -> str:
        return self.family

    def check_vertex(self, v: int) -> None:
        if not isinstance(v, int) or not 0 <= v < self.vertex_count:
            raise GraphError(f"invalid vertex code {v!r} for {self.describe()}")

    def vertices(self) -> Iterator[int]:
        return iter(range(self.vertex_count))

    def edges(self) -> Iterator[tuple[int, int, Hashable]]:
        for u in self.vertices():
            for w, label in self.neighbors(u):
                if u < w:
                    yield u, w, label

    def adjacency(self) -> list[list[int]]:
        return [[w for w, _ in self.neighbors(v)] for v in self.vertices()]

    def has_edge(self, u: int, w: int) -> bool:
        return any(x == w for x, _ in self.neighbors(u))

    # level structure (perm and cube only)
    def has_levels(self) -> bool:
        return False

    def level(self, v: int) -> int:
        raise NoLevelStructure(f"{self.describe()} has no level structure")

    def level_sizes(self) -> list[int]:
        raise NoLevelStructure(f"{self.describe()} has no level structure")

    def level_vertices(self, k: int) -> list[int]:
        raise NoLevelStructure(f"{self.describe()} has no level structure")

    def color(self, v: int) -> int:
        """0/1 bipartition class."""
        raise NotImplementedError


class PermGraph(Graph):
    """The permutahedron: permutations of [n] under adjacent swaps, coded by lex rank."""

    family = "perm"

    def __init__(self, n: int):
        if not 1 <= n <= permcore.MAX_RANK_N:
            raise GraphError(f"perm graph needs 1 <= n <= {permcore.MAX_RANK_N}")
        self.n = n
        self.vertex_count = factorial(n)
        self.edge_count = factorial(n) * (n - 1) // 2
        self.degree = n - 1

    def describe(self) -> str:
        return f"perm(n={self.n})"

    def decode(self, v: int) -> Perm:
        self.check_vertex(v)
        return permcore.lex_unrank(self.n, v)

    def encode(self, p: Sequence[int]) -> int:
        p = permcore.make_perm(p)
        if len(p) != self.n:
            raise GraphError(f"expected a permutation of length {self.n}")
        return permcore.lex_rank(p)

    def format(self, v: int) -> str:
        return permcore.format_perm(self.decode(v))

    def parse(self, text: str) -> int:
        try:
            return self.encode(permcore.parse_perm(text))
        except permcore.PermutationError as exc:
            raise GraphError(str(exc)) from exc

    def format_label(self, label: Hashable) -> str:
        return f"tau={label}"

    def neighbors(self, v: int) -> list[tuple[int, Hashable]]:
        p = self.decode(v)
        return [(permcore.lex_rank(permcore.apply_transposition(p, i)), i) for i in range(1, self.n)]

    def vertices_with_words(self) -> Iterator[tuple[int, Perm]]:
        """Lex-ordered (code, word) stream without unranking each code."""
        from itertools import permutations

        return enumerate(permutations(range(1, self.n + 1)))

    def has_levels(self) -> bool:
        return True

    def level(self, v: int) -> int:
        return permcore.inversion_count(self.decode(v))

    def level_sizes(self) -> list[int]:
        return mahonian_row(self.n)

    def level_vertices(self, k: int) -> list[int]:
        return _perm_levels(self.n)[k]

    def color(self, v: int) -> int:
        return permcore.parity(self.decode(v))


@lru_cache(maxsize=8)
def _perm_levels(n: int) -> tuple[list[int], ...]:
    from itertools import permutations

    levels: list[list[int]] = [[] for _ in range(n * (n - 1) // 2 + 1)]
    for code, p in enumerate(permutations(range(1, n + 1))):
        levels[permcore.inversion_count(p)].append(code)
    return tuple(levels)


class CubeGraph(Graph):
    """The hypercube Q_n on bit words; code = int(word, 2), position 1 is the leftmost bit."""

    family = "cube"

    def __init__(self, n: int):
        if n < 1:
            raise GraphError("cube graph needs n >= 1")
        self.n = n
        self.vertex_count = 1 << n
        self.edge_count = n << (n - 1)
        self.degree = n

    def describe(self) -> str:
        return f"cube(n={self.n})"

    def decode(self, v: int) -> str:
        self.check_vertex(v)
        return format(v, f"0{self.n}b")

    def encode(self, word: str) -> int:
        if len(word) != self.n or set(word) - {"0", "1"}:
            raise GraphError(f"expected a bit word of length {self.n}, got {word!r}")
        return int(word, 2)

    format = decode

    def parse(self, text: str) -> int:
        return self.encode(text.strip())

    def format_label(self, label: Hashable) -> str:
        return f"bit={label}"

    def neighbors(self, v: int) -> list[tuple[int, Hashable]]:
        self.check_vertex(v)
        n = self.n
        return [(v ^ (1 << (n - i)), i) for i in range(1, n + 1)]

    def has_levels(self) -> bool:
        return True

    def level(self, v: int) -> int:
        self.check_vertex(v)
        return bin(v).count("1")

    def level_sizes(self) -> list[int]:
        return [comb(self.n, k) for k in range(self.n + 1)]

    def level_vertices(self, k: int) -> list[int]:
        n = self.n
        return sorted(sum(1 << (n - 1 - i) for i in c) for c in combinations(range(n), k))

    def color(self, v: int) -> int:
        return self.level(v) & 1


# ---------------------------------------------------------------------------
# binary trees as bracket words: w(leaf) = "", w(node(L, R)) = "(" w(L) ")" w(R)

Tree = Any  # None or (left, right)


def tree_from_word(word: str) -> Tree:
    pos = 0

    def parse() -> Tree:
        nonlocal pos
        if pos >= len(word) or word[pos] == ")":
            return None
        if word[pos] != "(":
            raise GraphError(f"bad bracket word {word!r}")
        pos += 1
        left = parse()
        if pos >= len(word) or word[pos] != ")":
            raise GraphError(f"unbalanced bracket word {word!r}")
        pos += 1
        right = parse()
        return (left, right)

    tree = parse()
    if pos != len(word):
        raise GraphError(f"unbalanced bracket word {word!r}")
    return tree


def tree_to_word(t: Tree) -> str:
    if t is None:
        return ""
    return "(" + tree_to_word(t[0]) + ")" + tree_to_word(t[1])


def tree_size(t: Tree) -> int:
    return 0 if t is None else 1 + tree_size(t[0]) + tree_size(t[1])


def tree_rotations(t: Tree, offset: int = 0) -> list[tuple[tuple[int, int], Tree]]:
    """All single rotations of ``t`` as ``((a, b), rotated)``; ``a < b`` in-order indices."""
    if t is None:
        return []
    left, right = t
    k = offset + tree_size(left) + 1
    out = []
    if left is not None:
        a, b = left
        out.append(((offset + tree_size(a) + 1, k), (a, (b, right))))
    if right is not None:
        b, c = right
        out.append(((k, k + tree_size(b) + 1), ((left, b), c)))
    for label, sub in tree_rotations(left, offset):
        out.append((label, (sub, right)))
    for label, sub in tree_rotations(right, k):
        out.append((label, (left, sub)))
    return out


def _parent_indices(t: Tree) -> dict[int, int | None]:
    parents: dict[int, int | None] = {}

    def walk(node: Tree, offset: int, parent: int | None) -> None:
        if node is None:
            return
        k = offset + tree_size(node[0]) + 1
        parents[k] = parent
        walk(node[0], offset, k)
        walk(node[1], k, k)

    walk(t, 0, None)
    return parents


def assoc_rotate(word: str, position: int) -> str:
    """Rotate the node with (1-based) in-order index ``position`` above its parent."""
    t = tree_from_word(word)
    parent = _parent_indices(t).get(position, None)
    if parent is None:
        raise GraphError(f"no rotation at position {position} of {word!r}")
    label = (min(position, parent), max(position, parent))
    for lab, rotated in tree_rotations(t):
        if lab == label:
            return tree_to_word(rotated)
    raise AssertionError("unreachable: parent/child pair without a rotation")


def dyck_words(n: int) -> list[str]:
    """All balanced words with n pairs, in lexicographic order ('(' < ')')."""
    out: list[str] = []

    def rec(prefix: str, opened: int, closed: int) -> None:
        if closed == n:
            out.append(prefix)
            return
        if opened < n:
            rec(prefix + "(", opened + 1, closed)
        if closed < opened:
            rec(prefix + ")", opened, closed + 1)

    rec("", 0, 0)
    return out


class AssocGraph(Graph):
    """Rotation graph of binary trees with n internal nodes."""

    family = "assoc"
    MAX_N = 12

    def __init__(self, n: int):
        if not 1 <= n <= self.MAX_N:
            raise GraphError(f"assoc graph needs 1 <= n <= {self.MAX_N}")
        self.n = n
        self.words = dyck_words(n)
        self.index = {w: k for k, w in enumerate(self.words)}
        self._adj: list[list[tuple[int, Hashable]]] = []
        for w in self.words:
            rot = tree_rotations(tree_from_word(w))
            self._adj.append(sorted((self.index[tree_to_word(r)], lab) for lab, r in rot))
            self._adj[-1].sort(key=lambda x: x[1])
        self.vertex_count = len(self.words)
        self.edge_count = sum(len(a) for a in self._adj) // 2
        self.degree = n - 1
        if n in ASSOC_TABLE_COUNTS and (self.vertex_count, self.edge_count) != ASSOC_TABLE_COUNTS[n]:
            raise AssertionError(f"associahedron n={n} has wrong size {(self.vertex_count, self.edge_count)}")
        self._coloring: list[int] | None = None

    def describe(self) -> str:
        return f"assoc(n={self.n})"

    def decode(self, v: int) -> str:
        self.check_vertex(v)
        return self.words[v]

    def encode(self, word: str) -> int:
        try:
            return self.index[word]
        except KeyError:
            raise GraphError(f"not a tree with {self.n} internal nodes: {word!r}") from None

    format = decode

    def parse(self, text: str) -> int:
        return self.encode(text.strip())

    def format_label(self, label: Hashable) -> str:
        a, b = label  # type: ignore[misc]
        return f"rot={a}-{b}"

    def neighbors(self, v: int) -> list[tuple[int, Hashable]]:
        self.check_vertex(v)
        return list(self._adj[v])

    def two_coloring(self) -> list[int] | None:
        """BFS 2-coloring, or ``None`` when an odd cycle exists."""
        return bfs_two_coloring(self.adjacency())

    def color(self, v: int) -> int:
        if self._coloring is None:
            coloring = self.two_coloring()
            if coloring is None:
                raise NotBipartite(f"{self.describe()} contains an odd cycle")
            self._coloring = coloring
        return self._coloring[v]


def bfs_two_coloring(adj: Sequence[Sequence[int]]) -> list[int] | None:
    color = [-1] * len(adj)
    for root in range(len(adj)):
        if color[root] >= 0:
            continue
        color[root] = 0
        queue = [root]
        for v in queue:
            for w in adj[v]:
                if color[w] < 0:
                    color[w] = color[v] ^ 1
                    queue.append(w)
                elif color[w] == color[v]:
                    return None
    return color


class ProductGraph(Graph):
    """Cartesian product of permutahedra; code is mixed radix, first factor most significant."""

    family = "product"

    def __init__(self, factors: Sequence[int]):
        factors = tuple(int(x) for x in factors)
        if not factors:
            raise GraphError("product needs at least one factor")
        if any(x < 1 for x in factors):
            raise GraphError("product factors must be >= 1")
        self.factors = factors
        self.parts = [PermGraph(x) for x in factors]
        self.sizes = [g.vertex_count for g in self.parts]
        self.vertex_count = prod(self.sizes)
        self.degree = sum(x - 1 for x in factors)
        self.edge_count = self.vertex_count * self.degree // 2
        # place value of each factor
        self.weights = [prod(self.sizes[i + 1:]) for i in range(len(factors))]

    def describe(self) -> str:
        return "product(" + "x".join(map(str, self.factors)) + ")"

    def split(self, v: int) -> list[int]:
        self.check_vertex(v)
        return [(v // w) % s for w, s in zip(self.weights, self.sizes)]

    def join(self, codes: Sequence[int]) -> int:
        return sum(c * w for c, w in zip(codes, self.weights))

    def decode(self, v: int) -> tuple[Perm, ...]:
        return tuple(g.decode(c) for g, c in zip(self.parts, self.split(v)))

    def encode(self, words: Sequence[Sequence[int]]) -> int:
        if len(words) != len(self.parts):
            raise GraphError(f"expected {len(self.parts)} factor words")
        return self.join([g.encode(w) for g, w in zip(self.parts, words)])

    def format(self, v: int) -> str:
        return "|".join(g.format(c) for g, c in zip(self.parts, self.split(v)))

    def parse(self, text: str) -> int:
        pieces = text.strip().split("|")
        if len(pieces) != len(self.parts):
            raise GraphError(f"expected {len(self.parts)} '|'-separated factor words, got {text!r}")
        return self.join([g.parse(t) for g, t in zip(self.parts, pieces)])

    def format_label(self, label: Hashable) -> str:
        f, i = label  # type: ignore[misc]
        return f"f{f}:tau={i}"

    def neighbors(self, v: int) -> list[tuple[int, Hashable]]:
        codes = self.split(v)
        out = []
        for f, (g, c, w) in enumerate(zip(self.parts, codes, self.weights), start=1):
            for c2, lab in g.neighbors(c):
                out.append((v + (c2 - c) * w, (f, lab)))
        return out

    def color(self, v: int) -> int:
        return sum(g.color(c) for g, c in zip(self.parts, self.split(v))) & 1


class ExplicitGraph(Graph):
    """A user-supplied graph from an edge list; vertex names are arbitrary strings."""

    family = "edges"

    def __init__(self, names: Sequence[str], edges: Sequence[tuple[int, int]]):
        self.names = list(names)
        self.index = {nm: k for k, nm in enumerate(self.names)}
        if len(self.index) != len(self.names):
            raise GraphError("duplicate vertex names")
        self._adj: list[list[tuple[int, Hashable]]] = [[] for _ in self.names]
        seen = set()
        for u, w in edges:
            if u == w:
                raise GraphError(f"self-loop at {self.names[u]!r}")
            key = (min(u, w), max(u, w))
            if key in seen:
                continue
            seen.add(key)
            self._adj[u].append((w, key))
            self._adj[w].append((u, key))
        for a in self._adj:
            a.sort(key=lambda x: x[1])
        self.vertex_count = len(self.names)
        self.edge_count = len(seen)
        degrees = {len(a) for a in self._adj}
        self.degree = degrees.pop() if len(degrees) == 1 else None

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[Any, Any]]) -> "ExplicitGraph":
        names: dict[str, int] = {}
        edges = []
        for a, b in pairs:
            a, b = str(a), str(b)
            for x in (a, b):
                if x not in names:
                    names[x] = len(names)
            edges.append((names[a], names[b]))
        return cls(list(names), edges)

    @classmethod
    def from_text(cls, text: str) -> "ExplicitGraph":
        pairs = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise GraphError(f"line {lineno}: expected 'u v', got {line!r}")
            pairs.append((tokens[0], tokens[1]))
        return cls.from_pairs(pairs)

    def describe(self) -> str:
        return f"edges(|V|={self.vertex_count}, |E|={self.edge_count})"

    def decode(self, v: int) -> str:
        self.check_vertex(v)
        return self.names[v]

    def encode(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise GraphError(f"unknown vertex {name!r}") from None

    format = decode

    def parse(self, text: str) -> int:
        return self.encode(text.strip())

    def format_label(self, label: Hashable) -> str:
        return "-"

    def neighbors(self, v: int) -> list[tuple[int, Hashable]]:
        self.check_vertex(v)
        return list(self._adj[v])

    def color(self, v: int) -> int:
        coloring = bfs_two_coloring(self.adjacency())
        if coloring is None:
            raise NotBipartite("graph contains an odd cycle")
        return coloring[v]


def make_graph(family: str, n: int | None = None, factors: Sequence[int] | None = None) -> Graph:
    if family == "product":
        if not factors:
            raise GraphError("product family needs a factor spec")
        return ProductGraph(factors)
    if n is None:
        raise GraphError(f"family {family!r} needs n")
    if family == "perm":
        return PermGraph(n)
    if family == "cube":
        return CubeGraph(n)
    if family == "assoc":
        return AssocGraph(n)
    raise GraphError(f"unknown family {family!r}")


def parse_spec(text: str) -> tuple[int, ...]:
    """``"4x3x2"`` -> (4, 3, 2)."""
    try:
        factors = tuple(int(x) for x in text.lower().replace(",", "x").split("x") if x)
    except ValueError:
        raise GraphError(f"bad product spec {text!r}") from None
    if not factors:
        raise GraphError("empty product spec")
    return factors
