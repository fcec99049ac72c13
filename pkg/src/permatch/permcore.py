"""Permutation arithmetic on one-line words.

Permutations are plain tuples of the integers ``1..n``.  Positions and values
are 1-based throughout; only :func:`lex_rank` / :func:`lex_unrank` touch
0-based ranks.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterable, Sequence

Perm = tuple[int, ...]

MAX_RANK_N = 20


class PermutationError(ValueError):
    pass


def make_perm(word: Iterable[int]) -> Perm:
    p = tuple(int(x) for x in word)
    if sorted(p) != list(range(1, len(p) + 1)):
        raise PermutationError(f"not a permutation of [{len(p)}]: {p!r}")
    return p


def parse_perm(text: str) -> Perm:
    """Read ``"23451"`` or ``"10,2,1,..."``."""
    text = text.strip()
    if "," in text:
        parts = [x.strip() for x in text.split(",")]
        if not all(x.isdigit() for x in parts):
            raise PermutationError(f"cannot parse permutation {text!r}")
        return make_perm(int(x) for x in parts)
    if not text.isdigit():
        raise PermutationError(f"cannot parse permutation {text!r}")
    return make_perm(int(c) for c in text)


def format_perm(p: Sequence[int]) -> str:
    if len(p) <= 9:
        return "".join(str(x) for x in p)
    return ",".join(str(x) for x in p)


def inversion_set(p: Sequence[int]) -> set[tuple[int, int]]:
    n = len(p)
    return {(i + 1, j + 1) for i in range(n) for j in range(i + 1, n) if p[i] > p[j]}


def inversion_count(p: Sequence[int]) -> int:
    """Number of pairs ``i < j`` with ``p[i] > p[j]`` (works on any sequence of distinct ints)."""
    # Fenwick tree over the values; O(n log n)
    n = len(p)
    if n < 32:
        return sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
    order = {v: k + 1 for k, v in enumerate(sorted(p))}
    tree = [0] * (n + 1)
    inv = 0
    for seen, v in enumerate(p):
        r = order[v]
        # count seen values <= r
        s, i = 0, r
        while i > 0:
            s += tree[i]
            i -= i & -i
        inv += seen - s
        i = r
        while i <= n:
            tree[i] += 1
            i += i & -i
    return inv


def parity(p: Sequence[int]) -> int:
    """Inversion count mod 2, via the cycle count (O(n))."""
    n = len(p)
    seen = bytearray(n + 1)
    cycles = 0
    for start in range(1, n + 1):
        if seen[start]:
            continue
        cycles += 1
        j = start
        while not seen[j]:
            seen[j] = 1
            j = p[j - 1]
    return (n - cycles) & 1


def parity_color(p: Sequence[int]) -> str:
    return "odd" if parity(p) else "even"


def ascent_set(p: Sequence[int]) -> set[int]:
    return {i + 1 for i in range(len(p) - 1) if p[i] < p[i + 1]}


def apply_transposition(p: Sequence[int], i: int) -> Perm:
    """Swap the entries at positions ``i`` and ``i + 1`` (1-based)."""
    if not 1 <= i <= len(p) - 1:
        raise PermutationError(f"transposition index {i} out of range for n={len(p)}")
    q = list(p)
    q[i - 1], q[i] = q[i], q[i - 1]
    return tuple(q)


def transposition_between(p: Sequence[int], q: Sequence[int]) -> int | None:
    """The ``i`` with ``q = p tau_i``, or ``None`` if the two are not adjacent."""
    diff = [k for k in range(len(p)) if p[k] != q[k]]
    if len(diff) == 2 and diff[1] == diff[0] + 1 and p[diff[0]] == q[diff[1]] and p[diff[1]] == q[diff[0]]:
        return diff[0] + 1
    return None


def lex_rank(p: Sequence[int]) -> int:
    n = len(p)
    if n > MAX_RANK_N:
        raise PermutationError(f"ranking supports n <= {MAX_RANK_N}")
    rank = 0
    remaining = list(range(1, n + 1))
    for k, v in enumerate(p):
        idx = remaining.index(v)
        rank += idx * factorial(n - 1 - k)
        del remaining[idx]
    return rank


def lex_unrank(n: int, r: int) -> Perm:
    if n > MAX_RANK_N:
        raise PermutationError(f"ranking supports n <= {MAX_RANK_N}")
    if not 0 <= r < factorial(n):
        raise PermutationError(f"rank {r} out of range for n={n}")
    remaining = list(range(1, n + 1))
    out = []
    for k in range(n - 1, -1, -1):
        f = factorial(k)
        idx, r = divmod(r, f)
        out.append(remaining.pop(idx))
    return tuple(out)


@dataclass(frozen=True)
class Suffix:
    """Last ``n - 4`` letters of a permutation, with the sorted set of missing letters."""

    letters: tuple[int, ...]
    complement: tuple[int, int, int, int]

    @classmethod
    def of(cls, letters: Sequence[int], n: int) -> "Suffix":
        letters = tuple(letters)
        if len(letters) != n - 4 or len(set(letters)) != len(letters) or any(not 1 <= x <= n for x in letters):
            raise PermutationError(f"not a suffix of length {n - 4} over [{n}]: {letters!r}")
        present = set(letters)
        comp = tuple(x for x in range(1, n + 1) if x not in present)
        return cls(letters, comp)  # type: ignore[arg-type]

    @property
    def n(self) -> int:
        return len(self.letters) + 4


def suffix_split(p: Sequence[int]) -> tuple[Perm, Suffix]:
    if len(p) < 4:
        raise PermutationError("suffix decomposition needs n >= 4")
    prefix = tuple(p[:4])
    return prefix, Suffix(tuple(p[4:]), tuple(sorted(prefix)))  # type: ignore[arg-type]


def phi(s: Suffix, pi: Sequence[int]) -> Perm:
    """Relabel ``pi`` in S_4 by the missing letters of ``s`` and append ``s``."""
    c = s.complement
    return tuple(c[x - 1] for x in pi) + s.letters


def phi_inverse(s: Suffix, p: Sequence[int]) -> Perm:
    if tuple(p[4:]) != s.letters:
        raise PermutationError("permutation does not carry this suffix")
    pos = {v: k + 1 for k, v in enumerate(s.complement)}
    return tuple(pos[x] for x in p[:4])


def epsilon(s: Suffix) -> int:
    """(-1) ** (inv(s) + sum of the missing letters), as +1 / -1."""
    return -1 if (inversion_count(s.letters) + sum(s.complement)) & 1 else 1


def epsilon_of(p: Sequence[int]) -> int:
    """epsilon of the suffix of ``p``, in O(n).

    Cross inversions between the 4-letter prefix and the suffix number
    ``sum(complement) - 10``, so the sign equals sgn(p) * sgn(prefix pattern).
    """
    a, b, c, d = p[0], p[1], p[2], p[3]
    pattern_inv = (a > b) + (a > c) + (a > d) + (b > c) + (b > d) + (c > d)
    return -1 if (parity(p) + pattern_inv) & 1 else 1
