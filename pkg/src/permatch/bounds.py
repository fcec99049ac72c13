"""Lower bounds for maximal matchings from induced 4-cycles.

A graph is alpha-heavy when every edge ``e`` lies on ``alpha`` induced
4-cycles that pairwise share no edge besides ``e``.  For such a graph with
average degree ``d`` and maximum degree ``D`` every maximal matching has at
least ``d |V| / (4D - alpha - 2)`` edges.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial, prod
from typing import Any, Sequence

from .graphs import AssocGraph, CubeGraph, Graph, GraphError, PermGraph, ProductGraph
from .matching import CapExceeded, check_cap

Cycle = tuple[int, int, int, int]


@dataclass(frozen=True)
class BoundValue:
    value: Fraction

    @property
    def ceiling(self) -> int:
        return -((-self.value.numerator) // self.value.denominator)

    def as_json(self) -> dict:
        return {"exact": f"{self.value.numerator}/{self.value.denominator}", "ceiling": self.ceiling}


@dataclass
class HeavinessReport:
    per_edge: dict[tuple[int, int], int] = field(default_factory=dict)
    alpha: int | None = None
    certified_exhaustive: bool = False

    def as_json(self) -> dict:
        values = sorted(set(self.per_edge.values()))
        return {
            "alpha": self.alpha,
            "certified_exhaustive": self.certified_exhaustive,
            "edges_inspected": len(self.per_edge),
            "distinct_values": values,
        }


def _check_edge(g: Graph, u: int, w: int) -> None:
    g.check_vertex(u)
    g.check_vertex(w)
    if not g.has_edge(u, w):
        raise GraphError(f"{g.format(u)} {g.format(w)} is not an edge of {g.describe()}")


def induced_4cycles_through(g: Graph, u: int, w: int) -> list[Cycle]:
    """Chordless 4-cycles ``(a, b, x, y)`` through the edge ``a b`` with ``a = min(u, w)``.

    Each cycle appears once: it starts at the smaller end of the edge and
    walks across the edge first.
    """
    _check_edge(g, u, w)
    a, b = min(u, w), max(u, w)
    na = {x for x, _ in g.neighbors(a)}
    nb = {x for x, _ in g.neighbors(b)}
    out = []
    for x in sorted(nb - {a}):
        if x in na:  # chord a-x
            continue
        nx = {y for y, _ in g.neighbors(x)}
        for y in sorted(na - {b}):
            if y in nx and y not in nb and y != x:
                out.append((a, b, x, y))
    return out


def _cycle_edges(c: Cycle) -> set[frozenset]:
    return {frozenset((c[i], c[(i + 1) % 4])) for i in range(4)}


def edge_heaviness(g: Graph, u: int, w: int) -> int:
    """Largest set of induced 4-cycles through ``u w`` pairwise sharing only that edge."""
    from .exact import max_independent_set

    cycles = induced_4cycles_through(g, u, w)
    if len(cycles) <= 1:
        return len(cycles)
    e = frozenset((u, w))
    edge_sets = [_cycle_edges(c) - {e} for c in cycles]
    conflict = [[j for j in range(len(cycles)) if j != i and edge_sets[i] & edge_sets[j]] for i in range(len(cycles))]
    return max_independent_set(conflict).optimum


def _heaviness_chunk(g: Graph, chunk: list[tuple[int, int]]) -> list[int]:
    return [edge_heaviness(g, u, w) for u, w in chunk]


def graph_heaviness(g: Graph, sample: int | None = None, seed: int = 0, cap: int | None = None,
                    threads: int = 1) -> HeavinessReport:
    """Minimum edge heaviness over all edges, or over ``sample`` random edges."""
    report = HeavinessReport()
    if sample is None:
        check_cap(g, cap, what="edges")
        edges = ((u, w) for u, w, _ in g.edges())
        report.certified_exhaustive = True
    else:
        rng = random.Random(seed)
        edges = []
        for _ in range(sample):
            u = rng.randrange(g.vertex_count)
            nbrs = g.neighbors(u)
            if not nbrs:
                continue
            w = nbrs[rng.randrange(len(nbrs))][0]
            edges.append((min(u, w), max(u, w)))
    edges = list(edges)
    if threads > 1 and len(edges) >= 2000:
        from concurrent.futures import ProcessPoolExecutor

        step = -(-len(edges) // (4 * threads))
        chunks = [edges[i:i + step] for i in range(0, len(edges), step)]
        with ProcessPoolExecutor(threads) as pool:
            values = [h for part in pool.map(_heaviness_chunk, [g] * len(chunks), chunks) for h in part]
    else:
        values = _heaviness_chunk(g, edges)
    for e, h in zip(edges, values):
        report.per_edge[e] = h
    report.alpha = min(report.per_edge.values()) if report.per_edge else None
    return report


def lower_bound_general(d: Fraction | int, delta: int, alpha: int, nv: int) -> BoundValue:
    """d |V| / (4 delta - alpha - 2)."""
    den = 4 * delta - alpha - 2
    if den <= 0:
        raise ValueError(f"degenerate denominator 4*{delta} - {alpha} - 2 = {den}")
    return BoundValue(Fraction(d) * nv / den)


def lower_bound_perm(n: int) -> BoundValue:
    if n < 2:
        raise ValueError("lower_bound_perm needs n >= 2")
    return BoundValue(Fraction(factorial(n) * (n - 1), 3 * n - 2))


def lower_bound_cube(n: int) -> BoundValue:
    if n < 1:
        raise ValueError("lower_bound_cube needs n >= 1")
    return BoundValue(Fraction(n << n, 3 * n - 1))


def lower_bound_assoc(n: int) -> BoundValue:
    """(n-1) / ((3n-1)(n+1)) * C(2n, n); from degree n-1 and the claimed (n-5)-heaviness."""
    if n < 1:
        raise ValueError("lower_bound_assoc needs n >= 1")
    return BoundValue(Fraction((n - 1) * comb(2 * n, n), (3 * n - 1) * (n + 1)))


def lower_bound_product(factors: Sequence[int]) -> BoundValue:
    """(n-k)/(3n-3k+1) |V| with n = sum of factors, k = number of factors; needs a factor >= 3."""
    factors = sorted((int(x) for x in factors), reverse=True)
    if not factors or min(factors) < 2:
        raise ValueError("product bound needs factors >= 2")
    if factors[0] < 3:
        raise ValueError("product bound needs a factor >= 3; an all-2 product is a hypercube (use lower_bound_cube)")
    n, k = sum(factors), len(factors)
    nv = prod(factorial(x) for x in factors)
    return BoundValue(Fraction((n - k) * nv, 3 * n - 3 * k + 1))


def formula_alpha(g: Graph) -> int | None:
    """Heaviness guaranteed by the closed-form arguments for each family."""
    if isinstance(g, PermGraph):
        return g.n - 4
    if isinstance(g, CubeGraph):
        return g.n - 1
    if isinstance(g, AssocGraph):
        return g.n - 5
    if isinstance(g, ProductGraph):
        k = len(g.factors)
        return sum(g.factors) - k - 3
    return None


def family_bound(g: Graph) -> tuple[str, BoundValue] | None:
    if isinstance(g, PermGraph) and g.n >= 2:
        return "perm", lower_bound_perm(g.n)
    if isinstance(g, CubeGraph):
        return "cube", lower_bound_cube(g.n)
    if isinstance(g, AssocGraph) and g.n >= 2:
        return "assoc", lower_bound_assoc(g.n)
    if isinstance(g, ProductGraph):
        if all(x == 2 for x in g.factors):
            return "cube", lower_bound_cube(len(g.factors))
        if min(g.factors) >= 2:
            return "product", lower_bound_product(g.factors)
    return None


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def bounds_report(
    g: Graph,
    alpha_mode: str = "auto",
    sample: int | None = None,
    seed: int = 0,
    witnesses: bool = True,
    exact: bool | None = None,
    time_limit: float = 30.0,
    witness_cap: int = 50_000,
    threads: int = 1,
) -> dict[str, Any]:
    """Lower-bound certificate plus upper-bound witnesses (and the exact value when cheap).

    ``alpha_mode``: ``exact`` scans every edge, ``formula`` uses the
    closed-form heaviness, ``auto`` scans when the graph has at most 20000
    edges (or samples when ``sample`` is given).  Raises ``AssertionError``
    if the lower bound, the exact value and the witnesses are inconsistent.
    """
    from .construct import query_matching
    from .exact import exact_mmm
    from .layered import layered_matching
    from .matching import materialize, verify_maximal

    if alpha_mode not in ("auto", "exact", "formula"):
        raise ValueError(f"unknown alpha mode {alpha_mode!r}")
    report: dict[str, Any] = {
        "graph": g.describe(),
        "vertices": g.vertex_count,
        "edges": g.edge_count,
    }
    degrees = None
    if g.degree is not None:
        delta, d = g.degree, Fraction(g.degree)
    else:
        degrees = [len(g.neighbors(v)) for v in g.vertices()]
        delta, d = max(degrees), Fraction(sum(degrees), len(degrees))
    report["average_degree"] = _frac(d)
    report["max_degree"] = delta

    mode = alpha_mode
    if mode == "auto":
        mode = "exact" if (sample is not None or g.edge_count <= 20_000) else "formula"
    claimed = formula_alpha(g)
    alpha_info: dict[str, Any] = {"formula": claimed}
    if mode == "exact":
        heavy = graph_heaviness(g, sample=sample, seed=seed, threads=threads)
        alpha_info.update(heavy.as_json())
        alpha = heavy.alpha if heavy.alpha is not None else 0
        alpha_source = "exact" if heavy.certified_exhaustive else "sampled"
    else:
        alpha = claimed if claimed is not None else 0
        alpha_source = "formula"
    alpha_info["used"] = alpha
    alpha_info["source"] = alpha_source
    notes = []
    if alpha < 0:
        notes.append("negative alpha clipped to 0 for the general bound")
        alpha = 0
    if alpha == 0:
        notes.append("alpha = 0: the general bound degenerates to d|V|/(4D-2)")
    report["alpha"] = alpha_info

    lower = 0
    lower_sources = {}
    # a sampled alpha is not a certificate
    if alpha_source != "sampled" and g.edge_count:
        general = lower_bound_general(d, delta, alpha, g.vertex_count)
        report["general_bound"] = general.as_json()
        lower, lower_sources["general"] = general.ceiling, general.ceiling
    fam = family_bound(g)
    if fam is not None:
        name, value = fam
        report["family_bound"] = {"formula": name, **value.as_json()}
        # the associahedron formula rests on a heaviness claim; only trust it when the scan agrees
        trusted = not (isinstance(g, AssocGraph) and (mode != "exact" or alpha_source != "exact"
                                                     or alpha_info.get("alpha", -1) < (claimed or 0)))
        report["family_bound"]["trusted"] = trusted
        if trusted and value.ceiling > lower:
            lower = value.ceiling
        if trusted:
            lower_sources["family"] = value.ceiling
    report["lower"] = lower

    uppers: dict[str, int] = {}
    if witnesses and g.vertex_count <= witness_cap:
        try:
            qm = query_matching(g, "bullet")
        except GraphError:
            qm = None
        if qm is not None:
            m = materialize(g, qm, threads=threads)
            if not verify_maximal(g, m):
                raise AssertionError(f"construction on {g.describe()} is not maximal")
            uppers["construct"] = m.size
        if g.has_levels() and g.vertex_count <= 5040:
            uppers["layered"] = layered_matching(g).size
    elif witnesses and isinstance(g, (PermGraph, ProductGraph)) and not (
            isinstance(g, ProductGraph) and all(x == 2 for x in g.factors)):
        uppers["construct_formula"] = g.vertex_count // 3
    report["upper"] = uppers
    if exact is None:
        exact = g.edge_count <= 100
    if exact:
        res = exact_mmm(g, time_limit=time_limit)
        report["exact"] = res.as_json(include_witness=False)
        if res.proven:
            report["exact_value"] = res.optimum
    for name, size in uppers.items():
        if size < lower:
            raise AssertionError(f"witness {name} of size {size} is below the lower bound {lower}")
    if "exact_value" in report:
        ex = report["exact_value"]
        if ex < lower or any(ex > s for s in uppers.values()):
            raise AssertionError(f"exact value {ex} outside [{lower}, {min(uppers.values(), default=ex)}]")
    best_upper = min(uppers.values(), default=None)
    report["tight"] = best_upper is not None and best_upper == lower
    report["notes"] = notes
    return report
