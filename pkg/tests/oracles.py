"""Independent reference computations used by several test modules."""

import random
import re
from itertools import combinations

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from permatch.graphs import ExplicitGraph


def cycle(k):
    return ExplicitGraph.from_pairs([(i, (i + 1) % k) for i in range(k)])


def path(k):
    return ExplicitGraph.from_pairs([(i, i + 1) for i in range(k)])


def complete(k):
    return ExplicitGraph.from_pairs(list(combinations(range(k), 2)))


def star(k):
    return ExplicitGraph.from_pairs([(0, i) for i in range(1, k + 1)])


def random_connected(rng, max_edges=10):
    nv = rng.randint(3, 8)
    order = list(range(nv))
    rng.shuffle(order)
    pairs = {tuple(sorted((order[i], order[rng.randrange(i)]))) for i in range(1, nv)}
    target = rng.randint(len(pairs), min(max_edges, nv * (nv - 1) // 2))
    while len(pairs) < target:
        a, b = rng.sample(range(nv), 2)
        pairs.add((min(a, b), max(a, b)))
    return ExplicitGraph.from_pairs(sorted(pairs))


def corpus(seed=2024):
    """50 connected graphs with at most 10 edges."""
    graphs = [cycle(k) for k in range(3, 11)]
    graphs += [path(k) for k in range(1, 11)]
    graphs += [complete(k) for k in range(2, 6)]
    graphs += [star(k) for k in range(2, 8)]
    rng = random.Random(seed)
    while len(graphs) < 50:
        graphs.append(random_connected(rng))
    return graphs


def brute_mis(g):
    adj = g.adjacency()
    for k in range(g.vertex_count, -1, -1):
        for subset in combinations(range(g.vertex_count), k):
            s = set(subset)
            if all(w not in s for v in subset for w in adj[v]):
                return k
    return 0


# --- LP format reader + solve -----------------------------------------------

_TERM = re.compile(r"([+-]?)\s*(\d*)\s*([A-Za-z_]\w*)")


def parse_lp(text):
    """Tiny reader for the LP subset we emit: objective, <=/>= rows, Binary section."""
    section, sense, objective, rows, names = None, None, {}, [], []
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low in ("minimize", "maximize"):
            section, sense = "obj", low
            continue
        if low == "subject to":
            section = "rows"
            continue
        if low == "binary":
            section = "bin"
            continue
        if low == "end":
            break
        if ":" in line:
            line = line.split(":", 1)[1]
        if section == "obj":
            objective = _linear(line)
        elif section == "rows":
            op = "<=" if "<=" in line else ">="
            lhs, rhs = line.split(op)
            rows.append((_linear(lhs), op, float(rhs)))
        elif section == "bin":
            names.append(line)
    return sense, objective, rows, names


def _linear(expr):
    out = {}
    for sign, coef, name in _TERM.findall(expr):
        c = float(coef) if coef else 1.0
        out[name] = out.get(name, 0.0) + (-c if sign == "-" else c)
    return out


def solve_lp_text(text):
    sense, objective, rows, names = parse_lp(text)
    index = {nm: k for k, nm in enumerate(names)}
    c = np.array([objective.get(nm, 0.0) for nm in names])
    if sense == "maximize":
        c = -c
    constraints = []
    if rows:
        a = np.zeros((len(rows), len(names)))
        lo = np.full(len(rows), -np.inf)
        hi = np.full(len(rows), np.inf)
        for r, (coefs, op, rhs) in enumerate(rows):
            for nm, v in coefs.items():
                a[r, index[nm]] = v
            if op == "<=":
                hi[r] = rhs
            else:
                lo[r] = rhs
        constraints.append(LinearConstraint(a, lo, hi))
    res = milp(c, constraints=constraints, integrality=np.ones(len(names)), bounds=Bounds(0, 1))
    assert res.success, res.message
    value = round(res.fun)
    return (-value if sense == "maximize" else value), len(names), len(rows)
