"""Independent reference implementations used to check the library.

Nothing here imports library internals beyond the public graph accessors
(``labels`` and ``edges()``); checks are brute force over Python sets,
apart from one adjacency-matrix triple count used where set scans are too slow.
"""

from __future__ import annotations

import random
from itertools import combinations, permutations

import numpy as np


def edge_set(g) -> set[frozenset]:
    return {frozenset((str(a), str(b))) for a, b in g.edges()}


def names(g) -> list[str]:
    return [str(v) for v in g.labels]


def palfy_by_triples(vertices, edges) -> bool:
    """Every three vertices span at least one edge."""
    return all(any(frozenset(p) in edges for p in combinations(t, 2)) for t in combinations(vertices, 3))


def components(vertices, edges) -> list[set]:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        a, b = tuple(e)
        parent[find(a)] = find(b)
    groups: dict = {}
    for v in vertices:
        groups.setdefault(find(v), set()).add(v)
    return list(groups.values())


def connected(vertices, edges) -> bool:
    return len(components(vertices, edges)) <= 1


def bfs_distance(vertices, edges, src, dst) -> float:
    if src == dst:
        return 0
    adj = {v: {w for e in edges if v in e for w in e if w != v} for v in vertices}
    seen, frontier, d = {src}, {src}, 0
    while frontier:
        d += 1
        frontier = {w for v in frontier for w in adj[v]} - seen
        if dst in frontier:
            return d
        seen |= frontier
    return float("inf")


def diameter(vertices, edges) -> int:
    """Largest finite distance."""
    best = 0
    for a, b in combinations(vertices, 2):
        d = bfs_distance(vertices, edges, a, b)
        if d != float("inf"):
            best = max(best, d)
    return best


def maximal_cliques(vertices, edges) -> set[frozenset]:
    cliques = []
    for size in range(len(vertices), 0, -1):
        for s in combinations(vertices, size):
            if all(frozenset(p) in edges for p in combinations(s, 2)):
                if not any(set(s) <= c for c in cliques):
                    cliques.append(set(s))
    return {frozenset(c) for c in cliques}


def isomorphic(g, h) -> bool:
    """Permutation search; only for small graphs."""
    gv, hv = names(g), names(h)
    ge, he = edge_set(g), edge_set(h)
    if len(gv) != len(hv) or len(ge) != len(he):
        return False
    for perm in permutations(hv):
        m = dict(zip(gv, perm))
        if all(frozenset(m[x] for x in e) in he for e in ge):
            return True
    return False


def family_edges(family: str, k: int, n: int = 0, m: int = 0, t: int = 0) -> tuple[list[str], set[frozenset]]:
    """Vertex names and edges written out straight from the construction rules."""
    E = set()

    def join(x, y):
        E.add(frozenset((x, y)))

    A = [f"a{i}" for i in range(1, k + 1)]
    if family == "gamma":
        B = [f"b{i}" for i in range(1, t + 1)]
        for grp in (A, B):
            for x, y in combinations(grp, 2):
                join(x, y)
        for i in range(t):
            join(A[i], B[i])
        return A + B, E
    B = [f"b{i}" for i in range(1, k + n + 1)]
    for grp in (A, B):
        for x, y in combinations(grp, 2):
            join(x, y)
    for i in range(1, k + 1):
        join(f"a{i}", f"b{i}")
    for i in range(1, n + 1):
        join(f"a{i}", f"b{k + i}")
    if family == "sigmaRstar":
        C = [f"c{j}" for j in range(1, m + 1)]
        for x, y in combinations(C, 2):
            join(x, y)
        for b in B:
            for c in C:
                join(b, c)
        return A + B + C, E
    side = A if family == "sigmaL" else B
    for x in side:
        join("c", x)
    return A + B + ["c"], E


def connected_spanning_subgraphs(vertices, edges, proper: bool = True):
    """Yield every connected spanning edge subset (brute force)."""
    edges = sorted(edges, key=sorted)
    for mask in range(1 << len(edges)):
        if proper and mask == (1 << len(edges)) - 1:
            continue
        chosen = {edges[i] for i in range(len(edges)) if mask >> i & 1}
        if connected(vertices, chosen):
            yield chosen


def random_graph(rng: random.Random, max_vertices: int = 12):
    """(labels, edges) on role-tagged names for ``build_graph``."""
    n = rng.randint(1, max_vertices)
    roles = ["a", "b", "c"]
    labels, counters = [], {"a": 0, "b": 0, "c": 0}
    for _ in range(n):
        r = rng.choice(roles)
        counters[r] += 1
        labels.append(f"{r}{counters[r]}")
    p = rng.random()
    edges = [(x, y) for x, y in combinations(labels, 2) if rng.random() < p]
    return labels, edges


def independent_triple_count(vertices, edges) -> int:
    """Number of independent triples, as trace((J - I - A)^3) / 6."""
    idx = {v: i for i, v in enumerate(vertices)}
    n = len(vertices)
    adj = np.zeros((n, n), dtype=np.int64)
    for e in edges:
        a, b = tuple(e)
        adj[idx[a], idx[b]] = adj[idx[b], idx[a]] = 1
    comp = 1 - adj - np.eye(n, dtype=np.int64)
    return int(np.trace(comp @ comp @ comp)) // 6
