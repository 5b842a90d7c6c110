"""Graph corpora for agreement experiments."""
from __future__ import annotations

import itertools
from typing import Iterator

import numpy as np

from .automorphism import are_isomorphic, automorphisms
from .generators import circulant
from .graph import Graph, build, complement


def all_labeled_graphs(n: int) -> Iterator[Graph]:
    """Every graph on vertex set 0..n-1 (2^(n choose 2) of them)."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield build(n, [e for i, e in enumerate(pairs) if mask >> i & 1])


def _invariant(g: Graph) -> bytes:
    """Isomorphism invariant: per-vertex (degree, triangles, common-neighbor profile), sorted."""
    a = g.adjacency.astype(np.int64)
    a2 = a @ a
    deg = np.diagonal(a2)
    tri = (a2 * a).sum(axis=1)
    off = a2 - np.diag(deg)
    prof = np.sort(off * (g.n + 1) + a, axis=1)
    rows = np.column_stack([deg, tri, prof])
    rows = rows[np.lexsort(rows.T[::-1])]
    return rows.tobytes()


def _edge_orbit_representatives(g: Graph, pairs: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """One non-edge per orbit of Aut(g) on non-edges."""
    gens = automorphisms(g).generators
    seen: set[tuple[int, int]] = set()
    reps = []
    for e in pairs:
        if e in g.edges or e in seen:
            continue
        reps.append(e)
        stack = [e]
        seen.add(e)
        while stack:
            u, v = stack.pop()
            for p in gens:
                x, y = p[u], p[v]
                f = (x, y) if x < y else (y, x)
                if f not in seen:
                    seen.add(f)
                    stack.append(f)
    return reps


def graphs_up_to_isomorphism(n: int) -> list[Graph]:
    """One representative per isomorphism class, built edge count by edge count.

    Each class with m + 1 edges arises from a class with m edges by adding
    an edge, so extending all representatives of level m (one added edge per
    automorphism orbit of non-edges) and keeping one graph per class yields
    level m + 1. Candidates are bucketed by an invariant and compared with
    the exact isomorphism oracle. Levels past half the pairs are the
    complements of the lower levels.
    """
    pairs = list(itertools.combinations(range(n), 2))
    total = len(pairs)
    levels = [[build(n, [])]]
    for m in range(total // 2):
        buckets: dict[bytes, list[Graph]] = {}
        nxt: list[Graph] = []
        for g in levels[m]:
            for e in _edge_orbit_representatives(g, pairs):
                h = Graph(n, g.edges | {e})
                bucket = buckets.setdefault(_invariant(h), [])
                if any(are_isomorphic(h, other) for other in bucket):
                    continue
                bucket.append(h)
                nxt.append(h)
        levels.append(nxt)
    for m in range(total // 2 + 1, total + 1):
        levels.append([complement(g) for g in levels[total - m]])
    return [g for level in levels for g in level]


def random_graphs(n: int, count: int, seed: int = 0) -> list[Graph]:
    """G(n, q) samples with the edge density q itself drawn uniformly from [0.1, 0.9]."""
    rng = np.random.default_rng(seed)
    pairs = list(itertools.combinations(range(n), 2))
    out = []
    for _ in range(count):
        q = rng.uniform(0.1, 0.9)
        keep = rng.random(len(pairs)) < q
        out.append(build(n, [e for e, k in zip(pairs, keep) if k]))
    return out


def all_circulants(p: int) -> list[Graph]:
    """Every circulant on Z_p with a nonempty connection set, plus the empty graph."""
    reps = list(range(1, p // 2 + 1))
    out = [build(p, [])]
    for mask in range(1, 1 << len(reps)):
        z = set()
        for i, r in enumerate(reps):
            if mask >> i & 1:
                z |= {r, (-r) % p}
        out.append(circulant(p, z))
    return out
