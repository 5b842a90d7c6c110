"""Undirected simple graphs with an optional vertex coloring.

Vertices are the integers ``0..n-1``. Edges are stored once as ``(u, v)`` with
``u < v``; a sorted neighbor tuple per vertex and a dense adjacency matrix are
derived lazily and cached, since the refinement kernels read those instead of
the edge set.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphError


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]
    vcolor: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.n < 0:
            raise GraphError(f"negative vertex count {self.n}")
        if not self.vcolor:
            object.__setattr__(self, "vcolor", (0,) * self.n)
        elif len(self.vcolor) != self.n:
            raise GraphError(f"vcolor has length {len(self.vcolor)}, expected {self.n}")
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise GraphError(f"edge {(u, v)} is not a normalized pair in range")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges and self.vcolor == other.vcolor

    def __hash__(self):
        return hash((self.n, self.edges, self.vcolor))

    def __repr__(self):
        colored = len(set(self.vcolor)) > 1
        return f"Graph(n={self.n}, m={len(self.edges)}{', colored' if colored else ''})"

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        nb: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].append(v)
            nb[v].append(u)
        return tuple(tuple(sorted(x)) for x in nb)

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix (int8, read-only)."""
        a = np.zeros((self.n, self.n), dtype=np.int8)
        if self.edges:
            e = np.array(sorted(self.edges), dtype=np.int64)
            a[e[:, 0], e[:, 1]] = 1
            a[e[:, 1], e[:, 0]] = 1
        a.setflags(write=False)
        return a

    def degree(self, u: int) -> int:
        return len(self.neighbors[u])

    def degrees(self) -> list[int]:
        return [len(x) for x in self.neighbors]

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def with_colors(self, vcolor: Sequence[int]) -> Graph:
        return Graph(self.n, self.edges, tuple(int(c) for c in vcolor))

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Image of the graph under the vertex map ``u -> perm[u]``."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("relabel needs a permutation of 0..n-1")
        edges = frozenset(_norm(perm[u], perm[v]) for u, v in self.edges)
        colors = [0] * self.n
        for u in range(self.n):
            colors[perm[u]] = self.vcolor[u]
        return Graph(self.n, edges, tuple(colors))

    def induced(self, vertices: Sequence[int]) -> Graph:
        """Induced subgraph; vertex ``vertices[i]`` becomes ``i``."""
        index = {v: i for i, v in enumerate(vertices)}
        edges = frozenset(
            _norm(index[u], index[v]) for u, v in self.edges if u in index and v in index
        )
        return Graph(len(vertices), edges, tuple(self.vcolor[v] for v in vertices))


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def build(n: int, edges: Iterable[Sequence[int]], vcolor: Sequence[int] | None = None) -> Graph:
    """Validate an edge list and return the graph.

    Raises GraphError on an out-of-range endpoint, a loop, or a duplicate
    edge (``(u, v)`` and ``(v, u)`` count as duplicates).
    """
    seen: set[tuple[int, int]] = set()
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge {(u, v)} has an endpoint outside 0..{n - 1}")
        if u == v:
            raise GraphError(f"loop at vertex {u}")
        key = _norm(u, v)
        if key in seen:
            raise GraphError(f"duplicate edge {key}")
        seen.add(key)
    return Graph(n, frozenset(seen), tuple(vcolor) if vcolor is not None else ())


def from_adjacency(a: np.ndarray) -> Graph:
    a = np.asarray(a)
    n = a.shape[0]
    iu, ju = np.nonzero(np.triu(a, 1))
    return Graph(n, frozenset(zip(iu.tolist(), ju.tolist())))


def complement(g: Graph) -> Graph:
    edges = frozenset(
        (u, v) for u in range(g.n) for v in range(u + 1, g.n) if (u, v) not in g.edges
    )
    return Graph(g.n, edges, g.vcolor)


def disjoint_union(g: Graph, h: Graph) -> Graph:
    shift = g.n
    edges = g.edges | frozenset((u + shift, v + shift) for u, v in h.edges)
    return Graph(g.n + h.n, edges, g.vcolor + h.vcolor)


def disjoint_union_many(graphs: Sequence[Graph]) -> Graph:
    out = Graph(0, frozenset())
    for g in graphs:
        out = disjoint_union(out, g)
    return out


# ---- small named graphs used as fixtures throughout ----

def complete(n: int) -> Graph:
    return Graph(n, frozenset((u, v) for u in range(n) for v in range(u + 1, n)))


def empty(n: int) -> Graph:
    return Graph(n, frozenset())


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return Graph(n, frozenset(_norm(i, (i + 1) % n) for i in range(n)))


def path(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def star(leaves: int) -> Graph:
    """K_{1,leaves} with center 0."""
    return Graph(leaves + 1, frozenset((0, i) for i in range(1, leaves + 1)))


def complete_bipartite(s: int, t: int) -> Graph:
    return Graph(s + t, frozenset((u, s + v) for u in range(s) for v in range(t)))


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return build(10, outer + spokes + inner)


def rook(a: int, b: int | None = None) -> Graph:
    """The a x b rook's graph: cells of a grid, adjacent when sharing a row or column."""
    b = a if b is None else b
    edges = []
    for x in range(a * b):
        for y in range(x + 1, a * b):
            if x // b == y // b or x % b == y % b:
                edges.append((x, y))
    return build(a * b, edges)


# ---- invariants ----

def common_neighbors(g: Graph) -> np.ndarray:
    """Matrix of |N(u) ∩ N(v)|; the diagonal holds degrees."""
    a = g.adjacency.astype(np.int64)
    return a @ a


def nu_pair(g: Graph, u: int, v: int) -> int:
    if u == v:
        raise GraphError("nu_pair needs two distinct vertices")
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise GraphError("vertex out of range")
    return len(set(g.neighbors[u]) & set(g.neighbors[v]))


def nu(g: Graph) -> int:
    """Largest number of common neighbors over pairs of distinct vertices."""
    if g.n <= 1:
        return 0
    c = common_neighbors(g)
    np.fill_diagonal(c, -1)
    return int(c.max())


def bfs_distances(g: Graph, source: int) -> list[int]:
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    nb = g.neighbors
    while queue:
        x = queue.popleft()
        for y in nb[x]:
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def components(g: Graph) -> list[list[int]]:
    """Connected components, each sorted, ordered by smallest vertex."""
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        comp = []
        stack = [s]
        seen[s] = True
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in g.neighbors[x]:
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        out.append(sorted(comp))
    return out


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


def diameter(g: Graph) -> float:
    """Exact diameter; ``math.inf`` when disconnected, 0 for n <= 1."""
    if g.n <= 1:
        return 0
    best = 0
    for s in range(g.n):
        d = bfs_distances(g, s)
        if min(d) < 0:
            return math.inf
        best = max(best, max(d))
    return best


def girth(g: Graph) -> float:
    """Length of a shortest cycle (``math.inf`` for forests), by BFS from every vertex."""
    best = math.inf
    nb = g.neighbors
    for s in range(g.n):
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            if 2 * dist[x] + 1 >= best:
                break
            for y in nb[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
    return best


def regular_degree(g: Graph) -> int | None:
    degs = set(g.degrees())
    if len(degs) == 1:
        return degs.pop()
    if g.n == 0:
        return 0
    return None


@dataclass(frozen=True)
class BasicStats:
    regular_degree: int | None
    connected: bool
    diameter: float
    girth: float


def basic_stats(g: Graph) -> BasicStats:
    return BasicStats(regular_degree(g), is_connected(g), diameter(g), girth(g))


def srg_parameters(g: Graph) -> tuple[int, int, int, int] | None:
    """(n, d, lambda, mu) by direct common-neighbor counting, or None.

    Follows the plain definition, so complete, empty and disjoint unions of
    equal cliques count as strongly regular (lambda or mu may be vacuous and
    is then reported as -1).
    """
    d = regular_degree(g)
    if d is None:
        return None
    c = common_neighbors(g)
    a = g.adjacency.astype(bool)
    off = ~np.eye(g.n, dtype=bool)
    lam = set(c[a].tolist())
    mu = set(c[off & ~a].tolist())
    if len(lam) > 1 or len(mu) > 1:
        return None
    return (g.n, d, lam.pop() if lam else -1, mu.pop() if mu else -1)
