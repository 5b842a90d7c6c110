"""Exact automorphism groups and isomorphisms by individualization-refinement.

The search tree is the usual one: refine, pick the smallest non-singleton
cell, individualize each of its vertices in turn. The leftmost path fixes a
base b_0, b_1, ... and a reference leaf. Levels are processed bottom-up; at
level i every vertex x of the target cell that is not yet in the orbit of b_i
is tested by an exhaustive search below x for a leaf whose induced map is an
automorphism. The generators found at levels >= i therefore generate the
pointwise stabilizer of b_0..b_{i-1}, and the group order is the product of
the basic orbit lengths.

Pruning is sound only: subtrees are skipped when their refinement invariant
differs from the reference path, or when a known automorphism fixing the
current prefix maps them onto an already explored sibling.

Disconnected graphs are split into components; isomorphic components
contribute swap generators and a factorial factor.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import BudgetExceeded
from .graph import Graph, components
from .wl import dense_rank, refine_tuples, refine_vertex_colors

DEFAULT_ORACLE_BUDGET = 120
WL2_REFINEMENT_MAX_N = 32


# --------------------------------------------------------------------------
# permutation helpers
# --------------------------------------------------------------------------

def orbit_labels(gens: Sequence[np.ndarray], n: int) -> np.ndarray:
    """Orbit id per point (ids are arbitrary but equal within an orbit)."""
    if not gens or n == 0:
        return np.arange(n)
    src = np.concatenate([np.arange(n)] * len(gens))
    dst = np.concatenate(gens)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    _, labels = connected_components(graph, directed=True, connection="weak")
    return labels


def orbits(gens: Sequence[np.ndarray], n: int) -> list[list[int]]:
    labels = orbit_labels(gens, n)
    out: dict[int, list[int]] = {}
    for v, lab in enumerate(labels.tolist()):
        out.setdefault(lab, []).append(v)
    return sorted(out.values())


def arc_orbits(g: Graph, gens: Sequence[np.ndarray]) -> list[list[tuple[int, int]]]:
    """Orbits of the group generated by ``gens`` on ordered adjacent pairs."""
    n = g.n
    arcs = [(u, v) for u, v in g.sorted_edges()] + [(v, u) for u, v in g.sorted_edges()]
    if not arcs:
        return []
    a = np.array(arcs, dtype=np.int64)
    code = a[:, 0] * n + a[:, 1]
    index = np.full(n * n, -1, dtype=np.int64)
    index[code] = np.arange(len(arcs))
    src, dst = [], []
    for p in gens:
        src.append(np.arange(len(arcs)))
        dst.append(index[p[a[:, 0]] * n + p[a[:, 1]]])
    if src:
        graph = coo_matrix(
            (np.ones(len(arcs) * len(gens), dtype=np.int8), (np.concatenate(src), np.concatenate(dst))),
            shape=(len(arcs), len(arcs)),
        )
        _, labels = connected_components(graph, directed=True, connection="weak")
    else:
        labels = np.arange(len(arcs))
    out: dict[int, list[tuple[int, int]]] = {}
    for i, lab in enumerate(labels.tolist()):
        out.setdefault(lab, []).append(arcs[i])
    return sorted(sorted(o) for o in out.values())


def is_automorphism(g: Graph, perm: Sequence[int]) -> bool:
    p = np.asarray(perm)
    if sorted(p.tolist()) != list(range(g.n)):
        return False
    a = g.adjacency
    vc = np.asarray(g.vcolor)
    return bool(np.array_equal(a[np.ix_(p, p)], a) and np.array_equal(vc[p], vc))


def is_isomorphism(g: Graph, h: Graph, perm: Sequence[int]) -> bool:
    """Whether u -> perm[u] maps g onto h, colors included."""
    if g.n != h.n:
        return False
    p = np.asarray(perm)
    if sorted(p.tolist()) != list(range(g.n)):
        return False
    return bool(
        np.array_equal(h.adjacency[np.ix_(p, p)], g.adjacency)
        and np.array_equal(np.asarray(h.vcolor)[p], np.asarray(g.vcolor))
    )


# --------------------------------------------------------------------------
# search tree
# --------------------------------------------------------------------------

@dataclass
class _Node:
    colors: np.ndarray
    invariant: bytes
    cell: np.ndarray | None  # target cell, None at a leaf


class _Refiner:
    def __init__(self, g: Graph, method: str):
        self.g = g
        self.method = method
        self.adj = g.adjacency.astype(float)
        self.nodes_visited = 0

    def _make_node(self, colors: np.ndarray, payload: bytes) -> _Node:
        self.nodes_visited += 1
        counts = np.bincount(colors)
        inv = hashlib.blake2b(payload, digest_size=16).digest()
        if len(counts) == len(colors):
            return _Node(colors, inv, None)
        sizes = np.where(counts > 1, counts, np.iinfo(np.int64).max)
        target = int(np.argmin(sizes))
        return _Node(colors, inv, np.nonzero(colors == target)[0])

    def refine(self, colors: np.ndarray) -> _Node:
        colors = dense_rank(colors)
        if self.method == "wl2":
            res = refine_tuples([self.g.with_colors(colors.tolist())], 2, positions=[1, 0])
            pair = res.colors[0].reshape(self.g.n, self.g.n)
            diag = dense_rank(np.diagonal(pair))
            payload = np.bincount(pair.reshape(-1)).tobytes() + b"|" + np.bincount(diag).tobytes()
            return self._make_node(diag, payload)
        new, _, table = refine_vertex_colors(self.adj, colors)
        return self._make_node(new, table.tobytes() + bytes([table.shape[1] % 256]))

    def root(self) -> _Node:
        return self.refine(np.asarray(self.g.vcolor, dtype=np.int64))

    def child(self, node: _Node, v: int) -> _Node:
        c = node.colors * 2 + 1
        c[v] -= 1
        return self.refine(c)


def _leaf_map(ref_leaf: _Node, leaf: _Node) -> np.ndarray:
    """Permutation sending the vertex at reference position c to the vertex at position c."""
    where = np.argsort(leaf.colors)
    return where[ref_leaf.colors]


@dataclass
class _Tree:
    g: Graph
    refiner: _Refiner
    path: list[_Node]
    base: list[int]

    @classmethod
    def build(cls, g: Graph, method: str) -> _Tree:
        ref = _Refiner(g, method)
        node = ref.root()
        path, base = [node], []
        while node.cell is not None:
            v = int(node.cell[0])
            base.append(v)
            node = ref.child(node, v)
            path.append(node)
        return cls(g, ref, path, base)

    @property
    def leaf(self) -> _Node:
        return self.path[-1]


def _search(
    refiner: _Refiner,
    reference: list[_Node],
    node: _Node,
    depth: int,
    prefix: list[int],
    accept: Callable[[np.ndarray], bool],
    group_for: Callable[[int, list[int]], list[np.ndarray]],
    preferred: Callable[[int, list[int]], int | None],
) -> np.ndarray | None:
    """Depth-first search below ``node`` for a leaf accepted as a reference match."""
    if node.cell is None:
        perm = _leaf_map(reference[-1], node)
        return perm if accept(perm) else None
    n = len(node.colors)
    group = group_for(depth, prefix)
    labels = orbit_labels(group, n)
    cell = node.cell.tolist()
    first_choice = preferred(depth, prefix)
    if first_choice is not None and first_choice in cell:
        cell.remove(first_choice)
        cell.insert(0, first_choice)
    tried: set[int] = set()
    want = reference[depth + 1].invariant
    for y in cell:
        lab = int(labels[y])
        if lab in tried:
            continue
        tried.add(lab)
        ch = refiner.child(node, y)
        if ch.invariant != want:
            continue
        found = _search(refiner, reference, ch, depth + 1, prefix + [y], accept, group_for, preferred)
        if found is not None:
            return found
    return None


def _fixing(gens: Sequence[np.ndarray], prefix: Sequence[int]) -> list[np.ndarray]:
    if not prefix:
        return list(gens)
    pre = np.asarray(prefix)
    return [p for p in gens if np.array_equal(p[pre], pre)]


@dataclass
class _ConnectedAut:
    tree: _Tree
    gens: list[np.ndarray]
    levels: list[int]
    basic_orbits: list[int]

    @property
    def order(self) -> int:
        return math.prod(self.basic_orbits)


def _default_method(n: int) -> str:
    return "wl2" if n <= WL2_REFINEMENT_MAX_N else "wl1"


@lru_cache(maxsize=256)
def _aut_connected(g: Graph, method: str) -> _ConnectedAut:
    tree = _Tree.build(g, method)
    gens: list[np.ndarray] = []
    levels: list[int] = []
    basic = [1] * len(tree.base)
    accept = lambda p: is_automorphism(g, p)  # noqa: E731
    group_for = lambda depth, prefix: _fixing(gens, prefix)  # noqa: E731
    no_pref = lambda depth, prefix: None  # noqa: E731
    for i in reversed(range(len(tree.base))):
        node = tree.path[i]
        b = tree.base[i]
        labels = orbit_labels(gens, g.n)
        for x in node.cell.tolist():
            if labels[x] == labels[b]:
                continue
            ch = tree.refiner.child(node, x)
            if ch.invariant != tree.path[i + 1].invariant:
                continue
            found = _search(
                tree.refiner, tree.path, ch, i + 1, tree.base[:i] + [x], accept, group_for, no_pref
            )
            if found is not None:
                gens.append(found)
                levels.append(i)
                labels = orbit_labels(gens, g.n)
        basic[i] = int(np.count_nonzero(labels == labels[b]))
    return _ConnectedAut(tree, gens, levels, basic)


def _isomorphism_connected(g: Graph, h: Graph, method: str) -> np.ndarray | None:
    if g.n != h.n or g.m != h.m or sorted(g.degrees()) != sorted(h.degrees()):
        return None
    if sorted(g.vcolor) != sorted(h.vcolor):
        return None
    ref = _Tree.build(g, method)
    target = _aut_connected(h, method)
    tt = target.tree
    root = tt.path[0]
    if root.invariant != ref.path[0].invariant:
        return None

    def on_base(prefix: list[int]) -> bool:
        return prefix == tt.base[: len(prefix)]

    def group_for(depth: int, prefix: list[int]) -> list[np.ndarray]:
        if on_base(prefix):
            return [p for p, lev in zip(target.gens, target.levels) if lev >= depth]
        return _fixing(target.gens, prefix)

    def preferred(depth: int, prefix: list[int]) -> int | None:
        if on_base(prefix) and depth < len(tt.base):
            return tt.base[depth]
        return None

    return _search(
        tt.refiner,
        ref.path,
        root,
        0,
        [],
        lambda p: is_isomorphism(g, h, p),
        group_for,
        preferred,
    )


# --------------------------------------------------------------------------
# public API
# --------------------------------------------------------------------------

@dataclass
class AutomorphismReport:
    n: int
    generators: list[tuple[int, ...]]
    vertex_orbits: list[list[int]]
    arc_orbits: list[list[tuple[int, int]]]
    group_order: int
    basic_orbits: list[int] = field(default_factory=list)

    @property
    def vertex_transitive(self) -> bool:
        return len(self.vertex_orbits) <= 1

    @property
    def arc_transitive(self) -> bool:
        return len(self.arc_orbits) <= 1

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "group_order": self.group_order,
            "generators": [list(p) for p in self.generators],
            "vertex_orbits": self.vertex_orbits,
            "arc_orbits": [[list(a) for a in o] for o in self.arc_orbits],
        }


def _check_budget(g: Graph, budget: int | None) -> list[list[int]]:
    limit = DEFAULT_ORACLE_BUDGET if budget is None else budget
    comps = components(g)
    biggest = max((len(c) for c in comps), default=0)
    if biggest > limit:
        raise BudgetExceeded("automorphism oracle (largest component size)", biggest, limit)
    return comps


def _component_classes(g: Graph, comps: list[list[int]], method: str | None):
    """Group components into isomorphism classes; returns (subgraphs, classes, maps)."""
    subs = [g.induced(c) for c in comps]
    classes: list[list[int]] = []
    maps: dict[int, np.ndarray] = {}  # component index -> isomorphism from its class representative
    for i, s in enumerate(subs):
        for cls in classes:
            rep = subs[cls[0]]
            if rep.n != s.n or rep.m != s.m:
                continue
            phi = _isomorphism_connected(rep, s, method or _default_method(s.n))
            if phi is not None:
                cls.append(i)
                maps[i] = phi
                break
        else:
            classes.append([i])
    return subs, classes, maps


def automorphisms(g: Graph, budget: int | None = None, method: str | None = None) -> AutomorphismReport:
    """Generators, exact order, vertex orbits and arc orbits of Aut(g).

    ``budget`` bounds the size of the largest connected component (default
    120). ``method`` picks the refinement inside the search: "wl2" (default
    up to 32 vertices per component) or "wl1".
    """
    n = g.n
    comps = _check_budget(g, budget)
    subs, classes, maps = _component_classes(g, comps, method)
    gens: list[np.ndarray] = []
    order = 1
    basic: list[int] = []
    for cls in classes:
        rep = cls[0]
        sub = subs[rep]
        verts = np.asarray(comps[rep])
        aut = _aut_connected(sub, method or _default_method(sub.n))
        order *= aut.order ** len(cls) * math.factorial(len(cls))
        basic.extend(aut.basic_orbits)
        for p in aut.gens:
            full = np.arange(n)
            full[verts] = verts[p]
            gens.append(full)
        for a, b in zip(cls, cls[1:]):
            # swap component a and component b via rep->a and rep->b maps
            va, vb = np.asarray(comps[a]), np.asarray(comps[b])
            to_a = maps.get(a, np.arange(len(va)))
            to_b = maps.get(b, np.arange(len(vb)))
            full = np.arange(n)
            full[va[to_a]] = vb[to_b]
            full[vb[to_b]] = va[to_a]
            gens.append(full)
    for p in gens:
        if not is_automorphism(g, p):
            raise AssertionError("search produced a non-automorphism")
    return AutomorphismReport(
        n=n,
        generators=[tuple(int(x) for x in p) for p in gens],
        vertex_orbits=orbits(gens, n),
        arc_orbits=arc_orbits(g, gens),
        group_order=order,
        basic_orbits=basic,
    )


def find_isomorphism(g: Graph, h: Graph, budget: int | None = None, method: str | None = None) -> list[int] | None:
    """A vertex map g -> h preserving edges and colors, or None."""
    if g.n != h.n or g.m != h.m or sorted(g.degrees()) != sorted(h.degrees()):
        return None
    cg, ch = _check_budget(g, budget), _check_budget(h, budget)
    if sorted(map(len, cg)) != sorted(map(len, ch)):
        return None
    sub_h = [h.induced(c) for c in ch]
    used = [False] * len(ch)
    perm = np.zeros(g.n, dtype=np.int64)
    for comp in cg:
        sg = g.induced(comp)
        for j, sh in enumerate(sub_h):
            if used[j] or sh.n != sg.n or sh.m != sg.m:
                continue
            phi = _isomorphism_connected(sg, sh, method or _default_method(sg.n))
            if phi is not None:
                used[j] = True
                perm[np.asarray(comp)] = np.asarray(ch[j])[phi]
                break
        else:
            return None
    result = perm.tolist()
    if not is_isomorphism(g, h, result):
        raise AssertionError("search produced a non-isomorphism")
    return result


def are_isomorphic(g: Graph, h: Graph, budget: int | None = None, method: str | None = None) -> bool:
    return find_isomorphism(g, h, budget, method) is not None
