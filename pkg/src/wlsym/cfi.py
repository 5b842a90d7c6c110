"""Colorless CFI graphs over regular templates, twist sets and separator analysis."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import AssumptionViolated, GraphError
from .graph import Graph, build, components, diameter, disjoint_union_many, is_connected, nu, regular_degree

EXACT_SEPARATOR_BUDGET = 16

Edge = tuple[int, int]


def _norm(e: Iterable[int]) -> Edge:
    u, v = e
    return (u, v) if u < v else (v, u)


def even_vectors(k: int) -> list[tuple[int, ...]]:
    """Even-weight vectors of {0,1}^k in lexicographic order."""
    return [x for x in itertools.product((0, 1), repeat=k) if sum(x) % 2 == 0]


@dataclass(frozen=True, eq=False)
class CfiGraph:
    base: Graph
    template: Graph
    k: int
    twists: frozenset[Edge]
    cell: tuple[tuple[int, ...], ...]
    vectors: tuple[tuple[int, ...], ...] = field(repr=False)

    def cell_of(self) -> np.ndarray:
        """Template vertex owning each base vertex."""
        return np.arange(self.base.n) // (2 ** (self.k - 1))

    def vector(self, x: int) -> tuple[int, ...]:
        return self.vectors[x % (2 ** (self.k - 1))]

    def slice(self, v: int, u: int, b: int) -> tuple[int, ...]:
        """X_u^b(v): the vertices of Q(v) whose coordinate at u equals b."""
        pos = self.template.neighbors[v].index(u)
        return tuple(x for x in self.cell[v] if self.vector(x)[pos] == b)


def cfi(template: Graph, twists: Iterable[Iterable[int]] = ()) -> CfiGraph:
    """The CFI graph A^S of a connected k-regular template.

    Q(v) holds the even vectors indexed by the sorted neighbors of v; x in
    Q(v) and y in Q(u) are adjacent iff x_u = y_v, flipped when uv is in S.
    Vertex v * 2^(k-1) + i is the i-th vector of Q(v).
    """
    k = regular_degree(template)
    if k is None:
        raise GraphError("template is not regular")
    if k < 2:
        raise GraphError("template degree must be at least 2")
    if not is_connected(template):
        raise GraphError("template is not connected")
    s = frozenset(_norm(e) for e in twists)
    missing = s - template.edges
    if missing:
        raise GraphError(f"twist edges {sorted(missing)} are not template edges")

    vecs = even_vectors(k)
    size = len(vecs)
    bits = np.array(vecs, dtype=np.int8)
    nbrs = template.neighbors
    edges = []
    for v, u in template.sorted_edges():
        xu = bits[:, nbrs[v].index(u)]
        yv = bits[:, nbrs[u].index(v)]
        flip = 1 if (v, u) in s else 0
        ii, jj = np.nonzero(xu[:, None] == (yv[None, :] ^ flip))
        edges.extend(zip((v * size + ii).tolist(), (u * size + jj).tolist()))
    base = build(template.n * size, edges)
    cells = tuple(tuple(range(v * size, (v + 1) * size)) for v in range(template.n))
    return CfiGraph(base, template, k, s, cells, tuple(vecs))


def smallest_edge(f: Graph) -> Edge:
    return min(f.edges)


def check_assumption(f: Graph) -> None:
    """Raise AssumptionViolated naming the first failing clause."""
    k = regular_degree(f)
    if k is None:
        raise AssumptionViolated("regular", "template is not regular")
    if k < 3:
        raise AssumptionViolated("k>=3", f"template degree is {k}")
    if not is_connected(f):
        raise AssumptionViolated("connected", "template is disconnected")
    if nu(f) >= 2 * k - 4:
        raise AssumptionViolated("nu<2k-4", f"nu = {nu(f)} but 2k-4 = {2 * k - 4}")


def assumption_holds(f: Graph) -> bool:
    try:
        check_assumption(f)
    except AssumptionViolated:
        return False
    return True


def cfi_pair(f: Graph) -> tuple[CfiGraph, CfiGraph]:
    """A = cfi(F, {}) and B = cfi(F, {e}) for the smallest edge e."""
    check_assumption(f)
    return cfi(f), cfi(f, [smallest_edge(f)])


def twist_parity_check(f: Graph, r: Iterable[Iterable[int]], s: Iterable[Iterable[int]], budget: int | None = None) -> bool:
    """Exact isomorphism test between A^R and A^S."""
    from .automorphism import are_isomorphic

    check_assumption(f)
    return are_isomorphic(cfi(f, r).base, cfi(f, s).base, budget=budget)


# --------------------------------------------------------------------------
# structural checks
# --------------------------------------------------------------------------

def interspace_wiring(a: CfiGraph, v: int, u: int) -> str | None:
    """'matched' or 'crossed' if the edges between Q(v) and Q(u) form
    2K_{h,h} (h = 2^(k-2)) joining X_u^b(v) to X_v^b(u), resp. X_v^(1-b)(u);
    None for anything else."""
    if (min(u, v), max(u, v)) not in a.template.edges:
        return None
    adj = a.base.adjacency
    qv, qu = list(a.cell[v]), list(a.cell[u])
    block = adj[np.ix_(qv, qu)].astype(bool)
    h = 2 ** (a.k - 2)
    for name, flip in (("matched", 0), ("crossed", 1)):
        want = np.zeros_like(block)
        for b in (0, 1):
            rows = [qv.index(x) for x in a.slice(v, u, b)]
            cols = [qu.index(y) for y in a.slice(u, v, b ^ flip)]
            if len(rows) != h or len(cols) != h:
                return None
            want[np.ix_(rows, cols)] = True
        if np.array_equal(block, want):
            return name
    return None


def interspace_components(a: CfiGraph, v: int, u: int) -> list[tuple[int, int]]:
    """Side sizes of the connected components of the bipartite graph base[Q(v), Q(u)]."""
    verts = list(a.cell[v]) + list(a.cell[u])
    qv = set(a.cell[v])
    edges = [(x, y) for x, y in a.base.edges if (x in qv) != (y in qv) and x in verts and y in verts]
    sub = build(len(verts), [(verts.index(x), verts.index(y)) for x, y in edges])
    out = []
    for comp in components(sub):
        left = sum(1 for i in comp if verts[i] in qv)
        out.append((left, len(comp) - left))
    return sorted(out)


def is_complete_bipartite_pair(a: CfiGraph, v: int, u: int) -> bool:
    """Whether base[Q(v), Q(u)] is 2K_{h,h} with h = 2^(k-2)."""
    h = 2 ** (a.k - 2)
    comps = interspace_components(a, v, u)
    if comps != [(h, h), (h, h)]:
        return False
    block = a.base.adjacency[np.ix_(list(a.cell[v]), list(a.cell[u]))]
    return int(block.sum()) == 2 * h * h


def is_cell_partition_detected(a: CfiGraph) -> bool:
    """Whether the pairs realizing nu(base) connect exactly the cells."""
    adj = a.base.adjacency.astype(np.int64)
    common = adj @ adj
    np.fill_diagonal(common, -1)
    top = int(common.max())
    us, vs = np.nonzero(common == top)
    approx = build(a.base.n, {(int(x), int(y)) for x, y in zip(us, vs) if x < y})
    comps = sorted(tuple(c) for c in components(approx))
    return comps == sorted(a.cell)


# --------------------------------------------------------------------------
# separators and expansion
# --------------------------------------------------------------------------

def _masks(f: Graph) -> list[int]:
    return [sum(1 << u for u in f.neighbors[v]) for v in range(f.n)]


def _largest_component(nbr: list[int], alive: int) -> int:
    best = 0
    while alive:
        start = alive & -alive
        comp = start
        frontier = start
        while frontier:
            grow = 0
            m = frontier
            while m:
                low = m & -m
                grow |= nbr[low.bit_length() - 1]
                m ^= low
            frontier = grow & alive & ~comp
            comp |= frontier
        best = max(best, comp.bit_count())
        alive &= ~comp
    return best


def separator_number(f: Graph) -> tuple[int, tuple[int, ...]]:
    """Exact s(F) with a witness, by search over subsets of increasing size."""
    n = f.n
    nbr = _masks(f)
    full = (1 << n) - 1
    for size in range(n + 1):
        for xs in itertools.combinations(range(n), size):
            alive = full
            for x in xs:
                alive &= ~(1 << x)
            if 2 * _largest_component(nbr, alive) <= n:
                return size, xs
    raise AssertionError("unreachable: removing every vertex is a separator")


def vertex_expansion(f: Graph) -> Fraction:
    """Exact h_out(F): min |outer boundary of S| / |S| over 0 < |S| <= v/2."""
    n = f.n
    if n < 2:
        raise GraphError("vertex expansion needs at least two vertices")
    nbr = np.array(_masks(f), dtype=np.int64)
    total = 1 << n
    union = np.zeros(total, dtype=np.int64)
    pop = np.zeros(total, dtype=np.int64)
    for i in range(n):
        lo, hi = 1 << i, 1 << (i + 1)
        union[lo:hi] = union[:lo] | nbr[i]
        pop[lo:hi] = pop[:lo] + 1
    masks = np.arange(total, dtype=np.int64)
    boundary = union & ~masks
    bpop = np.zeros(total, dtype=np.int64)
    b = boundary.copy()
    while b.any():
        bpop += b & 1
        b >>= 1
    ok = (pop > 0) & (2 * pop <= n)
    # minimise bpop/pop exactly: compare by cross multiplication
    best = None
    for size in np.unique(pop[ok]).tolist():
        sel = ok & (pop == size)
        cand = Fraction(int(bpop[sel].min()), int(size))
        if best is None or cand < best:
            best = cand
    return best


def separator_bound_from_expansion(h_out: Fraction | float, v: int) -> float:
    return float(h_out) / (3 + float(h_out)) * v


def separator_bound_from_diameter(diam: int, v: int) -> float:
    return v / (6 * diam + 1)


@dataclass
class TemplateReport:
    n: int
    k: int | None
    connected: bool
    nu: int
    assumption_ok: bool
    diameter: float
    vertex_transitive: bool | None
    separator_exact: int | None = None
    separator_witness: tuple[int, ...] | None = None
    h_out_exact: Fraction | None = None
    expansion_bound: float | None = None
    diameter_bound: float | None = None

    @property
    def k_bound(self) -> int:
        """Best known lower bound on s(F), at least 1."""
        if self.separator_exact is not None:
            return max(1, self.separator_exact)
        bounds = [b for b in (self.expansion_bound, self.diameter_bound) if b is not None]
        if not bounds:
            return 1
        return max(1, math.ceil(max(bounds) - 1e-9))

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "connected": self.connected,
            "nu": self.nu,
            "assumption_ok": self.assumption_ok,
            "diameter": self.diameter if math.isfinite(self.diameter) else None,
            "vertex_transitive": self.vertex_transitive,
            "separator_exact": self.separator_exact,
            "separator_witness": list(self.separator_witness) if self.separator_witness else None,
            "h_out_exact": str(self.h_out_exact) if self.h_out_exact is not None else None,
            "separator_lower_bounds": {
                "expansion": self.expansion_bound,
                "diameter": self.diameter_bound,
            },
            "k_bound": self.k_bound,
        }


def analyze_template(f: Graph, exact_separator_budget: int = EXACT_SEPARATOR_BUDGET) -> TemplateReport:
    """Degree, nu, the assumption, diameter, and s(F) exactly or bounded.

    The expansion bound uses the exact h_out when available; otherwise, and
    for the diameter bound, it relies on the vertex-expansion estimate for
    vertex-transitive graphs, so both are omitted when F is not
    vertex-transitive (or too large for the oracle to tell).
    """
    from .automorphism import automorphisms
    from .errors import BudgetExceeded

    k = regular_degree(f)
    conn = is_connected(f)
    diam = diameter(f)
    try:
        vt = len(automorphisms(f).vertex_orbits) == 1 if f.n else True
    except BudgetExceeded:
        vt = None
    rep = TemplateReport(
        n=f.n,
        k=k,
        connected=conn,
        nu=nu(f),
        assumption_ok=assumption_holds(f),
        diameter=diam,
        vertex_transitive=vt,
    )
    if f.n <= exact_separator_budget and f.n >= 2:
        rep.separator_exact, rep.separator_witness = separator_number(f)
        rep.h_out_exact = vertex_expansion(f)
        rep.expansion_bound = separator_bound_from_expansion(rep.h_out_exact, f.n)
    if vt and conn and f.n >= 2:
        rep.diameter_bound = separator_bound_from_diameter(int(diam), f.n)
        if rep.expansion_bound is None:
            rep.expansion_bound = separator_bound_from_expansion(1 / (2 * diam), f.n)
    return rep


def hard_pair(f: Graph, copies: int = 2, exact_separator_budget: int = EXACT_SEPARATOR_BUDGET) -> tuple[Graph, Graph, int]:
    """G = copies * A and H = (copies - 1) * A + B, with a lower bound on s(F)."""
    if copies < 2:
        raise GraphError("copies must be at least 2")
    a, b = cfi_pair(f)
    g = disjoint_union_many([a.base] * copies)
    h = disjoint_union_many([a.base] * (copies - 1) + [b.base])
    return g, h, analyze_template(f, exact_separator_budget).k_bound
