"""Weisfeiler-Leman refinement: 1-WL on vertices, 2-WL on pairs, k-WL on k-tuples.

All colorings use canonical dense ids. After each round every signature
(old color followed by the sorted multiset of neighbor color tuples) is ranked
lexicographically over the whole tuple space, and over all graphs at once in
joint mode, so ids are reproducible and comparable across graphs. Hashing is
used only to group equal rows quickly; groups are verified and ids come from
the lexicographic rank, never from the hash.

Since the old color leads every signature, new ids are ordered consistently
with old ids. In particular loops (initial type 0) keep the smallest ids, so
reflexive pair colors always come first.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded, GraphError
from .graph import Graph

DEFAULT_MEMORY_BUDGET = 2 * 1024**3
BUDGET_ENV = "WLSYM_MEMORY_BUDGET"
_WORK_BYTES = 192 * 1024**2
_INT63 = 2**63 - 1


def memory_budget(budget: int | None = None) -> int:
    if budget is not None:
        return int(budget)
    env = os.environ.get(BUDGET_ENV)
    return int(env) if env else DEFAULT_MEMORY_BUDGET


_HASH_MULT_CACHE: dict[int, np.ndarray] = {}


def _hash_multipliers(width: int) -> np.ndarray:
    mult = _HASH_MULT_CACHE.get(width)
    if mult is None:
        rng = np.random.default_rng(0x5EED)
        mult = rng.integers(1, 2**63, size=width, dtype=np.uint64) | np.uint64(1)
        _HASH_MULT_CACHE[width] = mult
    return mult


def unique_rows(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Distinct rows in lexicographic order, plus the inverse index.

    Same contract as ``np.unique(rows, axis=0, return_inverse=True)`` for
    non-negative integer rows, but groups rows through a 64-bit hash first.
    """
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    if rows.shape[0] == 0:
        return rows, np.zeros(0, dtype=np.int64)
    with np.errstate(over="ignore"):
        h = (rows.view(np.uint64) * _hash_multipliers(rows.shape[1])).sum(axis=1, dtype=np.uint64)
    hu, first, hinv = np.unique(h, return_index=True, return_inverse=True)
    reps = rows[first]
    if not np.array_equal(reps[hinv], rows):
        u, inv = np.unique(rows, axis=0, return_inverse=True)
        return u, inv.reshape(-1)
    order = np.lexsort(reps.T[::-1])
    rank = np.empty(len(order), dtype=np.int64)
    rank[order] = np.arange(len(order))
    return reps[order], rank[hinv.reshape(-1)]


def dense_rank(values: Sequence[int] | np.ndarray) -> np.ndarray:
    """Order-preserving relabel of arbitrary integers to 0..C-1."""
    _, inv = np.unique(np.asarray(values, dtype=np.int64), return_inverse=True)
    return inv.reshape(-1).astype(np.int64)


# --------------------------------------------------------------------------
# 1-WL
# --------------------------------------------------------------------------

def refine_vertex_colors(adj: np.ndarray, colors: np.ndarray) -> tuple[np.ndarray, int, np.ndarray]:
    """Stable 1-WL refinement of ``colors`` (dense) on a float adjacency matrix.

    Returns (colors, rounds, signature table of the final round).
    """
    n = adj.shape[0]
    colors = np.asarray(colors, dtype=np.int64)
    rounds = 0
    while True:
        c = int(colors.max()) + 1 if n else 0
        onehot = np.zeros((n, c))
        onehot[np.arange(n), colors] = 1.0
        counts = (adj @ onehot).astype(np.int64)
        table, new = unique_rows(np.column_stack([colors, counts]))
        if len(table) == c:
            return new, rounds, table
        colors = new
        rounds += 1


def wl1(g: Graph) -> np.ndarray:
    """Stable 1-WL (color refinement) vertex coloring with dense canonical ids."""
    if g.n == 0:
        return np.zeros(0, dtype=np.int64)
    colors, _, _ = refine_vertex_colors(g.adjacency.astype(float), dense_rank(g.vcolor))
    return colors


def color_classes(colors: np.ndarray) -> list[list[int]]:
    """Vertex classes of a coloring, ordered by color id."""
    out: dict[int, list[int]] = {}
    for v, c in enumerate(np.asarray(colors).tolist()):
        out.setdefault(c, []).append(v)
    return [out[c] for c in sorted(out)]


def individualize(g: Graph, u: int) -> Graph:
    """Copy of ``g`` in which ``u`` carries a color used nowhere else."""
    if not 0 <= u < g.n:
        raise GraphError(f"vertex {u} out of range 0..{g.n - 1}")
    colors = list(g.vcolor)
    colors[u] = max(colors) + 1
    return g.with_colors(colors)


# --------------------------------------------------------------------------
# tuple colorings
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TupleColoring:
    """Stable k-WL coloring; ``color`` has shape (n,)*k."""

    n: int
    k: int
    color: np.ndarray
    rounds: int

    @property
    def num_colors(self) -> int:
        return int(self.color.max()) + 1 if self.color.size else 0

    def histogram(self) -> np.ndarray:
        return np.bincount(self.color.reshape(-1), minlength=self.num_colors)

    def partition(self) -> frozenset[frozenset[tuple[int, ...]]]:
        """The induced partition of V^k, independent of the id values."""
        classes: dict[int, list[tuple[int, ...]]] = {}
        for idx, c in np.ndenumerate(self.color):
            classes.setdefault(int(c), []).append(idx)
        return frozenset(frozenset(v) for v in classes.values())

    def classes(self) -> list[dict]:
        flat = self.color.reshape(-1)
        colors, first, sizes = np.unique(flat, return_index=True, return_counts=True)
        return [
            {
                "color": int(c),
                "size": int(s),
                "representative_tuple": [int(x) for x in np.unravel_index(int(f), self.color.shape)],
            }
            for c, f, s in zip(colors, first, sizes)
        ]

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "num_colors": self.num_colors,
            "rounds": self.rounds,
            "classes": self.classes(),
        }


@dataclass(frozen=True, eq=False)
class PairColoring(TupleColoring):
    """Stable 2-WL coloring of V^2."""

    def __getitem__(self, uv: tuple[int, int]) -> int:
        return int(self.color[uv])

    def diagonal(self) -> np.ndarray:
        return np.diagonal(self.color).copy()


# --------------------------------------------------------------------------
# the tuple refinement engine
# --------------------------------------------------------------------------

def _initial_tuple_colors(graphs: Sequence[Graph], k: int) -> np.ndarray:
    """Atomic type of every k-tuple: equality pattern, ordered adjacency, vertex colors.

    Encoded in mixed radix so the integer order is the lexicographic order of
    (first-occurrence pattern, adjacency bits, vertex colors).
    """
    n = graphs[0].n
    vc = dense_rank(np.concatenate([np.asarray(g.vcolor, dtype=np.int64) for g in graphs]))
    ncol = int(vc.max()) + 1 if vc.size else 1
    grids = np.indices((n,) * k).reshape(k, -1)
    codes = []
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    for gi, g in enumerate(graphs):
        adj = g.adjacency
        colors = vc[gi * n:(gi + 1) * n]
        code = np.zeros(grids.shape[1], dtype=np.int64)
        for i in range(k):
            first = np.full(grids.shape[1], i, dtype=np.int64)
            for j in range(i - 1, -1, -1):
                first = np.where(grids[j] == grids[i], j, first)
            code = code * k + first
        for i, j in pairs:
            code = code * 2 + adj[grids[i], grids[j]]
        for i in range(k):
            code = code * ncol + colors[grids[i]]
        codes.append(code)
    return dense_rank(np.concatenate(codes)).reshape(len(graphs), -1)


def _chunks(total: int, size: int) -> Iterator[tuple[int, int]]:
    for start in range(0, total, size):
        yield start, min(total, start + size)


@dataclass
class _RefineResult:
    colors: np.ndarray  # (graphs, n^k)
    rounds: int
    split_round: int | None  # joint mode: first round whose per-graph histograms differ


def _histograms_differ(colors: np.ndarray) -> bool:
    m = int(colors.max()) + 1
    hist = [np.bincount(c, minlength=m) for c in colors]
    return any(not np.array_equal(hist[0], h) for h in hist[1:])


def refine_tuples(
    graphs: Sequence[Graph],
    k: int,
    *,
    positions: Sequence[int] | None = None,
    budget: int | None = None,
    stop_when_split: bool = False,
) -> _RefineResult:
    """Joint stable k-WL refinement of equally sized graphs.

    ``positions`` fixes the order in which the k substituted tuples enter a
    signature entry; it changes the ids but not the partition.
    """
    if k < 2:
        raise ValueError("tuple refinement needs k >= 2")
    n = graphs[0].n
    if any(g.n != n for g in graphs):
        raise ValueError("joint refinement needs graphs of equal order")
    positions = list(range(k)) if positions is None else list(positions)
    total = n**k
    ng = len(graphs)
    budget = memory_budget(budget)
    fixed = ng * total * 8 * 4
    row_bytes = 8 * (n + 1) * 5
    chunk = max(1, min(total, _WORK_BYTES // max(1, row_bytes)))
    required = fixed + chunk * row_bytes
    if required > budget:
        raise BudgetExceeded(f"{k}-WL on {ng} graph(s) with n={n}", required, budget)

    colors = _initial_tuple_colors(graphs, k)
    split_round = 0 if ng > 1 and _histograms_differ(colors) else None
    if split_round is not None and stop_when_split:
        return _RefineResult(colors, 0, split_round)
    if n == 0:
        return _RefineResult(colors, 0, split_round)

    place = [n ** (k - 1 - i) for i in range(k)]
    w = np.arange(n, dtype=np.int64)
    rounds = 0
    while True:
        m = int(colors.max()) + 1
        if m > 1 and k * np.log2(float(m)) >= 62:
            raise BudgetExceeded("signature code width (colors^k)", m**k, _INT63)
        local_tables = []
        local_inverse = []
        stored = 0
        for gi in range(ng):
            cflat = colors[gi]
            for t0, t1 in _chunks(total, chunk):
                t = np.arange(t0, t1, dtype=np.int64)
                code = None
                for i in positions:
                    digit = (t // place[i]) % n
                    idx = (t - digit * place[i])[:, None] + w[None, :] * place[i]
                    vals = cflat[idx]
                    code = vals if code is None else code * m + vals
                code.sort(axis=1)
                rows = np.concatenate([cflat[t0:t1, None], code], axis=1)
                table, inv = unique_rows(rows)
                stored += table.nbytes
                if fixed + stored + chunk * row_bytes > budget:
                    raise BudgetExceeded(
                        f"{k}-WL signature tables (n={n})", fixed + stored + chunk * row_bytes, budget
                    )
                local_tables.append(table)
                local_inverse.append(inv)
        merged, ginv = unique_rows(np.concatenate(local_tables))
        offsets = np.cumsum([0] + [len(t) for t in local_tables])
        new = np.concatenate(
            [ginv[offsets[j] + inv] for j, inv in enumerate(local_inverse)]
        ).reshape(ng, total)
        if len(merged) == m:
            return _RefineResult(new, rounds, split_round)
        colors = new
        rounds += 1
        if split_round is None and ng > 1 and _histograms_differ(colors):
            split_round = rounds
            if stop_when_split:
                return _RefineResult(colors, rounds, split_round)


# --------------------------------------------------------------------------
# public WL operations
# --------------------------------------------------------------------------

def wl2(g: Graph, budget: int | None = None) -> PairColoring:
    """Stable 2-WL coloring.

    Initial color of (u, v) is (type, c(u), c(v)) with type loop < nonedge <
    edge; a round maps (u, v) to its old color plus the multiset of
    (color(u, w), color(w, v)) over all w.
    """
    res = refine_tuples([g], 2, positions=[1, 0], budget=budget)
    return PairColoring(g.n, 2, res.colors[0].reshape(g.n, g.n), res.rounds)


def wlk(g: Graph, k: int, budget: int | None = None) -> TupleColoring:
    if k < 2:
        raise ValueError("wlk needs k >= 2; use wl1 for vertex refinement")
    res = refine_tuples([g], k, budget=budget)
    return TupleColoring(g.n, k, res.colors[0].reshape((g.n,) * k), res.rounds)


@dataclass(frozen=True)
class DistinguishResult:
    distinguished: bool
    k: int
    rounds: int
    split_round: int | None  # round at which the palettes first differed

    def __bool__(self):
        return self.distinguished


def distinguish_report(g: Graph, h: Graph, k: int, budget: int | None = None) -> DistinguishResult:
    if k < 2:
        raise ValueError("distinguish needs k >= 2")
    if g.n != h.n:
        return DistinguishResult(True, k, 0, 0)
    res = refine_tuples([g, h], k, budget=budget, stop_when_split=True)
    return DistinguishResult(res.split_round is not None, k, res.rounds, res.split_round)


def distinguish(g: Graph, h: Graph, k: int, budget: int | None = None) -> bool:
    """True iff k-WL, run jointly with shared color names, yields different palettes."""
    return distinguish_report(g, h, k, budget).distinguished


def is_wl_sk_regular(g: Graph, s: int, k: int, budget: int | None = None) -> bool:
    """Whether stable k-WL splits s-tuples only where their initial colors differ.

    An s-tuple (s < k) is read as the k-tuple obtained by cloning its last
    entry k - s times.
    """
    if s < 1:
        raise ValueError("s must be at least 1")
    if s > k:
        raise ValueError(f"s={s} exceeds k={k}")
    if k == 1:
        initial = dense_rank(g.vcolor)
        return len(set(wl1(g).tolist())) == len(set(initial.tolist()))
    n = g.n
    res = refine_tuples([g], k, budget=budget)
    stable = res.colors[0].reshape((n,) * k)
    initial = _initial_tuple_colors([g], k)[0].reshape((n,) * k)
    grids = np.indices((n,) * s)
    full = tuple(grids[i] for i in range(s)) + tuple(grids[s - 1] for _ in range(k - s))
    st = stable[full].reshape(-1)
    ini = initial[full].reshape(-1)
    pairs = np.unique(np.column_stack([ini, st]), axis=0)
    # the stable partition refines the initial one, so equal class counts mean no split
    return len(pairs) == len(np.unique(ini))
