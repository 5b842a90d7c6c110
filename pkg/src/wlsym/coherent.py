"""Coherent configurations read off stable 2-WL partitions.

A configuration is stored as an n x n matrix of basis-relation ids. Ids come
straight from ``wl2`` (reflexive relations first) or, after ``restrict``, are
renumbered densely in the same order.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CoherenceError, GraphError
from .graph import Graph
from .wl import dense_rank, individualize, unique_rows, wl2

SAMPLE_ABOVE = 200


@dataclass(frozen=True, eq=False)
class CoherentConfiguration:
    n: int
    relation: np.ndarray  # (n, n) relation ids
    num_relations: int
    fibers: tuple[tuple[int, ...], ...]
    valency: dict[int, int]
    transpose: dict[int, int]
    reflexive: frozenset[int] = field(default_factory=frozenset)

    def pairs(self, rel: int) -> list[tuple[int, int]]:
        us, vs = np.nonzero(self.relation == rel)
        return list(zip(us.tolist(), vs.tolist()))

    def fiber_of(self) -> np.ndarray:
        out = np.empty(self.n, dtype=np.int64)
        for i, f in enumerate(self.fibers):
            out[list(f)] = i
        return out

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "num_relations": self.num_relations,
            "fibers": [list(f) for f in self.fibers],
            "reflexive": sorted(self.reflexive),
            "valency": {str(k): v for k, v in sorted(self.valency.items())},
            "transpose": {str(k): v for k, v in sorted(self.transpose.items())},
            "relation": self.relation.tolist(),
        }


def from_relation_matrix(relation: np.ndarray, strict: bool = False) -> CoherentConfiguration:
    """Wrap an arbitrary partition of V^2 given as an id matrix.

    Ids are renumbered densely (order preserving). Fields that the axioms
    would make well defined (valency, transpose) are filled on a best-effort
    basis so that ``verify_coherence`` can report what is wrong; with
    ``strict`` any inconsistency raises CoherenceError instead.
    """
    rel = np.asarray(relation, dtype=np.int64)
    n = rel.shape[0]
    rel = dense_rank(rel.reshape(-1)).reshape(n, n)
    m = int(rel.max()) + 1 if n else 0
    diag = np.diagonal(rel)
    reflexive = frozenset(int(x) for x in np.unique(diag))
    fibers = tuple(tuple(np.nonzero(diag == r)[0].tolist()) for r in sorted(reflexive))
    valency: dict[int, int] = {}
    transpose: dict[int, int] = {}
    for r in range(m):
        us, vs = np.nonzero(rel == r)
        outdeg = np.bincount(us, minlength=n)[np.unique(us)]
        if strict and len(set(outdeg.tolist())) != 1:
            raise CoherenceError(f"relation {r} has non-constant out-degree")
        valency[r] = int(outdeg.max())
        tvals = np.unique(rel[vs, us])
        if strict and len(tvals) != 1:
            raise CoherenceError(f"transpose of relation {r} is not a basis relation")
        transpose[r] = int(tvals[0])
    return CoherentConfiguration(n, rel, m, fibers, valency, transpose, reflexive)


def closure(g: Graph, budget: int | None = None) -> CoherentConfiguration:
    """Coherent closure of a (colored) graph: the stable 2-WL partition."""
    if g.n == 0:
        return CoherentConfiguration(0, np.zeros((0, 0), dtype=np.int64), 0, (), {}, {})
    return from_relation_matrix(wl2(g, budget).color, strict=True)


def one_point_extension(g: Graph, u: int, budget: int | None = None) -> CoherentConfiguration:
    """The extension at ``u``, computed as the closure of the individualized graph."""
    return closure(individualize(g, u), budget)


@dataclass
class CoherenceReport:
    violations: list[str]
    checked_pairs: int
    sampled: bool

    @property
    def ok(self) -> bool:
        return not self.violations


def _intersection_signatures(rel: np.ndarray, us: np.ndarray, vs: np.ndarray, m: int) -> np.ndarray:
    """For each (u, v): the sorted multiset of (rel[u, w], rel[w, v]) over w."""
    codes = rel[us, :] * m + rel[:, vs].T
    codes.sort(axis=1)
    return codes


def verify_coherence(
    x: CoherentConfiguration,
    mode: str = "auto",
    samples: int = 1000,
    seed: int = 0,
) -> CoherenceReport:
    """Check axioms A (loops), B (transposes) and C (intersection numbers).

    Axiom C is checked on every pair in ``full`` mode, O(n^3). In ``sample``
    mode only ``samples`` random pairs are compared against a reference pair
    of their relation. ``auto`` samples above 200 points.
    """
    rel = x.relation
    n = x.n
    m = x.num_relations
    violations: list[str] = []
    if n == 0:
        return CoherenceReport([], 0, False)

    diag = np.zeros((n, n), dtype=bool)
    np.fill_diagonal(diag, True)
    for r in range(m):
        mask = rel == r
        loops = int((mask & diag).sum())
        if loops and loops != int(mask.sum()):
            violations.append(f"A: relation {r} mixes loops and non-loops")
        tvals = np.unique(rel.T[mask])
        if len(tvals) != 1:
            violations.append(f"B: transpose of relation {r} meets relations {tvals.tolist()}")
        elif not np.array_equal(rel.T == r, rel == int(tvals[0])):
            violations.append(f"B: transpose of relation {r} is not exactly relation {int(tvals[0])}")

    fiber_of = np.full(n, -1, dtype=np.int64)
    for i, f in enumerate(x.fibers):
        fiber_of[list(f)] = i
    for r in range(m):
        us, vs = np.nonzero(rel == r)
        if len(np.unique(fiber_of[us])) != 1 or len(np.unique(fiber_of[vs])) != 1:
            violations.append(f"fibers: relation {r} is not inside a single X x Y")
            continue
        source = x.fibers[int(fiber_of[us[0]])]
        out = np.bincount(us, minlength=n)[list(source)]
        if len(np.unique(out)) != 1:
            violations.append(f"valency: relation {r} has out-degrees {sorted(set(out.tolist()))}")

    sampled = mode == "sample" or (mode == "auto" and n > SAMPLE_ABOVE)
    if sampled:
        rng = np.random.default_rng(seed)
        idx = rng.integers(0, n * n, size=samples)
        us, vs = idx // n, idx % n
        ref_u = np.empty(m, dtype=np.int64)
        ref_v = np.empty(m, dtype=np.int64)
        for r in range(m):
            a, b = np.nonzero(rel == r)
            ref_u[r], ref_v[r] = a[0], b[0]
        sig = _intersection_signatures(rel, us, vs, m)
        rs = rel[us, vs]
        ref = _intersection_signatures(rel, ref_u[rs], ref_v[rs], m)
        bad = np.nonzero((sig != ref).any(axis=1))[0]
        for i in bad[:20]:
            violations.append(
                f"C: pair {(int(us[i]), int(vs[i]))} differs from reference of relation {int(rs[i])}"
            )
        return CoherenceReport(violations, samples, True)

    grid_u, grid_v = np.indices((n, n))
    us, vs = grid_u.reshape(-1), grid_v.reshape(-1)
    sig = _intersection_signatures(rel, us, vs, m)
    table, inv = unique_rows(np.column_stack([rel.reshape(-1), sig]))
    per_rel = np.bincount(table[:, 0], minlength=m)
    for r in np.nonzero(per_rel > 1)[0]:
        violations.append(f"C: intersection numbers vary inside relation {int(r)}")
    return CoherenceReport(violations, n * n, False)


@dataclass(frozen=True)
class Constituent:
    relation: int
    outdegree: int
    reflexive: bool


def constituents(x: CoherentConfiguration) -> list[Constituent]:
    return [Constituent(r, x.valency[r], r in x.reflexive) for r in range(x.num_relations)]


def irreflexive_outdegrees(x: CoherentConfiguration) -> list[int]:
    return [c.outdegree for c in constituents(x) if not c.reflexive]


def diagonal_is_split(x: CoherentConfiguration) -> bool:
    return len(x.reflexive) > 1


def adjacency_relations(x: CoherentConfiguration, g: Graph) -> set[int]:
    if x.n != g.n:
        raise GraphError("configuration and graph have different point counts")
    a = g.adjacency.astype(bool)
    edge_rel = set(np.unique(x.relation[a]).tolist())
    other = set(np.unique(x.relation[~a]).tolist())
    if edge_rel & other:
        raise GraphError("configuration is not a refinement of the graph's adjacency")
    return edge_rel


def adjacency_is_split(x: CoherentConfiguration, g: Graph) -> bool:
    """Whether the arcs of ``g`` fall into more than one basis relation."""
    return len(adjacency_relations(x, g)) > 1


def restrict(x: CoherentConfiguration, points) -> CoherentConfiguration:
    """Restriction to a union of fibers, relations renumbered densely."""
    pts = sorted(set(int(p) for p in points))
    pset = set(pts)
    for f in x.fibers:
        inside = pset.intersection(f)
        if inside and len(inside) != len(f):
            raise GraphError(f"point set cuts fiber {list(f)}")
    sub = x.relation[np.ix_(pts, pts)]
    return from_relation_matrix(sub, strict=True)


def is_semiregular(x: CoherentConfiguration) -> bool:
    return all(x.valency[r] == 1 for r in range(x.num_relations))
