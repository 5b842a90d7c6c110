"""Vertex- and arc-transitivity of prime-order graphs read off 2-WL colorings.

For p prime and G neither complete nor empty, G is vertex-transitive iff

  c1. 2-WL does not split the diagonal of G;
  c2. all irreflexive constituents of the closure have one outdegree d;
  c3. for every vertex u, the closure of G_u has exactly (p-1)/d
      constituents of outdegree d and all other constituents have outdegree 1.

A vertex-transitive G of prime order is arc-transitive iff its adjacency
relation is a single basis relation of the closure.

The exact answers come from the automorphism oracle.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

from sympy import isprime

from .automorphism import AutomorphismReport, automorphisms
from .coherent import (
    adjacency_is_split,
    closure,
    constituents,
    diagonal_is_split,
    irreflexive_outdegrees,
    one_point_extension,
)
from .errors import GraphError
from .graph import Graph

YES, NO, NOT_APPLICABLE = "yes", "no", "not-applicable"


@dataclass
class Conditions:
    c1: bool | None = None
    c2: bool | None = None
    d: int | None = None
    c3: bool | None = None
    adjacency_unsplit: bool | None = None


@dataclass
class RecognitionVerdict:
    answer: str
    conditions: Conditions = field(default_factory=Conditions)
    witness: str | None = None
    trivial: bool | None = None  # the direct answer for complete/empty graphs

    @property
    def holds(self) -> bool:
        """The decided property, with complete/empty graphs counted as transitive."""
        if self.answer == NOT_APPLICABLE:
            return bool(self.trivial)
        return self.answer == YES

    def to_json_dict(self) -> dict:
        return {
            "answer": self.answer,
            "holds": self.holds,
            "conditions": asdict(self.conditions),
            "witness": self.witness,
        }


def _trivial_case(g: Graph) -> bool:
    if len(set(g.vcolor)) > 1:
        return False
    full = g.n * (g.n - 1) // 2
    return g.m in (0, full)


def _check_prime(g: Graph) -> None:
    if not isprime(g.n):
        raise GraphError(f"vertex count {g.n} is not prime")


def recognize_vertex_transitive_prime(g: Graph) -> RecognitionVerdict:
    _check_prime(g)
    if _trivial_case(g):
        return RecognitionVerdict(NOT_APPLICABLE, witness="complete or empty graph", trivial=True)
    p = g.n
    cond = Conditions()
    x = closure(g)
    cond.c1 = not diagonal_is_split(x)
    if not cond.c1:
        return RecognitionVerdict(NO, cond, witness="c1: diagonal is split")
    degs = set(irreflexive_outdegrees(x))
    cond.c2 = len(degs) == 1
    if not cond.c2:
        return RecognitionVerdict(NO, cond, witness=f"c2: irreflexive outdegrees {sorted(degs)}")
    d = cond.d = degs.pop()
    want = (p - 1) // d
    for u in range(p):
        outs = [c.outdegree for c in constituents(one_point_extension(g, u)) if not c.reflexive]
        n_d = sum(1 for o in outs if o == d)
        others_ok = all(o in (d, 1) for o in outs)
        ok = n_d == want and others_ok
        if not ok:
            cond.c3 = False
            return RecognitionVerdict(
                NO, cond, witness=f"c3 at vertex {u}: {n_d} constituents of outdegree {d}, expected {want}"
            )
    cond.c3 = True
    return RecognitionVerdict(YES, cond)


def recognize_arc_transitive_prime(g: Graph) -> RecognitionVerdict:
    """Vertex-transitive and arc-transitive, decided by the prime-order criteria."""
    vt = recognize_vertex_transitive_prime(g)
    if vt.answer != YES:
        return vt
    cond = vt.conditions
    cond.adjacency_unsplit = not adjacency_is_split(closure(g), g)
    if not cond.adjacency_unsplit:
        return RecognitionVerdict(NO, cond, witness="adjacency relation is split")
    return RecognitionVerdict(YES, cond)


def is_vertex_transitive_exact(g: Graph, report: AutomorphismReport | None = None) -> bool:
    rep = report or automorphisms(g)
    return len(rep.vertex_orbits) <= 1


def is_arc_transitive_exact(g: Graph, report: AutomorphismReport | None = None) -> bool:
    """At most one orbit on ordered adjacent pairs (no condition on vertices)."""
    rep = report or automorphisms(g)
    return len(rep.arc_orbits) <= 1


def is_symmetric_exact(g: Graph, report: AutomorphismReport | None = None) -> bool:
    """Vertex-transitive and arc-transitive."""
    rep = report or automorphisms(g)
    return is_vertex_transitive_exact(g, rep) and is_arc_transitive_exact(g, rep)
