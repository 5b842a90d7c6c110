"""Cayley-family graph generators: circulants, Paley, dihedral, Cheng-Oxley, torus.

Group-element labels are not stored in the returned Graph; ``dihedral_labels``
and ``torus_labels`` give the vertex -> element map on request.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from sympy import isprime

from .errors import GraphError
from .graph import Graph, build


def circulant(p: int, connection: Iterable[int]) -> Graph:
    """Cayley graph of Z_p: x ~ y iff (y - x) mod p lies in the connection set."""
    if p < 1:
        raise GraphError("modulus must be positive")
    z = {c % p for c in connection}
    if not z:
        raise GraphError("connection set is empty")
    if 0 in z:
        raise GraphError("connection set contains 0")
    if {(-c) % p for c in z} != z:
        raise GraphError("connection set is not closed under negation mod p")
    edges = {(min(x, (x + c) % p), max(x, (x + c) % p)) for x in range(p) for c in z}
    return build(p, sorted(edges))


def quadratic_residues(p: int) -> set[int]:
    return {(x * x) % p for x in range(1, p)}


def paley(p: int) -> Graph:
    if not isprime(p):
        raise GraphError(f"{p} is not prime")
    if p % 4 != 1:
        raise GraphError(f"{p} is not 1 mod 4; the residues are not closed under negation")
    return circulant(p, quadratic_residues(p))


@dataclass(frozen=True)
class DihedralElement:
    """The element a^reflection * b^exponent of D_2q, with b^i a = a b^-i."""

    q: int
    reflection: bool
    exponent: int

    def __post_init__(self):
        if not 0 <= self.exponent < self.q:
            raise GraphError(f"exponent {self.exponent} not in [0, {self.q})")

    def __mul__(self, other: DihedralElement) -> DihedralElement:
        if other.q != self.q:
            raise GraphError("elements of different dihedral groups")
        i = -self.exponent if other.reflection else self.exponent
        return DihedralElement(
            self.q, self.reflection != other.reflection, (i + other.exponent) % self.q
        )

    def inverse(self) -> DihedralElement:
        if self.reflection:
            return self
        return DihedralElement(self.q, False, (-self.exponent) % self.q)

    @property
    def index(self) -> int:
        """Vertex number: b^i -> i, ab^i -> q + i."""
        return self.q * int(self.reflection) + self.exponent

    @classmethod
    def from_index(cls, q: int, index: int) -> DihedralElement:
        return cls(q, index >= q, index % q)

    def __str__(self):
        s = "a" if self.reflection else ""
        if self.exponent or not s:
            s += f"b^{self.exponent}"
        return s


def dihedral_cayley(q: int, exponents: Iterable[int]) -> Graph:
    """Cayley graph of D_2q on the reflections {ab^e : e in exponents}.

    Vertices follow ``DihedralElement.index``; x ~ y iff x^-1 y is in the
    connection set. All connection elements are involutions, so the set is
    symmetric automatically.
    """
    exps = list(exponents)
    reduced = {e % q for e in exps}
    if len(reduced) != len(exps):
        raise GraphError("exponents are not distinct mod q")
    conn = [DihedralElement(q, True, e) for e in sorted(reduced)]
    edges = set()
    for i in range(2 * q):
        x = DihedralElement.from_index(q, i)
        for z in conn:
            j = (x * z).index
            edges.add((min(i, j), max(i, j)))
    return build(2 * q, sorted(edges))


def dihedral_labels(q: int) -> dict[int, str]:
    return {i: str(DihedralElement.from_index(q, i)) for i in range(2 * q)}


def smallest_cube_root_of_unity(p: int) -> int:
    for r in range(2, p):
        if pow(r, 3, p) == 1:
            return r
    raise GraphError(f"no cube root of unity other than 1 modulo {p}")


def cheng_oxley(p: int) -> Graph:
    """The cubic arc-transitive graph Cay(D_2p, {ab, ab^r, ab^(r^2)}), r^3 = 1 mod p."""
    if not isprime(p):
        raise GraphError(f"{p} is not prime")
    if p % 3 != 1:
        raise GraphError(f"{p} is not 1 mod 3")
    r = smallest_cube_root_of_unity(p)
    return dihedral_cayley(p, [1, r, (r * r) % p])


def torus(side: int) -> Graph:
    """Cay(Z_l x Z_l, {±(1,0), ±(0,1)}); vertex (x, y) is x*l + y."""
    if side < 3:
        raise GraphError("torus side must be at least 3")
    edges = set()
    for x in range(side):
        for y in range(side):
            v = x * side + y
            for w in (((x + 1) % side) * side + y, x * side + (y + 1) % side):
                edges.add((min(v, w), max(v, w)))
    return build(side * side, sorted(edges))


def torus_labels(side: int) -> dict[int, tuple[int, int]]:
    return {x * side + y: (x, y) for x in range(side) for y in range(side)}
