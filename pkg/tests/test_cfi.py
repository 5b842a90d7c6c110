import itertools
import math
import random

import pytest
from oracles import brute_h_out, brute_separator

from wlsym.automorphism import are_isomorphic, automorphisms
from wlsym.cfi import (
    analyze_template,
    assumption_holds,
    cfi,
    cfi_pair,
    check_assumption,
    separator_bound_from_expansion,
    separator_bound_from_diameter,
    even_vectors,
    hard_pair,
    interspace_wiring,
    is_cell_partition_detected,
    is_complete_bipartite_pair,
    separator_number,
    twist_parity_check,
    vertex_expansion,
)
from wlsym.errors import AssumptionViolated, GraphError
from wlsym.generators import cheng_oxley, dihedral_cayley, torus
from wlsym.graph import (
    complete,
    complete_bipartite,
    cycle,
    disjoint_union,
    nu,
    path,
    petersen,
    regular_degree,
    rook,
)


def brute_cfi_edges(f, twists):
    """CFI adjacency straight from the vector rule, independent of the builder."""
    k = regular_degree(f)
    vecs = [x for x in itertools.product((0, 1), repeat=k) if sum(x) % 2 == 0]
    size = len(vecs)
    out = set()
    for v, u in f.edges:
        for i, x in enumerate(vecs):
            for j, y in enumerate(vecs):
                xu = x[f.neighbors[v].index(u)]
                yv = y[f.neighbors[u].index(v)]
                if (xu == yv) != ((v, u) in twists):
                    out.add((v * size + i, u * size + j))
    return out


def test_even_vectors():
    assert even_vectors(3) == [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]
    assert len(even_vectors(4)) == 8


def test_construction_examples():
    a = cfi(complete(4))
    assert a.base.n == 16 and regular_degree(a.base) == 6
    assert are_isomorphic(a.base, rook(4))
    a = cfi(petersen())
    assert a.base.n == 40 and regular_degree(a.base) == 6
    a = cfi(torus(3))
    assert a.base.n == 72 and regular_degree(a.base) == 16


@pytest.mark.parametrize("f", [petersen(), complete(4), torus(3), cheng_oxley(7), cycle(5)])
def test_matches_vector_rule(f):
    twists = set(sorted(f.edges)[:2])
    assert cfi(f, twists).base.edges == brute_cfi_edges(f, twists)


def test_construction_errors():
    with pytest.raises(GraphError):
        cfi(path(4))
    with pytest.raises(GraphError):
        cfi(disjoint_union(complete(4), complete(4)))
    with pytest.raises(GraphError):
        cfi(petersen(), [(0, 2)])


@pytest.mark.parametrize("f", [petersen(), torus(3), cheng_oxley(7)])
def test_structure(f):
    k = regular_degree(f)
    s = {sorted(f.edges)[0], sorted(f.edges)[3]}
    a = cfi(f, s)
    assert a.base.n == f.n * 2 ** (k - 1)
    assert regular_degree(a.base) == k * 2 ** (k - 2)
    assert sorted(v for c in a.cell for v in c) == list(range(a.base.n))
    for v, u in f.edges:
        assert is_complete_bipartite_pair(a, v, u)
        want = "crossed" if (v, u) in s else "matched"
        assert interspace_wiring(a, v, u) == want == interspace_wiring(a, u, v)
        for b in (0, 1):
            assert len(a.slice(v, u, b)) == 2 ** (k - 2)
    assert nu(a.base) == (k - 2) * 2 ** (k - 2)
    assert is_cell_partition_detected(a)


def test_cell_detection_fails_for_k4():
    assert not is_cell_partition_detected(cfi(complete(4)))


def test_assumption():
    with pytest.raises(AssumptionViolated) as info:
        cfi_pair(complete(4))
    assert info.value.clause == "nu<2k-4"
    with pytest.raises(AssumptionViolated) as info:
        check_assumption(cycle(6))
    assert info.value.clause == "k>=3"
    with pytest.raises(AssumptionViolated) as info:
        check_assumption(disjoint_union(petersen(), petersen()))
    assert info.value.clause == "connected"
    with pytest.raises(AssumptionViolated) as info:
        check_assumption(path(4))
    assert info.value.clause == "regular"
    assert assumption_holds(petersen()) and assumption_holds(torus(3))
    assert assumption_holds(cheng_oxley(7))


def test_pairs_non_isomorphic():
    for f in [petersen(), cheng_oxley(7), torus(3)]:
        a, b = cfi_pair(f)
        assert b.twists == {min(f.edges)}
        assert not are_isomorphic(a.base, b.base)
    a, b = cfi_pair(cheng_oxley(7))
    assert a.base.n == b.base.n == 56


def test_twist_parity_examples():
    f = petersen()
    e = sorted(f.edges)
    assert twist_parity_check(f, [], [e[0], e[7]])
    assert not twist_parity_check(f, [], [e[4]])
    assert twist_parity_check(f, [e[2]], [e[2]])
    assert twist_parity_check(f, [e[1]], [e[9]])


def test_twist_parity_exhaustive_petersen_small_sets():
    f = petersen()
    edges = sorted(f.edges)
    rng = random.Random(2)
    sets = [[e] for e in edges] + [list(p) for p in rng.sample(list(itertools.combinations(edges, 2)), 15)]
    for s in sets:
        assert twist_parity_check(f, [], s) == (len(s) % 2 == 0)


def test_separator_and_expansion_against_brute_force():
    for f in [cycle(6), petersen(), torus(3), complete(4), cycle(7), complete_bipartite(3, 3), cheng_oxley(7)]:
        s, witness = separator_number(f)
        assert s == brute_separator(f)
        assert len(witness) == s
        assert vertex_expansion(f) == brute_h_out(f)
    assert separator_number(cycle(6))[0] == 2


def test_analyze_template():
    r = analyze_template(torus(3))
    assert (r.k, r.nu, r.assumption_ok) == (4, 2, True)
    assert r.separator_exact == 4 and r.vertex_transitive
    r = analyze_template(complete(4))
    assert not r.assumption_ok
    r = analyze_template(petersen())
    assert r.separator_exact == 4 and r.k_bound == 4
    for f in [petersen(), torus(3), torus(4), cheng_oxley(7), cycle(8)]:
        r = analyze_template(f)
        assert r.expansion_bound <= r.separator_exact + 1e-9
        assert r.diameter_bound <= r.separator_exact + 1e-9
    big = analyze_template(cheng_oxley(13))
    assert big.separator_exact is None and big.k_bound >= 1
    assert big.diameter_bound == pytest.approx(26 / (6 * big.diameter + 1))


def test_non_transitive_template_gets_no_diameter_bound():
    from wlsym.graph import build

    # the Frucht graph: cubic with trivial automorphism group
    frucht_edges = [(0, 1), (0, 2), (0, 11), (1, 3), (1, 6), (2, 5), (2, 10), (3, 4), (3, 6), (4, 8),
                    (4, 11), (5, 9), (5, 10), (6, 7), (7, 8), (7, 9), (8, 9), (10, 11)]
    frucht = build(12, frucht_edges)
    assert regular_degree(frucht) == 3
    assert automorphisms(frucht).group_order == 1
    r = analyze_template(frucht)
    assert r.vertex_transitive is False and r.diameter_bound is None
    assert r.separator_exact == brute_separator(frucht)


def test_bounds_formulae():
    assert separator_bound_from_expansion(1, 12) == pytest.approx(3.0)
    assert separator_bound_from_diameter(2, 13) == pytest.approx(1.0)


def test_hard_pair():
    g, h, kb = hard_pair(petersen())
    assert g.n == h.n == 80 and kb == 4
    g, h, kb = hard_pair(torus(4))
    assert g.n == h.n == 256 and kb == 6
    g, h, _ = hard_pair(petersen(), copies=3)
    assert g.n == 120
    with pytest.raises(AssumptionViolated):
        hard_pair(complete(4))


def test_dihedral_diameter_bound_small():
    from wlsym.graph import diameter

    for q in range(5, 25):
        for r in range(2, (q + 1) // 2):
            if 2 * r >= q:
                continue
            g = dihedral_cayley(q, {0, 1, r})
            assert diameter(g) <= 2 * q / r + r + 1
