import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import naive_distinguish, naive_partition, naive_wl1, naive_wl_joint

from wlsym.automorphism import automorphisms
from wlsym.cfi import hard_pair
from wlsym.errors import BudgetExceeded
from wlsym.generators import paley, torus
from wlsym.graph import (
    build,
    complement,
    complete,
    cycle,
    disjoint_union,
    path,
    petersen,
    star,
)
from wlsym.wl import (
    color_classes,
    distinguish,
    distinguish_report,
    individualize,
    is_wl_sk_regular,
    refine_tuples,
    wl1,
    wl2,
    wlk,
)


@st.composite
def graphs(draw, max_n=7, colored=False):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    vcolor = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n)) if colored else None
    return build(n, [e for e, b in zip(pairs, mask) if b], vcolor)


def relabeled(g, perm):
    return g.relabel(perm)


def test_wl1_examples():
    assert len(set(wl1(star(3)).tolist())) == 2
    assert len(set(wl1(petersen()).tolist())) == 1
    classes = color_classes(wl1(individualize(complement(cycle(7)), 0)))
    assert sorted(map(sorted, classes)) == [[0], [1, 6], [2, 5], [3, 4]]
    assert len(set(wl1(individualize(complete(3), 0)).tolist())) == 2


def test_wl2_examples():
    assert wl2(complement(cycle(7))).num_colors == 4
    assert wl2(complete(4)).num_colors == 2
    assert wl2(petersen()).num_colors == 3


def test_wl2_pinned_ids():
    # derived by hand: loops < nonedge < edge initially; ends beat the centre
    # on their multisets, and (0, 1) beats (1, 0) since (1, 2) < (2, 0)
    col = wl2(path(3))
    assert col.color.tolist() == [[0, 3, 2], [4, 1, 4], [2, 3, 0]]


def test_pair_coloring_contract():
    col = wl2(petersen())
    assert sorted(set(col.color.reshape(-1).tolist())) == list(range(col.num_colors))
    diag = set(col.diagonal().tolist())
    off = set(col.color[~np.eye(10, dtype=bool)].tolist())
    assert not diag & off
    js = col.to_json_dict()
    assert js["num_colors"] == 3 and sum(c["size"] for c in js["classes"]) == 100


def test_wlk_examples():
    assert wlk(petersen(), 2).partition() == wl2(petersen()).partition()
    k4 = wlk(complete(4), 3)
    # equality patterns of a 3-tuple: xxx, xxy, xyx, yxx, xyz
    assert k4.num_colors == 5
    with pytest.raises(ValueError):
        wlk(petersen(), 1)


def test_individualize():
    g = individualize(petersen(), 4)
    assert g.vcolor[4] not in {g.vcolor[v] for v in range(10) if v != 4}
    with pytest.raises(Exception):
        individualize(petersen(), 10)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6, colored=True))
def test_wl2_partition_matches_literal_oracle(g):
    assert wl2(g).partition() == naive_partition(g, 2)


@settings(max_examples=15, deadline=None)
@given(graphs(max_n=5, colored=True))
def test_wl3_partition_matches_literal_oracle(g):
    assert wlk(g, 3).partition() == naive_partition(g, 3)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=8, colored=True))
def test_wl1_matches_literal_oracle(g):
    a = wl1(g).tolist()
    b = naive_wl1(g)
    assert {frozenset(c) for c in color_classes(np.array(a))} == {frozenset(c) for c in color_classes(np.array(b))}


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=8, colored=True), st.randoms(use_true_random=False))
def test_equivariance(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = relabeled(g, perm)
    p = np.array(perm)
    c1, c2 = wl2(g).color, wl2(h).color
    assert np.array_equal(c2[np.ix_(p, p)], c1)
    assert np.array_equal(wl1(h)[p], wl1(g))


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=8))
def test_stable_refines_initial_and_is_stable(g):
    col = wl2(g)
    a = g.adjacency
    for cls in col.partition():
        kinds = {(u == v, a[u, v]) for u, v in cls}
        assert len(kinds) == 1
    assert col.rounds <= max(1, g.n)
    # one more literal round on the stable coloring does not split anything
    n = g.n
    c = col.color
    sig = {}
    for u in range(n):
        for v in range(n):
            sig[(u, v)] = (c[u, v], tuple(sorted((c[u, w], c[w, v]) for w in range(n))))
    assert len(set(sig.values())) == col.num_colors


def test_rounds_monotone_against_oracle():
    g = path(6)
    _, history = naive_wl_joint([g], 2)
    for earlier, later in zip(history, history[1:]):
        for cls in later:
            assert any(cls <= big for big in earlier)
    assert wl2(g).partition() == history[-1]


def test_determinism():
    g = paley(13)
    assert np.array_equal(wl2(g).color, wl2(g).color)
    assert np.array_equal(wlk(g, 3).color, wlk(g, 3).color)


@pytest.mark.parametrize("g", [petersen(), complement(cycle(7)), paley(13), torus(3), cycle(6)])
def test_invariance_under_automorphisms(g):
    col = wl2(g).color
    for p in automorphisms(g).generators:
        p = np.array(p)
        assert np.array_equal(col[np.ix_(p, p)], col)


def test_distinguish_examples():
    g = petersen()
    assert distinguish(g, g, 2) is False
    assert distinguish(complete(3), path(3), 2) is True
    r = distinguish_report(cycle(6), disjoint_union(complete(3), complete(3)), 2)
    assert r.distinguished and r.split_round is not None and r.split_round >= 1
    assert distinguish(cycle(5), cycle(6), 2)


def test_distinguish_hard_pair_torus4_k2():
    g, h, _ = hard_pair(torus(4))
    assert g.n == h.n == 256
    assert distinguish(g, h, 2) is False


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=6), graphs(max_n=6))
def test_distinguish_properties(g, h):
    if g.n != h.n:
        return
    d2 = distinguish(g, h, 2)
    assert d2 == distinguish(h, g, 2)
    assert d2 == naive_distinguish(g, h, 2)
    if d2 and g.n <= 5:
        assert distinguish(g, h, 3)
    if not d2:
        assert sorted(g.degrees()) == sorted(h.degrees())


def test_distinguish_k3_matches_oracle_small():
    rng = random.Random(3)
    for _ in range(10):
        n = 5
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        g = build(n, [e for e in pairs if rng.random() < 0.5])
        h = build(n, [e for e in pairs if rng.random() < 0.5])
        assert distinguish(g, h, 3) == naive_distinguish(g, h, 3)


def test_budget():
    with pytest.raises(BudgetExceeded) as info:
        wlk(petersen(), 4, budget=10_000)
    assert info.value.required > info.value.available == 10_000
    with pytest.raises(BudgetExceeded):
        refine_tuples([complete(300)], 3, budget=2**28)


def test_sk_regular_examples():
    assert is_wl_sk_regular(cycle(5), 1, 1)
    assert is_wl_sk_regular(petersen(), 2, 2)
    assert not is_wl_sk_regular(path(3), 1, 2)
    assert not is_wl_sk_regular(cycle(6), 2, 2)
    assert is_wl_sk_regular(petersen(), 1, 2)
    with pytest.raises(ValueError):
        is_wl_sk_regular(cycle(5), 3, 2)
