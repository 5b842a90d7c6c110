"""Acceptance criteria 1-11, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines even when
everything passes.
"""
import itertools
import math
import random
import time

import pytest
from oracles import brute_separator

from wlsym.automorphism import are_isomorphic, automorphisms
from wlsym.cfi import analyze_template, cfi, cfi_pair, hard_pair, is_complete_bipartite_pair, twist_parity_check
from wlsym.coherent import closure, constituents, one_point_extension, verify_coherence
from wlsym.corpus import all_circulants, all_labeled_graphs, graphs_up_to_isomorphism, random_graphs
from wlsym.errors import BudgetExceeded
from wlsym.generators import cheng_oxley, circulant, dihedral_cayley, paley, torus
from wlsym.graph import (
    complement,
    complete,
    cycle,
    diameter,
    nu,
    petersen,
    regular_degree,
    rook,
    srg_parameters,
)
from wlsym.transitivity import (
    YES,
    is_symmetric_exact,
    is_vertex_transitive_exact,
    recognize_arc_transitive_prime,
    recognize_vertex_transitive_prime,
)
from wlsym.wl import distinguish, is_wl_sk_regular

TWO_GIB = 2 * 1024**3


def _report(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\n[acceptance] criterion {number} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def prime_corpus():
    groups = {"labeled-5": list(all_labeled_graphs(5)), "classes-7": graphs_up_to_isomorphism(7)}
    for p in (11, 13):
        groups[f"random-{p}"] = random_graphs(p, 500, seed=p)
        groups[f"circulant-{p}"] = all_circulants(p)
    return groups


@pytest.fixture(scope="module")
def prime_verdicts(prime_corpus):
    """Per graph: (recognized VT, exact VT, recognized AT, exact VT and AT), plus seconds spent."""
    start = time.perf_counter()
    out = {}
    for name, graphs in prime_corpus.items():
        rows = []
        for g in graphs:
            rep = automorphisms(g)
            rows.append((
                recognize_vertex_transitive_prime(g).holds,
                is_vertex_transitive_exact(g, rep),
                recognize_arc_transitive_prime(g).holds,
                is_symmetric_exact(g, rep),
            ))
        out[name] = rows
    return out, time.perf_counter() - start


def test_criterion_01_fig1(capsys):
    start = time.perf_counter()
    g = complement(cycle(7))
    x = closure(g)
    irr = [c.outdegree for c in constituents(x) if not c.reflexive]
    refl = [c for c in constituents(x) if c.reflexive]
    xu = one_point_extension(g, 0)
    irr_u = [c.outdegree for c in constituents(xu) if not c.reflexive]
    elapsed = time.perf_counter() - start
    ok = (
        x.num_relations == 4
        and len(refl) == 1
        and sorted(irr) == [2, 2, 2]
        and irr_u.count(2) == 3
        and all(o == 1 for o in irr_u if o != 2)
        and elapsed < 1.0
    )
    _report(capsys, 1, ok, f"{x.num_relations} classes, outdegrees {sorted(irr)}; "
            f"individualized: {irr_u.count(2)} of outdegree 2, rest 1; {elapsed:.2f}s")


def test_criterion_02_vertex_transitive_prime(capsys, prime_corpus, prime_verdicts):
    verdicts, elapsed = prime_verdicts
    sizes = {name: len(gs) for name, gs in prime_corpus.items()}
    bad = {name: sum(r[0] != r[1] for r in rows) for name, rows in verdicts.items()}
    yes = {name: sum(r[1] for r in rows) for name, rows in verdicts.items()}
    ok = (
        sizes["labeled-5"] == 1024
        and sizes["classes-7"] == 1044
        and sizes["random-11"] == sizes["random-13"] == 500
        and not any(bad.values())
        and elapsed < 600
    )
    _report(capsys, 2, ok, f"sizes {sizes}, disagreements {bad}, transitive {yes}, {elapsed:.0f}s")


def test_criterion_03_arc_transitive_prime(capsys, prime_verdicts):
    verdicts, _ = prime_verdicts
    bad = {name: sum(r[2] != r[3] for r in rows) for name, rows in verdicts.items()}
    yes = {name: sum(r[3] for r in rows) for name, rows in verdicts.items()}
    _report(capsys, 3, not any(bad.values()), f"disagreements {bad}, arc-transitive {yes}")


def test_criterion_04_paley29(capsys):
    g = paley(29)
    v = recognize_vertex_transitive_prime(g)
    x = closure(g)
    ok = (
        v.answer == YES
        and v.conditions.d == 14
        and (29 - 1) // v.conditions.d == 2
        and x.num_relations == 3
        and srg_parameters(g) == (29, 14, 6, 7)
    )
    _report(capsys, 4, ok, f"answer {v.answer}, d={v.conditions.d}, closure relations {x.num_relations}")


def test_criterion_05_cfi_structure(capsys):
    k4 = cfi(complete(4)).base
    rook_ok = are_isomorphic(k4, rook(4))
    a = cfi(petersen())
    k = 3
    spaces = [is_complete_bipartite_pair(a, u, v) for u, v in sorted(petersen().edges)]
    ok = (
        rook_ok
        and a.base.n == 40
        and regular_degree(a.base) == 6
        and nu(a.base) == 2 == (k - 2) * 2 ** (k - 2)
        and all(spaces)
    )
    _report(capsys, 5, ok, f"cfi(K4)~rook(4): {rook_ok}; Petersen CFI n={a.base.n}, "
            f"degree {regular_degree(a.base)}, nu {nu(a.base)}, 2K_2,2 interspaces {sum(spaces)}/{len(spaces)}")


def _twist_samples(edges, size, count, rng):
    every = list(itertools.combinations(edges, size))
    if len(every) <= count:
        return every
    return rng.sample(every, count)


def test_criterion_06_twist_parity(capsys):
    start = time.perf_counter()
    rng = random.Random(6)
    checked = violations = 0
    for f in (petersen(), cheng_oxley(7)):
        edges = sorted(f.edges)
        for size_r, size_s in itertools.product(range(3), repeat=2):
            rs = _twist_samples(edges, size_r, 30, rng)
            ss = _twist_samples(edges, size_s, 30, rng)
            for i in range(30):
                r = rs[i % len(rs)]
                s = ss[i % len(ss)]
                parity = len(set(r) ^ set(s)) % 2 == 0
                checked += 1
                violations += twist_parity_check(f, r, s) != parity
    elapsed = time.perf_counter() - start
    ok = violations == 0 and elapsed < 900
    _report(capsys, 6, ok, f"{checked} twist pairs, {violations} violations, {elapsed:.0f}s")


def test_criterion_07_transitivity_transfer(capsys):
    a, b = cfi_pair(petersen())
    ra, rb = automorphisms(a.base), automorphisms(b.base)
    vt = len(ra.vertex_orbits) == 1 and len(rb.vertex_orbits) == 1
    distinct = not are_isomorphic(a.base, b.base)
    arc = {}
    for name, f in (("torus(3)", torus(3)), ("cheng_oxley(7)", cheng_oxley(7))):
        x, y = cfi_pair(f)
        arc[name] = [len(automorphisms(z.base).arc_orbits) for z in (x, y)]
    ok = vt and distinct and all(c == [1, 1] for c in arc.values())
    _report(capsys, 7, ok, f"Petersen A,B vertex-transitive {vt}, non-isomorphic {distinct}; arc orbits {arc}")


def test_criterion_08_indistinguishability(capsys):
    start = time.perf_counter()
    lines = []
    ok = True
    for name, f in (("Petersen", petersen()), ("torus(3)", torus(3))):
        rep = analyze_template(f)
        s = rep.separator_exact
        ok &= s is not None and s == brute_separator(f)
        g, h, _ = hard_pair(f)
        tried = []
        for k in range(2, s):
            try:
                same = not distinguish(g, h, k, budget=TWO_GIB)
            except BudgetExceeded:
                tried.append(f"k={k} over budget")
                continue
            ok &= same
            tried.append(f"k={k} {'indistinguishable' if same else 'DISTINGUISHED'}")
        ok &= 3 in range(2, s) and any(t.startswith("k=3 indist") for t in tried)
        gvt, hvt = is_vertex_transitive_exact(g), is_vertex_transitive_exact(h)
        ok &= gvt and not hvt
        lines.append(f"{name}: s={s}, n={g.n}, {', '.join(tried)}, G VT {gvt}, H VT {hvt}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 1800
    _report(capsys, 8, ok, "; ".join(lines) + f"; {elapsed:.0f}s")


def test_criterion_09_diameter_bounds(capsys):
    bad = []
    checked = 0
    for q in range(3, 61):
        for r in range(2, q):
            if not 2 * r < q:
                continue
            d = diameter(dihedral_cayley(q, {0, 1, r}))
            checked += 1
            if not d <= 2 * q / r + r + 1:
                bad.append(("dihedral", q, r, d))
    primes = [p for p in range(7, 201, 3) if p % 3 == 1 and all(p % t for t in range(2, int(p**0.5) + 1))]
    for p in primes:
        d = diameter(cheng_oxley(p))
        checked += 1
        if not d < 4 * math.sqrt(3 * p) + 7:
            bad.append(("cheng_oxley", p, d))
    _report(capsys, 9, not bad, f"{checked} graphs ({len(primes)} primes), violations {bad}")


def _coherence_fixtures():
    a, b = cfi_pair(petersen())
    g80, h80, _ = hard_pair(petersen())
    yield "C7 complement", complement(cycle(7))
    yield "C7 complement at 0", None
    yield "Paley(13)", paley(13)
    yield "Paley(29)", paley(29)
    yield "circulant(13,{1,5})", circulant(13, {1, 12, 5, 8})
    yield "circulant(13,{1,3})", circulant(13, {1, 12, 3, 10})
    yield "Petersen", petersen()
    yield "K4", complete(4)
    yield "rook(4)", rook(4)
    yield "torus(3)", torus(3)
    yield "cheng_oxley(7)", cheng_oxley(7)
    yield "dihedral(7,{0,1,2})", dihedral_cayley(7, {0, 1, 2})
    yield "cfi(K4)", cfi(complete(4)).base
    yield "Petersen A", a.base
    yield "Petersen B", b.base
    for name, f in (("torus(3)", torus(3)), ("cheng_oxley(7)", cheng_oxley(7))):
        x, y = cfi_pair(f)
        yield f"{name} A", x.base
        yield f"{name} B", y.base
    yield "Petersen G", g80
    yield "Petersen H", h80


def test_criterion_10_coherence_axioms(capsys):
    bad = {}
    count = 0
    for name, g in _coherence_fixtures():
        x = one_point_extension(complement(cycle(7)), 0) if g is None else closure(g)
        assert x.n <= 80
        rep = verify_coherence(x, mode="full")
        count += 1
        if not rep.ok:
            bad[name] = rep.violations[:3]
    _report(capsys, 10, not bad, f"{count} fixtures checked in full mode, violations {bad}")


def test_criterion_11_sk_regularity(capsys):
    start = time.perf_counter()
    checked = 0
    bad = []
    regular_count = srg_count = 0
    for n in range(1, 9):
        for g in graphs_up_to_isomorphism(n):
            regular = regular_degree(g) is not None
            srg = srg_parameters(g) is not None
            regular_count += regular
            srg_count += srg
            checked += 1
            if is_wl_sk_regular(g, 1, 1) != regular or is_wl_sk_regular(g, 2, 2) != srg:
                bad.append(sorted(g.edges))
    elapsed = time.perf_counter() - start
    ok = not bad and checked == 1 + 2 + 4 + 11 + 34 + 156 + 1044 + 12346
    _report(capsys, 11, ok, f"{checked} graphs (regular {regular_count}, strongly regular {srg_count}), "
            f"disagreements {len(bad)}, {elapsed:.0f}s")
