"""Command-line entry point.

Exit codes: 0 success, 1 usage or input error, 2 a checked property failed.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import platform
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .automorphism import are_isomorphic, automorphisms
from .cfi import analyze_template, cfi, cfi_pair, hard_pair
from .coherent import closure, constituents, one_point_extension, verify_coherence
from .errors import AssumptionViolated, BudgetExceeded, GraphError
from .generators import cheng_oxley, circulant, dihedral_cayley, paley, torus
from .graph import Graph, complement, complete, cycle, petersen
from .io import read_graph, to_graph6, write_graph
from .transitivity import (
    is_symmetric_exact,
    is_vertex_transitive_exact,
    recognize_arc_transitive_prime,
    recognize_vertex_transitive_prime,
)
from .wl import distinguish_report, individualize, wl1, wl2, wlk

EXIT_OK, EXIT_USAGE, EXIT_PROPERTY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunManifest:
    argv: list[str]
    seed: int
    threads: int | None
    inputs: dict[str, str] = field(default_factory=dict)
    versions: dict[str, str] = field(default_factory=dict)
    seconds: float = 0.0
    outputs: dict = field(default_factory=dict)
    exit_code: int = 0

    def to_json_dict(self) -> dict:
        return {
            "argv": self.argv,
            "seed": self.seed,
            "threads": self.threads,
            "inputs": self.inputs,
            "versions": self.versions,
            "seconds": round(self.seconds, 3),
            "outputs": self.outputs,
            "exit_code": self.exit_code,
        }


def _versions() -> dict[str, str]:
    import scipy
    import sympy

    return {
        "wlsym": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "sympy": sympy.__version__,
    }


def _load(path: str, manifest: RunManifest) -> Graph:
    p = Path(path)
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    manifest.inputs[path] = hashlib.sha256(data).hexdigest()
    return read_graph(p)


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _edges(text: str) -> list[tuple[int, int]]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            a, b = tok.split("-")
            out.append((int(a), int(b)))
        except ValueError as exc:
            raise UsageError(f"twist edges look like 0-1,2-5; got {tok!r}") from exc
    return out


def _template(spec: str, manifest: RunManifest) -> Graph:
    name, _, arg = spec.partition(":")
    try:
        if name == "petersen":
            return petersen()
        if name == "torus":
            return torus(int(arg))
        if name == "cheng-oxley":
            return cheng_oxley(int(arg))
        if name == "file":
            return _load(arg, manifest)
    except ValueError as exc:
        if isinstance(exc, GraphError):
            raise
        raise UsageError(f"bad template argument in {spec!r}") from exc
    raise UsageError(f"unknown template {spec!r}; use petersen, torus:L, cheng-oxley:P or file:PATH")


# --------------------------------------------------------------------------
# commands; each returns (exit code, output dict, text lines)
# --------------------------------------------------------------------------

def cmd_gen(args, manifest):
    if args.circulant:
        p, z = args.circulant
        g = circulant(int(p), _ints(z))
    elif args.paley is not None:
        g = paley(args.paley)
    elif args.dihedral:
        q, e = args.dihedral
        g = dihedral_cayley(int(q), _ints(e))
    elif args.cheng_oxley is not None:
        g = cheng_oxley(args.cheng_oxley)
    elif args.torus is not None:
        g = torus(args.torus)
    elif args.cycle is not None:
        g = cycle(args.cycle)
    elif args.complete is not None:
        g = complete(args.complete)
    elif args.petersen:
        g = petersen()
    else:
        raise UsageError("choose a graph family")
    if args.complement:
        g = complement(g)
    if args.output:
        write_graph(args.output, g)
    out = {"n": g.n, "m": g.m, "graph6": to_graph6(g), "file": args.output}
    lines = [f"n={g.n} m={g.m}", out["graph6"]]
    if args.output:
        lines.append(f"wrote {args.output}")
    return EXIT_OK, out, lines


def cmd_wl(args, manifest):
    g = _load(args.graph, manifest)
    if args.individualize is not None:
        if not 0 <= args.individualize < g.n:
            raise UsageError(f"vertex {args.individualize} out of range")
        g = individualize(g, args.individualize)
    if args.k == 1:
        colors = wl1(g)
        hist = np.bincount(colors).tolist() if g.n else []
        out = {"n": g.n, "k": 1, "num_colors": len(hist),
               "classes": [{"color": c, "size": s, "representative_tuple": [int(np.argmax(colors == c))]}
                           for c, s in enumerate(hist)]}
        if args.full:
            out["coloring"] = colors.tolist()
        return EXIT_OK, out, [f"k=1 colors={len(hist)}"]
    col = wl2(g) if args.k == 2 else wlk(g, args.k)
    out = col.to_json_dict()
    # experiment only: whether k-WL leaves the diagonal unsplit; nothing is asserted
    diag = col.color[(np.arange(g.n),) * args.k] if g.n else np.zeros(0, dtype=np.int64)
    out["diagonal_colors"] = len(set(diag.tolist()))
    if args.full:
        out["coloring"] = col.color.reshape(-1).tolist()
    return EXIT_OK, out, [f"k={args.k} colors={col.num_colors} rounds={col.rounds} "
                          f"diagonal_colors={out['diagonal_colors']}"]


def cmd_coherent(args, manifest):
    g = _load(args.graph, manifest)
    x = one_point_extension(g, args.extend) if args.extend is not None else closure(g)
    out = {
        "n": x.n,
        "num_relations": x.num_relations,
        "fibers": [list(f) for f in x.fibers],
        "constituents": [{"relation": c.relation, "outdegree": c.outdegree, "reflexive": c.reflexive}
                         for c in constituents(x)],
    }
    lines = [f"relations={x.num_relations} fibers={len(x.fibers)}",
             "fibers: " + " ".join("{" + ",".join(map(str, f)) + "}" for f in x.fibers),
             "valency: " + " ".join(f"{r}:{x.valency[r]}" for r in range(x.num_relations))]
    code = EXIT_OK
    if args.verify:
        rep = verify_coherence(x, mode="full")
        out["violations"] = rep.violations
        lines.append("coherent" if rep.ok else "violations: " + "; ".join(rep.violations))
        code = EXIT_OK if rep.ok else EXIT_PROPERTY
    if args.full:
        out["configuration"] = x.to_json_dict()
    return code, out, lines


def cmd_recognize(args, manifest):
    g = _load(args.graph, manifest)
    vt = args.property == "vertex-transitive"
    out: dict = {"property": args.property}
    lines = []
    code = EXIT_OK
    if not args.oracle or args.check:
        verdict = (recognize_vertex_transitive_prime if vt else recognize_arc_transitive_prime)(g)
        out["prime_method"] = verdict.to_json_dict()
        lines.append(f"prime method: {verdict.answer} (holds={verdict.holds})")
        c = verdict.conditions
        lines.append(f"  c1={c.c1} c2={c.c2} d={c.d} c3={c.c3} adjacency_unsplit={c.adjacency_unsplit}")
        if verdict.witness:
            lines.append(f"  witness: {verdict.witness}")
    if args.oracle or args.check:
        rep = automorphisms(g)
        exact = is_vertex_transitive_exact(g, rep) if vt else is_symmetric_exact(g, rep)
        out["oracle"] = {"holds": exact, "group_order": rep.group_order,
                         "vertex_orbits": len(rep.vertex_orbits), "arc_orbits": len(rep.arc_orbits)}
        lines.append(f"oracle: {exact} (|Aut|={rep.group_order})")
    if args.check:
        agree = out["prime_method"]["holds"] == out["oracle"]["holds"]
        out["agree"] = agree
        lines.append("agree" if agree else "DISAGREE")
        code = EXIT_OK if agree else EXIT_PROPERTY
    return code, out, lines


def cmd_distinguish(args, manifest):
    g = _load(args.first, manifest)
    h = _load(args.second, manifest)
    r = distinguish_report(g, h, args.k)
    out = {"distinguished": r.distinguished, "k": r.k, "rounds": r.rounds, "split_round": r.split_round}
    if r.distinguished:
        line = "distinguished" + (f" at round {r.split_round}" if r.split_round is not None else "")
    else:
        line = "indistinguishable"
    return EXIT_OK, out, [line]


def cmd_cfi(args, manifest):
    f = _template(args.template, manifest)
    twists = _edges(args.twists) if args.twists else []
    out: dict = {"template": args.template, "twists": [list(e) for e in twists]}
    lines = []
    graphs: dict[str, Graph] = {}
    if args.hard_pair:
        g, h, kb = hard_pair(f)
        graphs.update(G=g, H=h)
        out["k_bound"] = kb
    elif args.pair:
        a, b = cfi_pair(f)
        graphs.update(A=a.base, B=b.base)
        out["twists"] = [list(e) for e in b.twists]
        out["cells"] = [list(c) for c in a.cell]
    else:
        a = cfi(f, twists)
        graphs["A"] = a.base
        out["cells"] = [list(c) for c in a.cell]
    if args.analyze or "k_bound" not in out:
        rep = analyze_template(f)
        out["analysis"] = rep.to_json_dict()
        out["k_bound"] = rep.k_bound
        if args.analyze:
            lines.append(
                f"k={rep.k} nu={rep.nu} assumption_ok={rep.assumption_ok} diameter={rep.diameter} "
                f"s={rep.separator_exact} k_bound={rep.k_bound}"
            )
    out["graph6"] = {name: to_graph6(g) for name, g in graphs.items()}
    for name, g in graphs.items():
        lines.append(f"{name}: n={g.n} m={g.m}")
        lines.append(out["graph6"][name])
        if args.output:
            path = f"{args.output}.{name}.g6"
            write_graph(path, g)
            lines.append(f"wrote {path}")
    if args.output:
        Path(f"{args.output}.json").write_text(json.dumps(out, indent=2) + "\n")
    return EXIT_OK, out, lines


# --------------------------------------------------------------------------
# reproduce
# --------------------------------------------------------------------------

def _fig1() -> tuple[bool, dict]:
    g = complement(cycle(7))
    x = closure(g)
    irr = sorted(c.outdegree for c in constituents(x) if not c.reflexive)
    xu = one_point_extension(g, 0)
    irr_u = sorted((c.outdegree for c in constituents(xu) if not c.reflexive), reverse=True)
    ok = (x.num_relations == 4 and irr == [2, 2, 2]
          and irr_u.count(2) == 3 and all(o in (1, 2) for o in irr_u))
    return ok, {"classes": x.num_relations, "outdegrees": irr,
                "individualized_fibers": [list(f) for f in xu.fibers],
                "individualized_outdegrees": irr_u}


def _thm1_corpus(seed: int, random_count: int, small: bool) -> tuple[bool, dict]:
    from .corpus import all_circulants, all_labeled_graphs, graphs_up_to_isomorphism, random_graphs

    groups = {"labeled-5": list(all_labeled_graphs(5))}
    if not small:
        groups["classes-7"] = graphs_up_to_isomorphism(7)
    for p in (11, 13):
        groups[f"random-{p}"] = random_graphs(p, random_count, seed=seed + p)
        groups[f"circulant-{p}"] = all_circulants(p)
    summary = {}
    ok = True
    for name, graphs in groups.items():
        vt_bad = at_bad = vt_yes = 0
        for g in graphs:
            rep = automorphisms(g)
            vt = recognize_vertex_transitive_prime(g).holds
            at = recognize_arc_transitive_prime(g).holds
            vt_yes += vt
            vt_bad += vt != is_vertex_transitive_exact(g, rep)
            at_bad += at != is_symmetric_exact(g, rep)
        summary[name] = {"graphs": len(graphs), "vertex_transitive": vt_yes,
                         "vt_disagreements": vt_bad, "at_disagreements": at_bad}
        ok &= vt_bad == 0 and at_bad == 0
    return ok, summary


def _cfi_petersen() -> tuple[bool, dict]:
    f = petersen()
    a, b = cfi_pair(f)
    ra, rb = automorphisms(a.base), automorphisms(b.base)
    iso = are_isomorphic(a.base, b.base)
    g, h, kb = hard_pair(f)
    dist2 = distinguish_report(g, h, 2).distinguished
    out = {"A_vertex_orbits": len(ra.vertex_orbits), "B_vertex_orbits": len(rb.vertex_orbits),
           "A_isomorphic_to_B": iso, "separator": kb, "distinguished_k2": dist2}
    ok = len(ra.vertex_orbits) == 1 and len(rb.vertex_orbits) == 1 and not iso and not dist2
    return ok, out


def _arc_torus() -> tuple[bool, dict]:
    f = torus(3)
    a, b = cfi_pair(f)
    ra, rb = automorphisms(a.base), automorphisms(b.base)
    g, h, kb = hard_pair(f)
    g_vt = len(automorphisms(g).vertex_orbits) == 1
    h_vt = len(automorphisms(h).vertex_orbits) == 1
    out = {"A_arc_orbits": len(ra.arc_orbits), "B_arc_orbits": len(rb.arc_orbits),
           "G_vertex_transitive": g_vt, "H_vertex_transitive": h_vt, "separator": kb}
    ok = len(ra.arc_orbits) == 1 and len(rb.arc_orbits) == 1 and g_vt and not h_vt
    return ok, out


def cmd_reproduce(args, manifest):
    if args.figure == "fig1":
        ok, out = _fig1()
    elif args.figure == "thm1-corpus":
        ok, out = _thm1_corpus(args.seed, args.random_count, args.small)
    elif args.figure == "cfi-petersen":
        ok, out = _cfi_petersen()
    else:
        ok, out = _arc_torus()
    out = {"figure": args.figure, "ok": ok, **out}
    lines = [f"{k}: {v}" for k, v in out.items()]
    return (EXIT_OK if ok else EXIT_PROPERTY), out, lines


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print JSON instead of text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=None, help="cap for BLAS/OpenMP threads")
    common.add_argument("--manifest", help="write a run manifest (JSON) to this path")

    parser = _Parser(prog="wlsym", description="Weisfeiler-Leman refinement, coherent configurations and CFI graphs.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", parents=[common], help="generate a graph")
    fam = p.add_mutually_exclusive_group(required=True)
    fam.add_argument("--circulant", nargs=2, metavar=("P", "Z"), help="modulus and comma-separated connection set")
    fam.add_argument("--paley", type=int, metavar="P")
    fam.add_argument("--dihedral", nargs=2, metavar=("Q", "EXPONENTS"))
    fam.add_argument("--cheng-oxley", type=int, metavar="P")
    fam.add_argument("--torus", type=int, metavar="L")
    fam.add_argument("--cycle", type=int, metavar="N")
    fam.add_argument("--complete", type=int, metavar="N")
    fam.add_argument("--petersen", action="store_true")
    p.add_argument("--complement", action="store_true")
    p.add_argument("-o", "--output", help="output file (.g6, .json, otherwise edge list)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("wl", parents=[common], help="stable k-WL coloring")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--individualize", type=int, metavar="U")
    p.add_argument("--full", action="store_true", help="include the full coloring in JSON output")
    p.set_defaults(func=cmd_wl)

    p = sub.add_parser("coherent", parents=[common], help="coherent closure of a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--extend", type=int, metavar="U", help="one-point extension at U")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--full", action="store_true")
    p.set_defaults(func=cmd_coherent)

    p = sub.add_parser("recognize", parents=[common], help="vertex/arc transitivity of a prime-order graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--property", choices=["vertex-transitive", "arc-transitive"], default="vertex-transitive")
    how = p.add_mutually_exclusive_group()
    how.add_argument("--prime-method", action="store_true", help="WL-based criteria (default)")
    how.add_argument("--oracle", action="store_true", help="exact automorphism search")
    how.add_argument("--check", action="store_true", help="run both; exit 2 on disagreement")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("distinguish", parents=[common], help="joint k-WL on two graphs")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--k", type=int, default=2)
    p.set_defaults(func=cmd_distinguish)

    p = sub.add_parser("cfi", parents=[common], help="CFI graphs over a template")
    p.add_argument("--template", required=True, help="petersen | torus:L | cheng-oxley:P | file:PATH")
    p.add_argument("--twists", help="twist edges, e.g. 0-1,2-5")
    p.add_argument("--pair", action="store_true", help="A and B = A twisted at the smallest edge")
    p.add_argument("--hard-pair", action="store_true", help="G = A+A and H = A+B")
    p.add_argument("--analyze", action="store_true", help="template report (nu, separator, bounds)")
    p.add_argument("-o", "--output", metavar="PREFIX", help="write PREFIX.<name>.g6 and PREFIX.json")
    p.set_defaults(func=cmd_cfi)

    p = sub.add_parser("reproduce", parents=[common], help="rerun a packaged experiment")
    p.add_argument("figure", choices=["fig1", "thm1-corpus", "cfi-petersen", "arc-torus"])
    p.add_argument("--random-count", type=int, default=500, help="random graphs per prime (thm1-corpus)")
    p.add_argument("--small", action="store_true", help="skip the 7-vertex class enumeration (thm1-corpus)")
    p.set_defaults(func=cmd_reproduce)
    return parser


def _render(value) -> object:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(args.threads)
    manifest = RunManifest(argv=argv, seed=args.seed, threads=args.threads, versions=_versions())
    start = time.perf_counter()
    try:
        code, out, lines = args.func(args, manifest)
    except (UsageError, GraphError, AssumptionViolated, BudgetExceeded) as exc:
        print(f"wlsym: error: {exc}", file=sys.stderr)
        code, out, lines = EXIT_USAGE, {"error": str(exc)}, []
    manifest.seconds = time.perf_counter() - start
    manifest.outputs = out
    manifest.exit_code = code
    if args.json:
        print(json.dumps(out, default=_render, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)
    if args.manifest:
        Path(args.manifest).write_text(json.dumps(manifest.to_json_dict(), default=_render, indent=2) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
