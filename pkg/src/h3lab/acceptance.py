"""Acceptance checks, shared by ``h3lab selftest`` and the test suite.

Each check returns a Result whose ``detail`` says what was measured; a check
that overruns its time limit fails even if its assertions hold.
"""

from __future__ import annotations

import contextlib
import io
import os
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    berge_cycle,
    complete,
    components,
    enumerate_all,
    glued_link_paths,
    glued_link_paths_parts,
    has_long_cycle,
    link_of_cycle,
    shadow,
    single_edge,
    tight_cycle,
    two_edge_b,
)

# frozen from an independent brute force over all colorings for N = 3..5
R_B_K4 = 5


@dataclass
class Result:
    id: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0
    limit: float = 0.0


MPAIR_TARGETS = [
    ("tight_cycle(5)", lambda: tight_cycle(5), Fraction(1, 2)),
    ("tight_cycle(6)", lambda: tight_cycle(6), Fraction(1, 3)),
    ("tight_cycle(7)", lambda: tight_cycle(7), Fraction(1, 2)),
    ("link_of_cycle(3)", lambda: link_of_cycle(3), Fraction(1, 2)),
    ("link_of_cycle(4)", lambda: link_of_cycle(4), Fraction(1, 3)),
    ("link_of_cycle(5)", lambda: link_of_cycle(5), Fraction(1, 2)),
    ("complete(4)", lambda: complete(4), Fraction(1, 2)),
]


def mpair_table() -> list[dict]:
    from .pairdensity import mpair_exact, verify_mpair_certificate

    rows = []
    for name, make, want in MPAIR_TARGETS:
        H = make()
        t0 = time.perf_counter()
        res = mpair_exact(H, threads=1)
        dt = time.perf_counter() - t0
        rows.append({"name": name, "want": want, "got": res.value, "seconds": dt,
                     "certified": verify_mpair_certificate(H, res.certificate())})
    return rows


def check_1() -> Result:
    rows = mpair_table()
    bad = [r for r in rows if r["got"] != r["want"] or not r["certified"] or r["seconds"] >= 300]
    parts = [f"{r['name']}={r['got']}" + ("" if r["got"] == r["want"] else f" (expected {r['want']})")
             for r in rows]
    return Result(1, "m_pair oracle values", not bad, "; ".join(parts))


def census_rows(n_max=5, e_max=4):
    from .pairdensity import HALF, THIRD, is_123_inducible, is_avoidable, mpair_exact

    out = []
    for H in enumerate_all(n_max, e_max):
        if H.e == 0:
            continue
        m = mpair_exact(H).value
        avoid, _ = is_avoidable(H)
        w, _ = is_123_inducible(H)
        out.append((H, m, avoid == (m >= HALF), (w is not None) == (m == THIRD)))
    return out


def check_2() -> Result:
    rows = census_rows()
    bad = [r for r in rows if not (r[2] and r[3])]
    return Result(2, "avoidability and 123-inducibility census", not bad,
                  f"{len(rows)} classes with <= 5 vertices and <= 4 edges, {len(bad)} exceptions")


def check_3() -> Result:
    from .pairdensity import HALF, check_pair_homomorphism, is_123_inducible, iterative_witness

    G = glued_link_paths()
    w, nodes = is_123_inducible(G, budget=None)
    U, V = glued_link_paths_parts()
    pp = iterative_witness(G, U + V)
    value = check_pair_homomorphism(G, pp.ordering, pp.block_lists())
    ok = w is None and value < HALF
    return Result(3, "glued link paths: not 123-inducible, witness below 1/2", ok,
                  f"inducibility search exhausted after {nodes} nodes; iterative witness density {value}")


def check_4() -> Result:
    total = bad = 0
    for G in enumerate_all(6, 4):
        if G.e == 0 or len(components(G)) != 1:
            continue
        total += 1
        v, e = len(G.support()), G.e
        acyclic = berge_cycle(G) is None
        adj = shadow(G).adjacency()
        ok = v <= 2 * e + 1 and ((v == 2 * e + 1) == acyclic)
        if v == 2 * e + 1 and has_long_cycle(adj, 4):
            ok = False
        bad += not ok
    return Result(4, "tree census", bad == 0,
                  f"{total} connected classes with <= 6 vertices and <= 4 edges, {bad} exceptions")


def check_5() -> Result:
    from .colorings.stepup import check_claim_exhaustive, check_property_one, check_property_two

    p1 = [check_property_one(m, 10 ** 6, seed=m) for m in range(2, 13)]
    p2 = check_property_two(12, 10 ** 5, 5, seed=0)
    claims = [check_claim_exhaustive(m) for m in range(1, 5)]
    v1 = sum(r["violations"] for r in p1)
    v3 = sum(len(c["violations"]) for c in claims)
    ok = v1 == 0 and p2["violations"] == 0 and v3 == 0
    checked = sum(r["checked"] for r in p1)
    return Result(5, "stepping-up properties and claim", ok,
                  f"property I: {checked} triples over m=2..12, {v1} violations; "
                  f"property II: {p2['checked']} chains, {p2['violations']} violations; "
                  f"claim: {sum(c['subsets'] for c in claims)} subsets for m<=4, {v3} violations")


def check_6() -> Result:
    from .colorings.gcheck import verify_g, matching_g
    from .colorings.pair import PairConstruction, materialize, random_f
    from .ramsey import verify_coloring

    H = tight_cycle(5)
    fails = []
    for seed in range(10):
        g = matching_g(9, seed)
        rep = verify_g(g, 9, 10, 0.5, mode="exact")
        pc = PairConstruction(30, 9, random_f(30, 9, seed), g, seed)
        verdict, r = verify_coloring(materialize(pc), H, None, budget=None)
        if not (rep.cond1 and rep.cond2 and verdict == "no-violation" and r["red"]["exhaustive"]):
            fails.append(seed)
    return Result(6, "end-to-end red exclusion", not fails,
                  f"10 seeds, N=30, t=9, k_max=10; seeds with a red C5 or a failed condition: {fails}")


def check_7() -> Result:
    from .randstruct import check_cover_property1, count_b_copies, sample_linear_system

    bad = []
    p1 = []
    for k in (200, 500):
        for seed in range(10):
            F, rep = sample_linear_system(k, seed)
            if not rep.linear or count_b_copies(F.edges) != 0:
                bad.append((k, seed))
            v = check_cover_property1(F, trials=1000, seed=seed)
            p1.append(f"{k}/{seed}:{v.failures}")
    return Result(7, "linear triple systems", not bad,
                  f"20 samples linear and B-free ({len(bad)} failures); property-1 failures per 1000 trials "
                  + " ".join(p1))


def ramsey_catalog():
    from .ramsey import BlueTarget

    reds = [H for H in enumerate_all(6, 4) if H.e > 0]
    blues = [BlueTarget("clique", q) for q in (3, 4, 5)] + [BlueTarget("nnn", n) for n in (1, 2)]
    return reds, blues


def check_8() -> Result:
    from .ramsey import BlueTarget, RamseyInstance, decide, ramsey_number

    reds, blues = ramsey_catalog()
    n = mismatches = 0
    for H in reds:
        for blue in blues:
            for N in range(3, 7):
                a = decide(RamseyInstance(H, blue, N, "exhaustive")).verdict
                b = decide(RamseyInstance(H, blue, N, "backtracking")).verdict
                n += 1
                mismatches += a != b
    edge = [ramsey_number(single_edge(), BlueTarget("clique", q), 6)[0] for q in (4, 5, 6)]
    rb = ramsey_number(two_edge_b(), BlueTarget("clique", 4), 6)[0]
    ok = mismatches == 0 and edge == [4, 5, 6] and rb == R_B_K4
    return Result(8, "Ramsey oracle", ok,
                  f"{n} instances, {mismatches} mode mismatches; r(edge, q) for q=4,5,6: {edge}; "
                  f"r(B, 4) = {rb} (frozen {R_B_K4})")


def cli_determinism_runs(tmp: str) -> list[list[str]]:
    """Argument lists covering every subcommand except selftest."""
    from .cli import main

    def p(name):
        return os.path.join(tmp, name)

    with contextlib.redirect_stdout(io.StringIO()):
        main(["gen", "tight-cycle", "5", "-o", p("c5.h3")])
        main(["gen", "edge", "-o", p("e.h3")])
        main(["gen", "link-path", "4", "-o", p("lp.h3")])
        main(["color", "pair", "--N", "12", "--t", "9", "--g", "matching", "--seed", "2", "-o", p("col.json")])
        main(["color", "stepup", "--m", "4", "-o", p("su.json")])
    return [
        ["gen", "link-cycle", "4"],
        ["mpair", p("c5.h3")],
        ["avoidable", p("c5.h3")],
        ["inducible", p("c5.h3")],
        ["check-hom", p("lp.h3")],
        ["color", "pair", "--N", "12", "--t", "8", "--seed", "5", "--k-max", "6", "--trials", "50"],
        ["color", "stepup", "--m", "4"],
        ["scan", p("su.json"), "--red", p("e.h3"), "--blue-clique", "4", "--blue-tripartite", "2"],
        ["steiner", "--k", "60", "--seed", "3", "--check", "1,2,3", "--samples", "30"],
        ["sparse", "--m", "14", "--k", "16", "--n", "5", "--seed", "1", "--p", "0.4", "--samples", "30"],
        ["ramsey", "--red", p("e.h3"), "--blue", "4", "--max-N", "5"],
        ["verify", p("col.json"), "--red", p("c5.h3"), "--blue", "4"],
    ]


def run_cli(argv) -> tuple[int, str]:
    from .cli import main

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


def check_9() -> Result:
    differing = []
    with tempfile.TemporaryDirectory() as tmp:
        runs = cli_determinism_runs(tmp)
        for argv in runs:
            outs = [run_cli(argv + ["--threads", str(th)]) for th in (1, 4, 1)]
            if len({o for o in outs}) != 1:
                differing.append(argv[0])
    return Result(9, "CLI determinism", not differing,
                  f"{len(runs)} subcommands run three times (threads 1, 4, 1); differing: {differing}")


CHECKS = {1: (check_1, 300 * 7), 2: (check_2, 600), 3: (check_3, 1800), 4: (check_4, 300),
          5: (check_5, 300), 6: (check_6, 1200), 7: (check_7, 600), 8: (check_8, 600), 9: (check_9, 600)}


def run_check(i: int) -> Result:
    fn, limit = CHECKS[i]
    t0 = time.perf_counter()
    r = fn()
    r.seconds = time.perf_counter() - t0
    r.limit = limit
    if r.seconds >= limit:
        r.passed = False
        r.detail += f"; overran the {limit}s limit"
    return r


def run_all(only=None, log=None) -> list[Result]:
    out = []
    for i in sorted(CHECKS):
        if only and i not in only:
            continue
        r = run_check(i)
        if log is not None:
            log.write(f"criterion {i}: {'PASS' if r.passed else 'FAIL'} ({r.seconds:.1f}s) {r.detail}\n")
        out.append(r)
    return out

