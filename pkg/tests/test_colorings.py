from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from h3lab.colorings import (
    PairConstruction,
    StepUpColoring,
    build_g,
    chi_pair,
    chi_stepup,
    claim_bound,
    cond2_brute,
    cond2_violation,
    cycle_graph,
    decode_g,
    delta,
    delta_monotone_extremes,
    encode_g,
    find_blue_clique,
    find_blue_ordered_tripartite,
    g_from_red,
    materialize,
    matching_g,
    max_blue_clique,
    random_f,
    stepup_host,
    verify_blue_clique,
    verify_blue_tripartite,
    verify_g,
)
from h3lab.colorings.stepup import check_claim_exhaustive, check_property_one, check_property_two
from h3lab.core import Color, Host


# --- random pair colorings ----------------------------------------------------------


def test_random_f_single_value():
    assert not random_f(10, 1, seed=3).any()


def test_random_f_reproducible():
    assert np.array_equal(random_f(10, 5, seed=7), random_f(10, 5, seed=7))
    assert not np.array_equal(random_f(10, 5, seed=7), random_f(10, 5, seed=8))


def test_random_f_roughly_uniform():
    f = random_f(200, 4, seed=11)
    n = f.size
    mean, sd = n / 4, np.sqrt(n * 0.25 * 0.75)
    counts = np.bincount(f, minlength=4)
    assert np.all(np.abs(counts - mean) <= 4 * sd)


def test_g_encoding_roundtrip():
    rng = np.random.default_rng(0)
    g = rng.random((9, 9, 9)) < 0.1
    assert np.array_equal(decode_g(encode_g(g), 9), g)


# --- chi ------------------------------------------------------------------------------


def _three_vertex_pc(g):
    # pairs in order (0,1), (0,2), (1,2): f(uv)=0, f(uw)=2, f(vw)=1
    return PairConstruction(3, 3, np.array([0, 2, 1]), g)


def test_chi_pair_rule():
    assert chi_pair(_three_vertex_pc(g_from_red(3, [(0, 1, 2)])), 0, 1, 2) == Color.RED


def test_chi_pair_ignores_permuted_lookup():
    assert chi_pair(_three_vertex_pc(g_from_red(3, [(1, 0, 2)])), 0, 1, 2) == Color.BLUE


def test_chi_pair_all_blue():
    pc = PairConstruction(8, 3, random_f(8, 3, 0), np.zeros((3, 3, 3), dtype=bool))
    host = materialize(pc)
    assert not host.table().any()


def test_chi_pair_rejects_unordered():
    with pytest.raises(ValueError):
        chi_pair(_three_vertex_pc(g_from_red(3, [])), 1, 0, 2)


@settings(max_examples=20, deadline=None)
@given(st.integers(3, 14), st.integers(2, 6), st.integers(0, 10 ** 6))
def test_materialize_matches_rule(N, t, seed):
    rng = np.random.default_rng(seed)
    pc = PairConstruction(N, t, random_f(N, t, seed), rng.random((t, t, t)) < 0.3)
    host = materialize(pc)
    for u, v, w in combinations(range(N), 3):
        assert host.color(u, v, w) == chi_pair(pc, u, v, w)
        assert host.is_red(w, u, v) == host.is_red(u, v, w)


# --- conditions on g ---------------------------------------------------------------------


def test_all_blue_table():
    rep = verify_g(np.zeros((9, 9, 9), dtype=bool), 9, 6, 0.99, mode="exact")
    assert rep.cond1 and rep.cond2
    assert rep.cond3["verdict"] == "refuted"


def test_two_permutations_break_cond1():
    rep = verify_g(g_from_red(9, [(0, 1, 2), (1, 0, 2)]), 9, 6, 0.5)
    assert not rep.cond1


def test_matching_satisfies_cond2():
    g = g_from_red(9, [(0, 1, 2), (3, 4, 5), (6, 7, 8)])
    assert cond2_violation(g, 6) is None
    assert cond2_brute(g, 6)


def test_dense_configuration_breaks_cond2():
    g = g_from_red(6, [(0, 1, 2), (0, 3, 4), (1, 3, 5), (2, 4, 5)])
    w = cond2_violation(g, 6)
    assert w is not None and w["set"] == [0, 1, 2, 3, 4, 5] and len(w["arcs"]) == 4


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 8), st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7), st.integers(0, 7)),
                                    max_size=8), st.integers(3, 7))
def test_cond2_agrees_with_subset_scan(t, arcs, k_max):
    arcs = [a for a in arcs if len(set(a)) == 3 and max(a) < t]
    # keep one orientation per triple so both views count the same arcs
    seen, kept = set(), []
    for a in arcs:
        if frozenset(a) not in seen:
            seen.add(frozenset(a))
            kept.append(a)
    g = g_from_red(t, kept)
    assert (cond2_violation(g, k_max) is None) == cond2_brute(g, k_max)


def test_matching_g_verifies_exactly():
    for seed in range(4):
        rep = verify_g(matching_g(9, seed), 9, 10, 0.5, mode="exact")
        assert rep.cond1 and rep.cond2


def test_build_g_report_reflects_final_table():
    g, rep, info = build_g(16, 0.5, 6, seed=1)
    again = verify_g(g, 16, 6, 0.5, trials=200, seed=1)
    assert g.shape == (16, 16, 16)
    assert rep.cond1 == again.cond1 and rep.cond2 == again.cond2
    assert rep.cond1 and rep.cond2
    assert len(info["kept"]) == 16


def test_build_g_rejects_small_palette():
    with pytest.raises(ValueError):
        build_g(4, 0.5, 6, seed=0)


# --- stepping up -----------------------------------------------------------------------------


def test_delta_examples():
    assert delta(0, 1) == 0
    assert delta(5, 6) == 1
    assert delta(1, 4) == max(delta(1, 2), delta(2, 4)) == 2
    with pytest.raises(ValueError):
        delta(3, 3)


def test_chi_stepup_examples():
    sc = StepUpColoring(2, ((0, 1),))
    assert chi_stepup(sc, 0, 2, 3) == Color.RED
    assert chi_stepup(sc, 0, 1, 2) == Color.BLUE
    empty = StepUpColoring(3, ())
    assert not stepup_host(empty).table().any()
    with pytest.raises(ValueError):
        chi_stepup(sc, 2, 0, 3)


def test_monotone_extremes_examples():
    assert delta_monotone_extremes([0, 1, 2]) == (3, 2)
    assert delta_monotone_extremes([0, 1]) == (2, 2)


def test_claim_bound_small_m():
    for m in range(1, 5):
        res = check_claim_exhaustive(m)
        assert not res["violations"]


def test_properties_one_and_two():
    for m in range(2, 9):
        assert check_property_one(m, 20_000, seed=m)["violations"] == 0
    assert check_property_two(10, 5_000, 5, seed=0)["violations"] == 0


def test_stepup_blue_clique_respects_claim():
    sc = StepUpColoring(5, cycle_graph(5))
    host = stepup_host(sc)
    A, _ = max_blue_clique(host)
    inc, dec = delta_monotone_extremes(A)
    assert len(A) <= claim_bound(inc + 1, dec + 1)
    assert find_blue_clique(host, len(A) + 1).certificate is None


# --- searches ---------------------------------------------------------------------------


def test_blue_searches_trivial_hosts():
    blue = Host.constant(8, Color.BLUE)
    red = Host.constant(8, Color.RED)
    box = find_blue_ordered_tripartite(blue, 2)
    assert box.found and box.exhaustive and verify_blue_tripartite(blue, box.certificate)
    assert not find_blue_clique(red, 3).found
    cl = find_blue_clique(blue, 5)
    assert cl.found and verify_blue_clique(blue, cl.certificate)


@settings(max_examples=25, deadline=None)
@given(st.integers(6, 10), st.integers(0, 10 ** 6))
def test_blue_clique_search_matches_brute(N, seed):
    rng = np.random.default_rng(seed)
    host = Host.from_table(rng.random((N, N, N)) < 0.15)

    def blue(S):
        return all(not host.is_red(*t) for t in combinations(S, 3))

    best, _ = max_blue_clique(host)
    assert blue(best)
    bigger = len(best) + 1
    assert not any(blue(S) for S in combinations(range(N), bigger))
    if len(best) >= 3:
        assert verify_blue_clique(host, find_blue_clique(host, len(best)).certificate)
    assert not find_blue_clique(host, bigger).found


@settings(max_examples=20, deadline=None)
@given(st.integers(6, 9), st.integers(0, 10 ** 6))
def test_ordered_tripartite_matches_brute(N, seed):
    rng = np.random.default_rng(seed)
    host = Host.from_table(rng.random((N, N, N)) < 0.1)
    res = find_blue_ordered_tripartite(host, 2)
    brute = any(all(not host.is_red(i, j, k) for i in I for j in J for k in K)
                for I in combinations(range(N), 2) for J in combinations(range(I[1] + 1, N), 2)
                for K in combinations(range(J[1] + 1, N), 2))
    assert res.found == brute
    if res.found:
        assert verify_blue_tripartite(host, res.certificate)
