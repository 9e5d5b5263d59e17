from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from h3lab.core import ThreeGraph, is_linear
from h3lab.randstruct import (
    check_cover_property1,
    check_cover_property2,
    check_cover_property3,
    count_b_copies,
    expected_retained,
    greedy_b_family,
    independence_brute,
    independence_number,
    replay_independent,
    replay_property1,
    sample_linear_system,
    sample_sparse_graph,
    unrank_triple,
)


def test_unrank_triple_is_lexicographic():
    assert [unrank_triple(7, r) for r in range(comb(7, 3))] == list(combinations(range(7), 3))


@pytest.mark.parametrize("seed", range(5))
def test_linear_system_is_b_free(seed):
    F, rep = sample_linear_system(200, seed)
    assert rep.linear and is_linear(F)
    assert count_b_copies(F.edges) == 0
    assert rep.edges_after == F.e


def test_linear_system_denser_override_still_linear():
    F, rep = sample_linear_system(60, 0, p_override=0.01)
    assert rep.b_copies_removed > 0
    assert is_linear(F) and count_b_copies(F.edges) == 0


def test_linear_system_empty_override():
    F, rep = sample_linear_system(200, 0, p_override=0)
    assert F.e == 0 and rep.linear


def test_retained_edge_mean():
    k = 200
    counts = [sample_linear_system(k, s)[1].edges_after for s in range(20)]
    expected = expected_retained(k, 1 / (200 * k))
    assert 0.5 * expected <= np.mean(counts) <= expected


def test_greedy_family_is_edge_disjoint():
    edges = [(0, 1, 2), (0, 1, 3), (0, 1, 4), (2, 3, 4), (2, 3, 5)]
    fam = greedy_b_family(edges)
    used = [e for pair in fam for e in pair]
    assert len(used) == len(set(used))
    rest = [e for e in edges if e not in used]
    assert count_b_copies(rest) == 0


def test_property1_full_vertex_set():
    F = ThreeGraph(9, [(0, 1, 2), (3, 4, 5), (6, 7, 8)])
    assert check_cover_property1(F, subset_size=9).status == "verified-exact"


def test_property1_empty_refuted():
    F = ThreeGraph(12, [])
    v = check_cover_property1(F, subset_size=3)
    assert v.status == "refuted" and replay_property1(F, v.witness)


def test_property1_sampled_witnesses_replay():
    F, _ = sample_linear_system(500, 0)
    v = check_cover_property1(F, trials=1000, seed=0)
    assert v.trials == 1000 and 0 <= v.failures <= 1000
    if v.failures:
        assert replay_property1(F, v.witness)


def test_property2_and_property3_examples():
    F = ThreeGraph(3, [(0, 1, 2)])
    assert check_cover_property2(F, {0}, {1, 2})[0]
    assert check_cover_property3(F, {0}, [{1}, {2}])["count"] == 1
    assert check_cover_property3(F, {0}, [{1, 2}])["count"] == 0


def test_property3_threshold_is_exact():
    F = ThreeGraph(10, [(0, 1, 2)])
    res = check_cover_property3(F, {0, 3}, [{1, 4}, {2}, {5, 6}])
    assert Fraction(res["threshold"]) == Fraction(2, 5000) * (2 * 1 + 2 * 2 + 1 * 2)


def test_sparse_graph_extremes():
    edges, rep = sample_sparse_graph(10, 16, 3, seed=0, p_override=1)
    assert len(edges) == 45 and rep.independence.notes["alpha"] == 1
    edges, rep = sample_sparse_graph(10, 16, 3, seed=0, p_override=0)
    assert rep.independence.status == "refuted"
    assert replay_independent(edges, rep.independence.witness)


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 14), st.floats(0, 1), st.integers(0, 10 ** 6))
def test_independence_number_matches_brute(m, p, seed):
    rng = np.random.default_rng(seed)
    edges = [e for e in combinations(range(m), 2) if rng.random() < p]
    alpha, S = independence_number(m, edges)
    assert alpha == independence_brute(m, edges) == len(S)
    assert replay_independent(edges, S)


def test_sparse_graph_exact_at_twenty():
    edges, rep = sample_sparse_graph(20, 16, 6, seed=4, p_override=0.5)
    alpha, _ = independence_number(20, edges)
    assert rep.independence.notes["alpha"] == alpha
