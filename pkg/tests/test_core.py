from itertools import combinations, permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from h3lab.core import (
    Color,
    FormatError,
    Host,
    ThreeGraph,
    berge_cycle,
    canonical_form,
    complete,
    components,
    count_copies_brute,
    dumps_h3,
    enumerate_all,
    find_copy,
    glued_link_paths,
    glued_link_paths_parts,
    has_long_cycle,
    is_isomorphic,
    is_linear,
    link_of_cycle,
    link_of_path,
    loads_h3,
    loads_oh3,
    dumps_oh3,
    OrientedThreeGraph,
    shadow,
    shadow_buildable,
    single_edge,
    tight_cycle,
    tree_census,
    two_edge_b,
    verify_berge_cycle,
    verify_build_order,
    verify_embedding,
)
from h3lab.core.canon import automorphisms

SMALL = [H for H in enumerate_all(6, 4) if H.e > 0]


@st.composite
def three_graphs(draw, n_max=7, e_max=6):
    n = draw(st.integers(3, n_max))
    triples = list(combinations(range(n), 3))
    edges = draw(st.lists(st.sampled_from(triples), max_size=e_max, unique=True))
    return ThreeGraph(n, edges)


# --- generators ---------------------------------------------------------


def test_tight_cycle_four_is_complete_four():
    assert is_isomorphic(tight_cycle(4), complete(4))
    assert canonical_form(tight_cycle(4)) == canonical_form(complete(4))


def test_link_of_cycle_three():
    L = link_of_cycle(3)
    assert L.n == 4 and L.e == 3
    apex = 3
    assert all(apex in e for e in L.edges)
    assert sorted(tuple(x for x in e if x != apex) for e in L.edges) == [(0, 1), (0, 2), (1, 2)]


def test_link_of_path_counts():
    for n in range(1, 8):
        L = link_of_path(n)
        assert L.e == n - 1 if n > 1 else L.e == 0


def test_generator_ranges():
    with pytest.raises(ValueError):
        tight_cycle(2)
    with pytest.raises(ValueError):
        link_of_path(0)


def test_glued_link_paths_shape():
    G = glued_link_paths()
    U, V = glued_link_paths_parts()
    assert len(G.support()) == 18
    # the two glued paths never share an edge or a pair
    Upairs = {p for e in U for p in combinations(sorted(e), 2)}
    Vpairs = {p for e in V for p in combinations(sorted(e), 2)}
    assert not set(map(tuple, U)) & set(map(tuple, V))
    assert not Upairs & Vpairs
    assert G.e == len(U) + len(V)


def test_invalid_edges_rejected():
    with pytest.raises(ValueError):
        ThreeGraph(3, [(0, 0, 1)])
    with pytest.raises(ValueError):
        ThreeGraph(3, [(0, 1, 3)])
    with pytest.raises(ValueError):
        ThreeGraph(4, [(0, 1, 2), (2, 1, 0)])


# --- Berge cycles -------------------------------------------------------


def test_single_edge_is_acyclic():
    assert berge_cycle(single_edge()) is None


def test_b_has_two_cycle():
    cert = berge_cycle(two_edge_b())
    assert cert is not None and verify_berge_cycle(two_edge_b(), cert)
    assert len(cert.witness["edges"]) == 2


def test_tight_cycle_has_berge_cycle():
    for n in range(4, 9):
        cert = berge_cycle(tight_cycle(n))
        assert cert is not None and verify_berge_cycle(tight_cycle(n), cert)


def test_empty_graph_degenerate():
    E = ThreeGraph(5, [])
    assert berge_cycle(E) is None
    assert shadow_buildable(E) is not None
    assert is_linear(E)


@pytest.mark.parametrize("H", SMALL, ids=lambda H: str(H.edges))
def test_berge_certificates_verify(H):
    cert = berge_cycle(H)
    if cert is not None:
        assert verify_berge_cycle(H, cert)


def test_tree_census_clauses():
    for G in SMALL:
        if len(components(G)) != 1:
            continue
        c = tree_census(G)
        assert c.v <= 2 * c.e + 1
        assert (c.v == 2 * c.e + 1) == c.acyclic
        if c.acyclic:
            assert not c.shadow_long_cycle


def test_has_long_cycle():
    square = [{1, 3}, {0, 2}, {1, 3}, {0, 2}]
    triangle = [{1, 2}, {0, 2}, {0, 1}]
    assert has_long_cycle(square, 4)
    assert not has_long_cycle(triangle, 4)


# --- shadow buildability -------------------------------------------------


def _buildable_brute(H):
    for order in permutations(H.edges):
        seen = set()
        ok = True
        for e in order:
            pairs = set(combinations(e, 2))
            if pairs <= seen:
                ok = False
                break
            seen |= pairs
        if ok:
            return True
    return False


def test_shadow_buildable_examples():
    c5 = shadow_buildable(tight_cycle(5))
    assert c5 is not None and verify_build_order(tight_cycle(5), c5)
    assert shadow_buildable(complete(4)) is None
    assert shadow_buildable(single_edge()) is not None


@pytest.mark.parametrize("H", SMALL, ids=lambda H: str(H.edges))
def test_shadow_buildable_matches_brute_force(H):
    cert = shadow_buildable(H)
    assert (cert is not None) == _buildable_brute(H)
    if cert is not None:
        assert verify_build_order(H, cert)


# --- embeddings -----------------------------------------------------------


def test_find_copy_trivial():
    blue = Host.constant(5, Color.BLUE)
    cert = find_copy(blue, single_edge(), "blue")
    assert cert is not None and verify_embedding(blue, single_edge(), cert)
    assert find_copy(blue, single_edge(), "red") is None


def test_find_copy_star_host():
    host = Host.from_red_triples(6, [t for t in combinations(range(6), 3) if 0 in t])
    B = two_edge_b()
    cert = find_copy(host, B, Color.RED)
    assert cert is not None and verify_embedding(host, B, cert)


@settings(max_examples=40, deadline=None)
@given(st.integers(5, 9), st.integers(0, 2 ** 32 - 1), st.sampled_from([H for H in SMALL if H.n <= 6]))
def test_find_copy_agrees_with_enumeration(N, seed, H):
    rng = np.random.default_rng(seed)
    host = Host.from_table(rng.random((N, N, N)) < 0.6)
    cert = find_copy(host, H, "red")
    total = count_copies_brute(host, H, "red")
    assert (cert is not None) == (total > 0)
    if cert is not None:
        assert verify_embedding(host, H, cert)


# --- canonical forms --------------------------------------------------------


def test_canonical_examples():
    assert canonical_form(ThreeGraph(4, [(0, 1, 2)])) == canonical_form(ThreeGraph(4, [(1, 2, 3)]))
    a = ThreeGraph(5, [(0, 1, 2), (0, 1, 3)])
    b = ThreeGraph(5, [(0, 1, 2), (2, 3, 4)])
    assert canonical_form(a) != canonical_form(b)


@settings(max_examples=80, deadline=None)
@given(three_graphs(), st.randoms(use_true_random=False))
def test_canonical_form_relabel_invariant(H, rnd):
    perm = list(range(H.n))
    rnd.shuffle(perm)
    assert canonical_form(H.relabel(perm)) == canonical_form(H)


def test_enumeration_is_duplicate_free():
    forms = [canonical_form(H) for H in enumerate_all(6, 4)]
    assert len(forms) == len(set(forms))


def test_automorphisms_of_tight_cycle():
    # dihedral group of order 2n for n >= 5
    assert len(automorphisms(tight_cycle(6))) == 12
    assert len(automorphisms(complete(4))) == 24


# --- io ----------------------------------------------------------------------


@settings(max_examples=50, deadline=None)
@given(three_graphs())
def test_h3_roundtrip(H):
    assert loads_h3(dumps_h3(H)) == H


def test_h3_header():
    assert dumps_h3(tight_cycle(5)).splitlines()[0] == "h3 5 5"


@pytest.mark.parametrize("text", ["h3 3 1\n0 1\n", "h3 3 2\n0 1 2\n", "h3 3 1\n0 1 5\n", "nope\n"])
def test_h3_malformed(text):
    with pytest.raises(FormatError):
        loads_h3(text)


def test_oh3_roundtrip():
    G = OrientedThreeGraph(4, [(2, 0, 1), (1, 3, 0)])
    assert loads_oh3(dumps_oh3(G)) == G


def test_oh3_rejects_two_orientations():
    with pytest.raises((FormatError, ValueError)):
        loads_oh3("oh3 3 2\n0 1 2\n2 1 0\n")


def test_shadow_of_tight_cycle():
    S = shadow(tight_cycle(5))
    assert len(S) == 10 and (0, 2) in S and (2, 0) in S
