import pytest

from h3lab.core import Color, Host, enumerate_all, single_edge, tight_cycle, two_edge_b
from h3lab.errors import SizeLimitError
from h3lab.ramsey import BlueTarget, RamseyInstance, decide, ramsey_number, verify_coloring

CLIQUE4 = BlueTarget("clique", 4)


def _replays(inst, out):
    host = Host.from_red_triples(inst.N, out.coloring)
    res, _ = verify_coloring(host, inst.red_target, inst.blue_target)
    return res == "no-violation"


@pytest.mark.parametrize("q", [3, 4, 5])
@pytest.mark.parametrize("N", range(3, 7))
def test_single_edge_forces_blue(q, N):
    out = decide(RamseyInstance(single_edge(), BlueTarget("clique", q), N, "backtracking"))
    assert out.verdict == ("ramsey" if N >= q else "good-coloring-found")


def test_empty_host_is_good():
    for N in range(3):
        out = decide(RamseyInstance(single_edge(), CLIQUE4, N, "exhaustive"))
        assert out.verdict == "good-coloring-found"


def test_b_against_four_clique():
    for N in range(4, 7):
        ex = decide(RamseyInstance(two_edge_b(), CLIQUE4, N, "exhaustive"))
        bt = decide(RamseyInstance(two_edge_b(), CLIQUE4, N, "backtracking"))
        assert ex.verdict == bt.verdict == ("ramsey" if N >= 5 else "good-coloring-found")
    assert ramsey_number(two_edge_b(), CLIQUE4, 6)[0] == 5


@pytest.mark.parametrize("q", [4, 5, 6])
def test_ramsey_number_single_edge(q):
    assert ramsey_number(single_edge(), BlueTarget("clique", q), 6)[0] == q


CATALOG = [H for H in enumerate_all(6, 4) if H.e > 0]


@pytest.mark.parametrize("H", CATALOG, ids=lambda H: str(H.edges))
def test_modes_agree_and_witnesses_replay(H):
    for blue in (BlueTarget("clique", 4), BlueTarget("nnn", 1)):
        for N in (4, 5, 6):
            ex = decide(RamseyInstance(H, blue, N, "exhaustive"))
            bt = decide(RamseyInstance(H, blue, N, "backtracking"))
            plain = decide(RamseyInstance(H, blue, N, "backtracking", symmetry_breaking=False))
            assert ex.verdict == bt.verdict == plain.verdict
            if bt.verdict == "good-coloring-found":
                assert _replays(RamseyInstance(H, blue, N, "backtracking"), bt)


def test_ramsey_verdict_reports_completed_search():
    # unit propagation alone refutes the single edge, so use B for a real tree
    out = decide(RamseyInstance(single_edge(), CLIQUE4, 5, "backtracking"))
    assert out.verdict == "ramsey" and out.stats["open_branches"] == 0
    out = decide(RamseyInstance(two_edge_b(), CLIQUE4, 5, "backtracking"))
    assert out.verdict == "ramsey" and out.stats["open_branches"] == 0 and out.stats["nodes"] >= 1


def test_exhaustive_size_cap():
    with pytest.raises(SizeLimitError):
        RamseyInstance(single_edge(), CLIQUE4, 7, "exhaustive")


def test_verify_coloring_trivial_hosts():
    blue = Host.constant(6, Color.BLUE)
    verdict, rep = verify_coloring(blue, tight_cycle(5), CLIQUE4)
    assert verdict == "violation" and not rep["red"]["found"] and rep["blue"]["found"]
    red = Host.constant(6, Color.RED)
    verdict, rep = verify_coloring(red, single_edge(), CLIQUE4)
    assert verdict == "violation" and rep["red"]["found"]


def test_verify_coloring_small_blue_host_passes():
    blue = Host.constant(3, Color.BLUE)
    verdict, _ = verify_coloring(blue, single_edge(), CLIQUE4)
    assert verdict == "no-violation"
