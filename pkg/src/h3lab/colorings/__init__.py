from .gcheck import GConditionReport, build_g, cond1_violation, cond2_brute, cond2_violation, matching_g, verify_g
from .pair import PairConstruction, chi_pair, decode_g, encode_g, g_from_red, materialize, random_f, red_arcs
from .search import (
    SearchResult,
    find_blue_clique,
    find_blue_ordered_tripartite,
    find_blue_tripartite_unordered,
    max_blue_clique,
    verify_blue_clique,
    verify_blue_tripartite,
)
from .stepup import (
    StepUpColoring,
    check_claim_exhaustive,
    check_property_one,
    check_property_two,
    chi_stepup,
    claim_bound,
    cycle_graph,
    delta,
    delta_monotone_extremes,
    stepup_host,
)

__all__ = [name for name in dir() if not name.startswith("_")]
