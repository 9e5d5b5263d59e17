from .berge import (
    TreeCensus,
    berge_cycle,
    components,
    has_long_cycle,
    shadow_buildable,
    tree_census,
    verify_berge_cycle,
    verify_build_order,
)
from .canon import automorphisms, canonical_form, canonical_graph, enumerate_all, is_isomorphic
from .certificate import Certificate
from .embed import Color, Host, count_copies_brute, find_copy, verify_embedding
from .graph import (
    GENERATORS,
    OrientedThreeGraph,
    Shadow,
    ThreeGraph,
    complete,
    glued_link_paths,
    glued_link_paths_parts,
    is_linear,
    link_of_cycle,
    link_of_path,
    shadow,
    single_edge,
    tight_cycle,
    two_edge_b,
)
from .io import FormatError, dumps_h3, dumps_oh3, loads_h3, loads_oh3, read_h3, read_oh3, write_h3, write_oh3

__all__ = [name for name in dir() if not name.startswith("_")]
