"""Non-essential arcs in phylogenetic networks.

Tree-child networks, their caterpillar ladders, brute-force display-set
oracles and a containment-to-essentiality reduction.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import CapExceededError, NetworkError, NewickSyntaxError, NotTreeChildError
from .gadget import GadgetInstance, build_gadget, display_set_containment_bruteforce, verify_reduction
from .generators import (
    caterpillar_ladder,
    random_level_one,
    random_network,
    random_normal,
    random_tree,
    random_tree_child,
    stack_network,
)
from .ladders import (
    LadderEmbedding,
    SimplificationTrace,
    Tightness,
    all_tight_ladders,
    check_ladder,
    find_tight_ladder,
    nonessential_arcs,
    simplify,
)
from .network import (
    Network,
    ValidationReport,
    VertexKind,
    Violation,
    delete_arc_tree_child,
    full_simplification,
    has_directed_path,
    has_tree_path,
    is_isomorphic,
    is_level_one,
    is_normal,
    is_shortcut,
    is_tree_child,
    validate,
)
from .newick import canonical_tree_string, parse_enewick, read_networks, serialize_enewick, write_networks
from .oracle import (
    DisplayMultiset,
    Embedding,
    display_multiset,
    display_set,
    display_sets_equal,
    displays,
    enumerate_embeddings,
    is_essential_bruteforce,
    is_essential_by_embeddings,
    nonessential_bruteforce,
    resolve_embedding,
)

