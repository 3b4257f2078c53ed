"""Exact persistence diagrams of vertex-filtered graphs, with two
diagram-preserving reductions: replacing a graph by a higher core before
computing higher diagrams, and pruning dominated vertices.
"""

from .coral import coral_reduce, core_numbers, degeneracy, kcore, kcore_peeling
from .errors import ClosureError, FormatError, InputError
from .filtration import (
    Filtration,
    build,
    build_power,
    build_sublevel,
    build_superlevel,
    enumerate_cliques,
    thresholds_of,
)
from .graph import (
    Graph,
    clustering_coefficient,
    connected_components,
    diameter,
    graph_power,
)
from .persistence import (
    INF,
    PersistenceDiagram,
    betti_numbers,
    compute_pd,
    pd0_unionfind,
)
from .prunit import PruneTrace, dominated_by, find_prunable, prunit
from .verify import (
    VerificationReport,
    oracle_pd,
    pd_equal,
    random_graph,
    verify_combined,
    verify_coral,
    verify_prunit,
)

__version__ = "0.1.0"

__all__ = [
    "ClosureError",
    "Filtration",
    "FormatError",
    "Graph",
    "INF",
    "InputError",
    "PersistenceDiagram",
    "PruneTrace",
    "VerificationReport",
    "betti_numbers",
    "build",
    "build_power",
    "build_sublevel",
    "build_superlevel",
    "clustering_coefficient",
    "compute_pd",
    "connected_components",
    "coral_reduce",
    "core_numbers",
    "degeneracy",
    "diameter",
    "dominated_by",
    "enumerate_cliques",
    "find_prunable",
    "graph_power",
    "kcore",
    "kcore_peeling",
    "oracle_pd",
    "pd0_unionfind",
    "pd_equal",
    "prunit",
    "random_graph",
    "thresholds_of",
    "verify_combined",
    "verify_coral",
    "verify_prunit",
]
