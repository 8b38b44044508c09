"""Bridgeness centrality toolkit.

Decomposes betweenness centrality into a global (bridgeness) and a local
term, scores community bridges with an inverse-link-count indicator, detects
communities by modularity optimization, generates planted-partition
benchmark networks without degree-biased bridges, and compares rankings
against the community indicator.
"""

__version__ = "0.1.0"

from .centrality import (
    CentralityResult,
    betweenness,
    bridgeness_bruteforce,
    bridgeness_exact,
    bridgeness_si_compat,
    locterm_by_degree,
)
from .community import LouvainConfig, LouvainRun, louvain, louvain_passes, modularity
from .evaluation import (
    RankingCurve,
    cumulative_ratio_curve,
    curve_advantage,
    locterm_correlation,
    node_report,
    smooth,
)
from .graph import (
    EdgeListError,
    Graph,
    NodeTable,
    Partition,
    PartitionError,
    clustering_coefficient,
    degree,
    load_edge_list,
    load_partition,
    write_edge_list,
    write_partition,
)
from .indicator import (
    CommunityLinkMatrix,
    GlobalIndicatorResult,
    community_link_matrix,
    global_indicator,
    inter_community_fraction,
)
from .netgen import (
    BridgeDegreeBias,
    GeneratedNetwork,
    GenerationError,
    LfrConfig,
    bridge_degree_bias,
    generate,
)

__all__ = [
    "__version__",
    "Graph",
    "NodeTable",
    "Partition",
    "EdgeListError",
    "PartitionError",
    "load_edge_list",
    "load_partition",
    "write_edge_list",
    "write_partition",
    "degree",
    "clustering_coefficient",
    "CentralityResult",
    "betweenness",
    "bridgeness_exact",
    "bridgeness_bruteforce",
    "bridgeness_si_compat",
    "locterm_by_degree",
    "CommunityLinkMatrix",
    "GlobalIndicatorResult",
    "community_link_matrix",
    "global_indicator",
    "inter_community_fraction",
    "LouvainConfig",
    "LouvainRun",
    "modularity",
    "louvain",
    "louvain_passes",
    "LfrConfig",
    "GeneratedNetwork",
    "GenerationError",
    "BridgeDegreeBias",
    "generate",
    "bridge_degree_bias",
    "RankingCurve",
    "cumulative_ratio_curve",
    "smooth",
    "curve_advantage",
    "locterm_correlation",
    "node_report",
]
