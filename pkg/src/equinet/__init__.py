"""equinet: cross-shareholding network statistics and regression pipeline."""

__version__ = "0.1.0"

from .community import (
    CommunityPartition,
    class_census,
    dummy_encode,
    louvain,
    modularity,
    significant_classes,
)
from .gexf import export_gexf
from .graph import (
    ConnectionSummary,
    EquityGraph,
    OwnershipEdge,
    RelationType,
    assemble_graph,
    build_type1,
    build_type2,
    build_type3,
    connection_summary,
    listed_firms,
)
from .layout import LayoutParams, forceatlas2
from .metrics import (
    GraphMetrics,
    NodeMetrics,
    average_clustering,
    average_degree,
    betweenness,
    compute_node_metrics,
    degree_distribution,
    degrees,
    eigenvector_centrality,
    graph_metrics,
    local_clustering,
    shortest_path_metrics,
)
from .records import (
    FinancialRecord,
    LegalRepRecord,
    MarketRecord,
    PeriodWindow,
    ShareholderRecord,
    normalize_name,
    parse_records,
    quarterly_average,
    window_slice,
    write_records,
)
from .regression import (
    FirmObservation,
    ModelResult,
    ModelSpec,
    bp_test,
    build_cross_section,
    correlation_matrix,
    dwh_test,
    ols,
    parse_model_spec,
    reset_test,
    standardize,
    tsls,
    turning_point,
    wls,
)

__all__ = [name for name in dir() if not name.startswith("_")]
