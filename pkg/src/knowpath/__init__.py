"""Shortest-path knowledge-flow analysis over inter-field citation networks."""

from .analysis import (
    HeatMap,
    PathTypeCensus,
    aggregate_heatmap,
    classify_paths,
    path_length_distribution,
    regroup,
)
from .backbone import BackboneGraph, extract_backbone
from .indicators import compute_aspl, compute_aspw, compute_indicators, compute_oisp, rank_fields
from .ingest import (
    CitationMatrix,
    Division,
    FieldTable,
    IngestError,
    collapse_journal_citations,
    load_category_citations,
    load_taxonomy,
)
from .network import FlowNetwork, build_flow_network, strongly_connected
from .paths import PathTable, all_pairs, dijkstra_from, reconstruct_path

__version__ = "0.1.0"
