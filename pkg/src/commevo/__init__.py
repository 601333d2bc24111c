"""Tracking community evolution in temporal social networks.

Slice timestamped interactions into snapshots, group each snapshot, then match
groups across consecutive snapshots with one of three matchers (GED, Asur et
al., Palla et al.) and read the resulting events as evolution chains.
"""
from .asur import AsurParams, asur_merge_test, asur_split_test, run_asur
from .bench import (
    SEVEN_EVENTS_SCRIPT,
    EventScript,
    PlantedScenario,
    RecoveryReport,
    generate_scenario,
    parse_script,
    score_recovery,
)
from .chains import EvolutionChain, LineageGraph, build_lineage, export_chain_table, extract_chains, parse_chain_table
from .communities import (
    Community,
    GroupingResult,
    NodeImportanceMap,
    compute_node_importance,
    detect_clique_percolation,
    detect_label_propagation,
    import_groupings,
    make_grouping,
)
from .events import EventRecord, EventType, format_events, read_events
from .ged import GedParams, classify, inclusion, match_matrix, run_ged
from .palla import PallaParams, joint_graph, relative_overlap, run_palla
from .temporal import (
    SlicingPolicy,
    Snapshot,
    TemporalEdge,
    TemporalSocialNetwork,
    ingest_edges,
    slice_edges,
    snapshot_at,
)

__version__ = "0.1.0"

__all__ = [
    "AsurParams", "asur_merge_test", "asur_split_test", "run_asur",
    "SEVEN_EVENTS_SCRIPT", "EventScript", "PlantedScenario", "RecoveryReport",
    "generate_scenario", "parse_script", "score_recovery",
    "EvolutionChain", "LineageGraph", "build_lineage", "export_chain_table", "extract_chains", "parse_chain_table",
    "Community", "GroupingResult", "NodeImportanceMap", "compute_node_importance",
    "detect_clique_percolation", "detect_label_propagation", "import_groupings", "make_grouping",
    "EventRecord", "EventType", "format_events", "read_events",
    "GedParams", "classify", "inclusion", "match_matrix", "run_ged",
    "PallaParams", "joint_graph", "relative_overlap", "run_palla",
    "SlicingPolicy", "Snapshot", "TemporalEdge", "TemporalSocialNetwork",
    "ingest_edges", "slice_edges", "snapshot_at",
]
