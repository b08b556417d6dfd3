"""Semantic code graph extraction and analysis for Java projects."""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    EdgeKind,
    Location,
    NodeKind,
    SemanticCodeGraph,
    SemanticEdge,
    SemanticNode,
)
from .storage import load_graph, save_graph  # noqa: F401
from .extractor import ExtractionReport, extract_project  # noqa: F401
from .summary import SummaryStats, summarize  # noqa: F401
from .crucial import CrucialReport, Metric, crucial  # noqa: F401
from .partition import PartitionResult, QualityScores, partition, partition_sweep, score_partition  # noqa: F401
