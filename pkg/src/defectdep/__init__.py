"""Defect dependency analysis over istarml strategic dependency models.

Parse and validate istarml XML, extract defect-flow subgraphs, compute the
defect dependency ratio of a defect against the whole product model, and rank
open defects with configurable business factors.
"""

from .emitter import emit_istarml
from .errors import DefectDepError
from .graph import DefectFlow, DependencyCounts, count, extract_defect_flow
from .metric import (
    MetricResult,
    RecomputeEntry,
    compute_metric,
    defect_dependency,
    ensure_metric,
    recompute_all,
    render_percent,
    render_ratio,
)
from .model import SDModel, structurally_equal
from .parser import parse_istarml
from .prioritize import PriorityConfig, RankedDefect, default_config, rank, score
from .store import DefectReport, ModelStore
from .validation import ValidationReport, resolve_location, validate
from .workflow import rank_defects, triage_report

__version__ = "0.1.0"

__all__ = [
    "DefectDepError",
    "DefectFlow",
    "DefectReport",
    "DependencyCounts",
    "MetricResult",
    "ModelStore",
    "PriorityConfig",
    "RankedDefect",
    "RecomputeEntry",
    "SDModel",
    "ValidationReport",
    "__version__",
    "compute_metric",
    "count",
    "defect_dependency",
    "default_config",
    "emit_istarml",
    "ensure_metric",
    "extract_defect_flow",
    "parse_istarml",
    "rank",
    "rank_defects",
    "recompute_all",
    "render_percent",
    "render_ratio",
    "resolve_location",
    "score",
    "structurally_equal",
    "triage_report",
    "validate",
]
