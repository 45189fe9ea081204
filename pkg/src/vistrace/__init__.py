"""Transparency scoring for model production pipelines described as a bill of materials."""

__version__ = "0.1.0"

from .errors import Finding, ManifestParseError, VistraceError
from .freshness import FreshnessPolicy, FreshnessSuggestion, suggest_freshness
from .manifest import (
    InvalidManifest,
    Manifest,
    ValidationReport,
    load_manifest,
    manifest_chain,
    parse_manifest,
    serialize_manifest,
    validate_manifest,
)
from .metrics import (
    ChainScore,
    Mode,
    NodeScore,
    chain_visibility,
    equal_weights,
    node_visibility,
    vis_quality,
    vis_quantity,
)
from .pipeline import EvidenceRef, Node, NodeKind, SupplyChain, build_chain, leaf_nodes
from .rubric import JudgementTriple, scale_text, validate_triple

__all__ = [
    "ChainScore",
    "EvidenceRef",
    "Finding",
    "FreshnessPolicy",
    "FreshnessSuggestion",
    "InvalidManifest",
    "JudgementTriple",
    "Manifest",
    "ManifestParseError",
    "Mode",
    "Node",
    "NodeKind",
    "NodeScore",
    "SupplyChain",
    "ValidationReport",
    "VistraceError",
    "build_chain",
    "chain_visibility",
    "equal_weights",
    "leaf_nodes",
    "load_manifest",
    "manifest_chain",
    "node_visibility",
    "parse_manifest",
    "scale_text",
    "serialize_manifest",
    "suggest_freshness",
    "validate_manifest",
    "validate_triple",
    "vis_quality",
    "vis_quantity",
]
