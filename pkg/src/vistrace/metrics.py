"""Visibility indices for single contributions and for a whole supply chain.

Per leaf ``k`` with judgements ``j_q``, ``j_a``, ``j_f``::

    VISQuantity_k = j_q
    VISQuality_k  = sqrt(j_a * j_f)
    VIS_k         = sqrt(VISQuantity_k * VISQuality_k)

and the chain index is the weighted sum ``VIS = sum_k VIS_k * W_k`` with equal
weights ``1/M`` unless a weight map is supplied. Everything lies in [1, 4].
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Mapping, Optional

from .errors import E_BAD_WEIGHTS, E_MISSING_JUDGEMENT, E_NO_LEAVES, Finding, VistraceError
from .pipeline import SupplyChain
from .rubric import JudgementTriple

WEIGHT_SUM_TOLERANCE = 1e-9


class Mode(str, enum.Enum):
    FULL_PRECISION = "full-precision"
    # Aggregate from per-node values already rounded to 2 decimals.
    PAPER_COMPAT = "paper-compat"


def round_half_away(value: float, places: int = 2) -> float:
    """Decimal rounding with ties away from zero, applied to the shortest repr of ``value``."""
    return float(format_fixed(value, places))


def format_fixed(value: float, places: int = 2) -> str:
    quantum = Decimal(1).scaleb(-places)
    return str(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class NodeScore:
    node_id: str
    quantity: int
    freshness: int
    accuracy: int
    vis_quantity: float
    vis_quality: float
    vis: float


@dataclass(frozen=True)
class ChainScore:
    subject_id: str
    node_scores: tuple[NodeScore, ...]
    weights: Mapping[str, float]
    vis: float
    mode: Mode

    @property
    def node_count(self) -> int:
        return len(self.node_scores)

    def node(self, node_id: str) -> NodeScore:
        for score in self.node_scores:
            if score.node_id == node_id:
                return score
        raise KeyError(node_id)


def vis_quantity(triple: JudgementTriple) -> float:
    return float(triple.quantity)


def vis_quality(triple: JudgementTriple) -> float:
    return math.sqrt(triple.accuracy * triple.freshness)


def node_visibility(triple: JudgementTriple, node_id: str = "") -> NodeScore:
    quantity = vis_quantity(triple)
    quality = vis_quality(triple)
    return NodeScore(
        node_id=node_id,
        quantity=triple.quantity,
        freshness=triple.freshness,
        accuracy=triple.accuracy,
        vis_quantity=quantity,
        vis_quality=quality,
        vis=math.sqrt(quantity * quality),
    )


def equal_weights(chain: SupplyChain) -> dict[str, float]:
    leaves = chain.leaves
    if not leaves:
        raise VistraceError(E_NO_LEAVES, f"{chain.subject_id} has no contributing leaf nodes to score", chain.subject_id)
    weight = 1.0 / len(leaves)
    return {leaf.id: weight for leaf in leaves}


def check_weights(weights: Mapping[str, object], leaf_ids: list[str]) -> list[Finding]:
    """Problems with a weight map for the given leaf set (empty list when valid)."""
    findings = []
    missing = [k for k in leaf_ids if k not in weights]
    extra = [k for k in weights if k not in leaf_ids]
    if missing:
        findings.append(Finding(E_BAD_WEIGHTS, f"no weight for leaf node(s) {', '.join(missing)}", ",".join(missing)))
    if extra:
        findings.append(Finding(E_BAD_WEIGHTS, f"weights given for non-leaf or unknown node(s) {', '.join(extra)}", ",".join(extra)))
    numeric = True
    for key, value in weights.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            findings.append(Finding(E_BAD_WEIGHTS, f"weight for {key} is not a finite number: {value!r}", key))
            numeric = False
        elif value < 0:
            findings.append(Finding(E_BAD_WEIGHTS, f"weight for {key} is negative: {value!r}", key))
    if numeric:
        total = math.fsum(weights.values())
        if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
            findings.append(Finding(E_BAD_WEIGHTS, f"weights sum to {total!r}, expected 1"))
    return findings


def chain_visibility(
    chain: SupplyChain,
    weights: Optional[Mapping[str, float]] = None,
    mode: Mode | str = Mode.FULL_PRECISION,
) -> ChainScore:
    """Overall visibility of ``chain``.

    Judgements on internal nodes and on the subject are ignored.

    Raises:
        VistraceError: E_NO_LEAVES, E_MISSING_JUDGEMENT (first unjudged leaf)
            or E_BAD_WEIGHTS.
    """
    mode = Mode(mode)
    leaves = chain.leaves
    if not leaves:
        raise VistraceError(E_NO_LEAVES, f"{chain.subject_id} has no contributing leaf nodes to score", chain.subject_id)
    for leaf in leaves:
        if leaf.judgements is None:
            raise VistraceError(E_MISSING_JUDGEMENT, f"leaf {leaf.id} has no judgements", leaf.id)
    if weights is None:
        weights = equal_weights(chain)
    else:
        problems = check_weights(weights, [leaf.id for leaf in leaves])
        if problems:
            raise VistraceError.from_finding(problems[0])
        weights = {leaf.id: float(weights[leaf.id]) for leaf in leaves}

    scores = tuple(node_visibility(leaf.judgements, leaf.id) for leaf in leaves)
    if mode is Mode.PAPER_COMPAT:
        terms = [round_half_away(s.vis) * weights[s.node_id] for s in scores]
    else:
        terms = [s.vis * weights[s.node_id] for s in scores]
    return ChainScore(
        subject_id=chain.subject_id,
        node_scores=scores,
        weights=dict(weights),
        vis=math.fsum(terms),
        mode=mode,
    )
