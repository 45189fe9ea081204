"""Text, markdown and JSON renderings of scores, rankings and explanations."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from .freshness import FreshnessPolicy, FreshnessSuggestion
from .metrics import ChainScore, Mode, format_fixed
from .pipeline import Node
from .rubric import ACCURACY, CRITERIA, FRESHNESS, QUANTITY, scale_text

FORMATS = ("text", "json", "markdown")
SCORE_HEADER = ("Node", "Quantity", "Freshness", "Accuracy", "VISQual", "VIS")
FOOTER = "Overall VIS for model"


def _table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> list[str]:
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]
    return ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in [header, *rows]]


def _markdown(header: Sequence[str], rows: Sequence[Sequence[str]], numeric_from: int = 1) -> list[str]:
    align = ["---" if i < numeric_from else "---:" for i in range(len(header))]
    return ["| " + " | ".join(row) + " |" for row in [header, align, *rows]]


@dataclass(frozen=True)
class SubManifestResult:
    """Independent score of a basis model's own manifest, shown next to the enclosing chain."""

    node_id: str
    path: str
    vis: Optional[float] = None
    error: Optional[str] = None


def score_rows(score: ChainScore, precision: int = 2) -> list[list[str]]:
    return [
        [
            s.node_id,
            str(s.quantity),
            str(s.freshness),
            str(s.accuracy),
            format_fixed(s.vis_quality, precision),
            format_fixed(s.vis, precision),
        ]
        for s in score.node_scores
    ]


def score_to_dict(score: ChainScore, sub_manifests: Sequence[SubManifestResult] = ()) -> dict[str, Any]:
    out: dict[str, Any] = {
        "subject": score.subject_id,
        "mode": score.mode.value,
        "nodes": [
            {
                "id": s.node_id,
                "quantity": s.quantity,
                "freshness": s.freshness,
                "accuracy": s.accuracy,
                "vis_quality": s.vis_quality,
                "vis": s.vis,
            }
            for s in score.node_scores
        ],
        "overall_vis": score.vis,
        "weights": dict(score.weights),
    }
    if sub_manifests:
        out["sub_manifests"] = [
            {"node": r.node_id, "path": r.path, "overall_vis": r.vis, "error": r.error} for r in sub_manifests
        ]
    return out


def render_score(
    score: ChainScore,
    fmt: str = "text",
    precision: int = 2,
    title: Optional[str] = None,
    sub_manifests: Sequence[SubManifestResult] = (),
) -> str:
    if fmt == "json":
        return json.dumps(score_to_dict(score, sub_manifests), indent=2) + "\n"
    rows = score_rows(score, precision)
    overall = format_fixed(score.vis, precision)
    lines = []
    if fmt == "markdown":
        if title:
            lines += [f"### {title} ({score.mode.value})", ""]
        lines += _markdown(SCORE_HEADER, rows + [[f"**{FOOTER}**", "", "", "", "", f"**{overall}**"]])
    else:
        if title:
            lines.append(f"{title} ({score.mode.value})")
        lines += _table(SCORE_HEADER, rows)
    for r in sub_manifests:
        shown = format_fixed(r.vis, precision) if r.vis is not None else f"not scored: {r.error}"
        lines.append(f"Basis model {r.node_id} ({r.path}) own VIS {shown}, reported separately")
    if fmt != "markdown":
        lines.append(f"{FOOTER} {overall}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RankEntry:
    path: str
    subject: str
    vis: float
    rank: int


def rank_entries(scored: Sequence[tuple[str, str, float]]) -> list[RankEntry]:
    """Order (path, subject, vis) triples by descending vis, ties by path."""
    ordered = sorted(scored, key=lambda item: (-item[2], item[0]))
    return [RankEntry(path, subject, vis, i) for i, (path, subject, vis) in enumerate(ordered, start=1)]


def render_rank(entries: Sequence[RankEntry], fmt: str = "text", precision: int = 2) -> str:
    if fmt == "json":
        rows = [{"rank": e.rank, "path": e.path, "subject": e.subject, "vis": e.vis} for e in entries]
        return json.dumps(rows, indent=2) + "\n"
    header = ("Rank", "VIS", "Subject", "Manifest")
    rows = [[str(e.rank), format_fixed(e.vis, precision), e.subject, e.path] for e in entries]
    lines = _markdown(header, rows, numeric_from=0) if fmt == "markdown" else _table(header, rows)
    return "\n".join(lines) + "\n"


def render_explain(node: Node, score_vis_quality: float, score_vis: float, precision: int = 2) -> str:
    j = node.judgements
    fx = lambda v: format_fixed(v, precision)  # noqa: E731
    lines = [f"Node {node.id} ({node.kind.value}): {node.name}"]
    if node.role:
        lines.append(f"  role: {node.role}")
    if node.description:
        lines.append(f"  {node.description}")
    rationale = j.rationale or {}
    for criterion in CRITERIA:
        value = j.score(criterion)
        lines.append(f"  {criterion.capitalize():<10} {value}  {scale_text(criterion, value)}")
        if criterion in rationale:
            lines.append(f"      rationale: {rationale[criterion]}")
    for key in rationale:
        if key not in CRITERIA:
            lines.append(f"  note ({key}): {rationale[key]}")
    if j.assessed_by or j.assessed_on:
        who = j.assessed_by or "unknown assessor"
        when = f" on {j.assessed_on.isoformat()}" if j.assessed_on else ""
        lines.append(f"  assessed by {who}{when}")
    lines.append("  Evidence:" if node.evidence else "  Evidence: none listed")
    for ev in node.evidence:
        extras = []
        if ev.uri:
            extras.append(ev.uri)
        if ev.last_updated:
            extras.append(f"updated {ev.last_updated.isoformat()}")
        if ev.live_validation:
            extras.append("live validation")
        suffix = f" ({', '.join(extras)})" if extras else ""
        lines.append(f"    - {ev.description}{suffix}")
    if node.sub_manifest:
        lines.append(f"  Basis model manifest: {node.sub_manifest}")
    lines.append(
        f"  VISQual = sqrt(accuracy {j.score(ACCURACY)} x freshness {j.score(FRESHNESS)}) = {fx(score_vis_quality)}"
    )
    lines.append(f"  VIS     = sqrt(quantity {j.score(QUANTITY)} x VISQual {fx(score_vis_quality)}) = {fx(score_vis)}")
    return "\n".join(lines) + "\n"


def render_suggestions(
    suggestions: Sequence[FreshnessSuggestion],
    failures: Sequence[tuple[str, str]],
    policy: FreshnessPolicy,
    fmt: str = "text",
) -> str:
    if fmt == "json":
        rows = [
            {
                "node": s.node_id,
                "declared": s.declared,
                "suggested": s.suggested,
                "conflicts_with_declared": s.conflicts_with_declared,
                "rationale": s.rationale,
            }
            for s in suggestions
        ]
        payload = {
            "policy": {
                "fresh_window_days": policy.fresh_window.days,
                "stale_window_days": policy.stale_window.days,
            },
            "suggestions": rows,
            "errors": [{"node": n, "error": msg} for n, msg in failures],
        }
        return json.dumps(payload, indent=2) + "\n"
    header = ("Node", "Declared", "Suggested", "Conflict", "Rule")
    rows = [
        [
            s.node_id,
            "-" if s.declared is None else str(s.declared),
            str(s.suggested),
            "CONFLICT" if s.conflicts_with_declared else "",
            s.rationale,
        ]
        for s in suggestions
    ]
    rows += [[n, "", "", "", msg] for n, msg in failures]
    lines = _markdown(header, rows) if fmt == "markdown" else _table(header, rows)
    lines.append(f"({policy.describe()})")
    return "\n".join(lines) + "\n"


def mode_for(paper_compat: bool) -> Mode:
    return Mode.PAPER_COMPAT if paper_compat else Mode.FULL_PRECISION
