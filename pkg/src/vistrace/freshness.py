"""Advisory freshness judgements derived from evidence timestamps.

Suggestions never overwrite what an assessor declared; they only flag
disagreement. The windows are this toolkit's own policy, not a published
threshold, and are configurable.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .errors import E_FUTURE_EVIDENCE, E_POLICY, E_SYNTAX, ManifestParseError, VistraceError
from .pipeline import Node
from .rubric import FRESHNESS, scale_text


@dataclass(frozen=True)
class FreshnessPolicy:
    fresh_window: dt.timedelta = dt.timedelta(days=365)
    stale_window: dt.timedelta = dt.timedelta(days=1095)

    def __post_init__(self) -> None:
        if self.fresh_window <= dt.timedelta(0) or self.stale_window <= dt.timedelta(0):
            raise VistraceError(E_POLICY, "freshness windows must be positive")
        if self.fresh_window >= self.stale_window:
            raise VistraceError(E_POLICY, "fresh window must be shorter than stale window")

    @classmethod
    def from_days(cls, fresh_window_days: int, stale_window_days: int) -> "FreshnessPolicy":
        return cls(dt.timedelta(days=fresh_window_days), dt.timedelta(days=stale_window_days))

    def describe(self) -> str:
        return (
            f"toolkit policy: updated within {self.fresh_window.days} days -> 3, "
            f"within {self.stale_window.days} days -> 2, older or undated -> 1, live validation -> 4"
        )


def load_policy(path: Union[str, Path]) -> FreshnessPolicy:
    """Read ``{"fresh_window_days": N, "stale_window_days": M}``."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestParseError(E_SYNTAX, f"policy file is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise VistraceError(E_POLICY, "policy file must hold a JSON object")
    unknown = set(raw) - {"fresh_window_days", "stale_window_days"}
    if unknown:
        raise VistraceError(E_POLICY, f"unknown policy field(s): {', '.join(sorted(unknown))}")
    defaults = FreshnessPolicy()
    fresh = raw.get("fresh_window_days", defaults.fresh_window.days)
    stale = raw.get("stale_window_days", defaults.stale_window.days)
    for name, value in (("fresh_window_days", fresh), ("stale_window_days", stale)):
        if isinstance(value, bool) or not isinstance(value, int):
            raise VistraceError(E_POLICY, f"{name} must be a whole number of days, got {value!r}")
    return FreshnessPolicy.from_days(fresh, stale)


@dataclass(frozen=True)
class FreshnessSuggestion:
    node_id: str
    suggested: int
    rationale: str
    declared: Optional[int] = None

    @property
    def conflicts_with_declared(self) -> bool:
        return self.declared is not None and self.declared != self.suggested


def suggest_freshness(node: Node, policy: FreshnessPolicy, as_of: dt.date) -> FreshnessSuggestion:
    """Suggest a freshness judgement for ``node`` as seen on ``as_of``.

    Live validation beats any timestamp; otherwise the age of the newest dated
    evidence item is compared against the policy windows (inclusive bounds).

    Raises:
        VistraceError: E_FUTURE_EVIDENCE if any evidence is dated after ``as_of``.
    """
    dated = [ev.last_updated for ev in node.evidence if ev.last_updated is not None]
    future = [d for d in dated if d > as_of]
    if future:
        raise VistraceError(
            E_FUTURE_EVIDENCE, f"evidence on {node.id} is dated {max(future)}, after {as_of}", node.id
        )
    declared = node.judgements.freshness if node.judgements is not None else None

    def result(score: int, why: str) -> FreshnessSuggestion:
        return FreshnessSuggestion(node.id, score, f"{why} ({scale_text(FRESHNESS, score)})", declared)

    if any(ev.live_validation for ev in node.evidence):
        return result(4, "evidence declares live validation")
    if not dated:
        reason = "no evidence listed" if not node.evidence else "no evidence carries a last_updated date"
        return result(1, reason)
    newest = max(dated)
    age = as_of - newest
    if age <= policy.fresh_window:
        return result(3, f"newest evidence {newest} is {age.days} days old, within {policy.fresh_window.days}-day fresh window")
    if age <= policy.stale_window:
        return result(2, f"newest evidence {newest} is {age.days} days old, within {policy.stale_window.days}-day stale window")
    return result(1, f"newest evidence {newest} is {age.days} days old, beyond {policy.stale_window.days}-day stale window")
