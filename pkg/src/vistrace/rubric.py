"""Judgement scale for documentation on each contribution, and judgement validation.

Each scored contribution receives three integer judgements from 1 (lowest) to
4 (highest): quantity of information, freshness of information, and accuracy
of information.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from .errors import (
    E_MISSING_CRITERION,
    E_NOT_INTEGER,
    E_RANGE,
    Finding,
    VistraceError,
)

QUANTITY = "quantity"
FRESHNESS = "freshness"
ACCURACY = "accuracy"

# Order used for reports and serialization.
CRITERIA = (QUANTITY, FRESHNESS, ACCURACY)

MIN_SCORE = 1
MAX_SCORE = 4
SCORES = range(MIN_SCORE, MAX_SCORE + 1)

SCALE: dict[str, dict[int, str]] = {
    QUANTITY: {
        1: "Sparse or insufficient information",
        2: "Some information missing",
        3: "Sufficient to gain confidence",
        4: "Sufficient to validate",
    },
    FRESHNESS: {
        1: "Never updated",
        2: "Out-of-date",
        3: "Updated when changed",
        4: "Real-time validation",
    },
    ACCURACY: {
        1: "Demonstrably inaccurate",
        2: "Believed to be inaccurate",
        3: "Believed to be accurate",
        4: "Evidenced and verifiable",
    },
}

# Symbols used when writing the formulas out in explanations.
NOTATION = {QUANTITY: "j_q", ACCURACY: "j_a", FRESHNESS: "j_f"}


@dataclass(frozen=True)
class ScaleDescriptor:
    criterion: str
    score: int
    text: str


def scale_text(criterion: str, score: int) -> str:
    """Anchor description for ``score`` on ``criterion``."""
    return SCALE[criterion][score]


def descriptors() -> list[ScaleDescriptor]:
    return [
        ScaleDescriptor(criterion, score, SCALE[criterion][score])
        for criterion in CRITERIA
        for score in SCORES
    ]


def check_score(value: Any, criterion: str) -> tuple[Optional[int], Optional[Finding]]:
    """Coerce one raw judgement to an int, or describe why it is unacceptable.

    Integral floats such as ``3.0`` are accepted; fractional values are never
    rounded.
    """
    if value is None:
        return None, Finding(E_MISSING_CRITERION, f"{criterion} judgement is missing", criterion)
    if isinstance(value, bool):
        return None, Finding(E_NOT_INTEGER, f"{criterion} judgement must be an integer, got {value!r}", criterion)
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    if not isinstance(value, int):
        return None, Finding(E_NOT_INTEGER, f"{criterion} judgement must be an integer, got {value!r}", criterion)
    if not MIN_SCORE <= value <= MAX_SCORE:
        return None, Finding(
            E_RANGE, f"{criterion} judgement must be between {MIN_SCORE} and {MAX_SCORE}, got {value}", criterion
        )
    return value, None


@dataclass(frozen=True)
class JudgementTriple:
    """Validated quantity/freshness/accuracy judgements for one contribution."""

    quantity: int
    freshness: int
    accuracy: int
    rationale: Optional[Mapping[str, str]] = field(default=None, compare=True, hash=False)
    assessed_by: Optional[str] = None
    assessed_on: Optional[dt.date] = None

    def __post_init__(self) -> None:
        for criterion in CRITERIA:
            _, problem = check_score(getattr(self, criterion), criterion)
            if problem is not None:
                raise VistraceError.from_finding(problem)

    def score(self, criterion: str) -> int:
        return getattr(self, criterion)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.quantity, self.freshness, self.accuracy)


def validate_triple(
    quantity: Any,
    freshness: Any,
    accuracy: Any,
    *,
    rationale: Optional[Mapping[str, str]] = None,
    assessed_by: Optional[str] = None,
    assessed_on: Optional[dt.date] = None,
) -> JudgementTriple:
    """Build a :class:`JudgementTriple` from raw values.

    Raises:
        VistraceError: E_MISSING_CRITERION, E_NOT_INTEGER or E_RANGE for the
            first offending criterion (quantity, freshness, accuracy order).
    """
    values = {}
    for criterion, raw in zip(CRITERIA, (quantity, freshness, accuracy)):
        value, problem = check_score(raw, criterion)
        if problem is not None:
            raise VistraceError.from_finding(problem)
        values[criterion] = value
    return JudgementTriple(
        **values,
        rationale=dict(rationale) if rationale is not None else None,
        assessed_by=assessed_by,
        assessed_on=assessed_on,
    )
