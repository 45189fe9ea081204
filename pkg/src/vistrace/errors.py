"""Error taxonomy shared by every layer of the toolkit."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

# Graph / chain construction
E_CYCLE = "E_CYCLE"
E_NO_SUBJECT = "E_NO_SUBJECT"
E_MULTI_SUBJECT = "E_MULTI_SUBJECT"
E_DANGLING_EDGE = "E_DANGLING_EDGE"
E_ORPHAN = "E_ORPHAN"
E_DUP_ID = "E_DUP_ID"

# Judgements
E_RANGE = "E_RANGE"
E_NOT_INTEGER = "E_NOT_INTEGER"
E_MISSING_CRITERION = "E_MISSING_CRITERION"

# Scoring
E_MISSING_JUDGEMENT = "E_MISSING_JUDGEMENT"
E_BAD_WEIGHTS = "E_BAD_WEIGHTS"
E_NO_LEAVES = "E_NO_LEAVES"

# Manifest parsing
E_SYNTAX = "E_SYNTAX"
E_SCHEMA = "E_SCHEMA"
E_VERSION = "E_VERSION"
E_UNKNOWN_FIELD = "E_UNKNOWN_FIELD"

# Freshness advisor / CLI
E_FUTURE_EVIDENCE = "E_FUTURE_EVIDENCE"
E_POLICY = "E_POLICY"
E_UNKNOWN_NODE = "E_UNKNOWN_NODE"
E_NOT_LEAF = "E_NOT_LEAF"
E_IO = "E_IO"

# Warnings
W_INTERNAL_JUDGEMENT = "W_INTERNAL_JUDGEMENT"
W_NO_RATIONALE = "W_NO_RATIONALE"
W_NO_EVIDENCE = "W_NO_EVIDENCE"
W_UNKNOWN_FIELD = "W_UNKNOWN_FIELD"

# Error codes of all diagnosable manifest problems (one negative fixture each).
VALIDATION_ERROR_CODES = (
    E_CYCLE,
    E_NO_SUBJECT,
    E_MULTI_SUBJECT,
    E_DANGLING_EDGE,
    E_ORPHAN,
    E_DUP_ID,
    E_RANGE,
    E_NOT_INTEGER,
    E_MISSING_JUDGEMENT,
    E_BAD_WEIGHTS,
    E_NO_LEAVES,
)


@dataclass(frozen=True)
class Finding:
    """One diagnosed problem; ``locus`` names the node, edge or field involved."""

    code: str
    message: str
    locus: Optional[str] = None

    def __str__(self) -> str:
        where = f" [{self.locus}]" if self.locus else ""
        return f"{self.code}{where}: {self.message}"


class VistraceError(Exception):
    def __init__(self, code: str, message: str, locus: Optional[str] = None):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message
        self.locus = locus

    @classmethod
    def from_finding(cls, finding: Finding) -> "VistraceError":
        return cls(finding.code, finding.message, finding.locus)

    def to_finding(self) -> Finding:
        return Finding(self.code, self.message, self.locus)


class ManifestParseError(VistraceError):
    """The document could not be read into a manifest (syntax, schema, version)."""
