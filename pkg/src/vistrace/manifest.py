"""Transparency manifest: a JSON bill of materials for one model.

Shape of a document (``?`` marks optional keys)::

    {
      "schema_version": "1",
      "subject": {"id", "name", "description?"},
      "nodes": [{"id", "kind", "name", "role?", "description?",
                 "evidence?": [{"description", "uri?", "last_updated?", "live_validation?"}],
                 "judgements?": {"quantity", "freshness", "accuracy",
                                 "rationale?", "assessed_by?", "assessed_on?"},
                 "sub_manifest?"}],
      "edges": [{"from", "to"}],
      "weights?": {"<leaf id>": number}
    }

Parsing only checks structure and types. Semantic checks (graph shape,
judgement ranges, weights) are collected by :func:`validate_manifest`.
"""

from __future__ import annotations

import datetime as dt
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

from . import errors as E
from .errors import Finding, ManifestParseError, VistraceError
from .metrics import check_weights
from .pipeline import ID_PATTERN, EvidenceRef, Node, NodeKind, SupplyChain, build_chain, diagnose_graph
from .rubric import CRITERIA, JudgementTriple, check_score

SCHEMA_VERSION = "1"
SUPPORTED_VERSIONS = (SCHEMA_VERSION,)

_DATE = re.compile(r"\d{4}-\d{2}-\d{2}")


@dataclass
class EvidenceRecord:
    description: str
    uri: Optional[str] = None
    last_updated: Optional[dt.date] = None
    live_validation: bool = False
    extra: dict[str, Any] = field(default_factory=dict)


@dataclass
class JudgementRecord:
    """Judgements as written in the file; values may still be out of range."""

    quantity: Union[int, float]
    freshness: Union[int, float]
    accuracy: Union[int, float]
    rationale: Optional[dict[str, str]] = None
    assessed_by: Optional[str] = None
    assessed_on: Optional[dt.date] = None
    extra: dict[str, Any] = field(default_factory=dict)


@dataclass
class NodeRecord:
    id: str
    kind: NodeKind
    name: str
    role: Optional[str] = None
    description: Optional[str] = None
    evidence: list[EvidenceRecord] = field(default_factory=list)
    judgements: Optional[JudgementRecord] = None
    sub_manifest: Optional[str] = None
    extra: dict[str, Any] = field(default_factory=dict)


@dataclass
class Subject:
    id: str
    name: str
    description: Optional[str] = None
    extra: dict[str, Any] = field(default_factory=dict)


@dataclass
class EdgeRecord:
    source: str
    target: str
    extra: dict[str, Any] = field(default_factory=dict)


@dataclass
class Manifest:
    schema_version: str
    subject: Subject
    nodes: list[NodeRecord]
    edges: list[EdgeRecord]
    weights: Optional[dict[str, float]] = None
    extra: dict[str, Any] = field(default_factory=dict)

    def node(self, node_id: str) -> NodeRecord:
        for record in self.nodes:
            if record.id == node_id:
                return record
        raise KeyError(node_id)


@dataclass
class ValidationReport:
    errors: list[Finding] = field(default_factory=list)
    warnings: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def codes(self) -> list[str]:
        return [f.code for f in self.errors]

    def summary(self) -> str:
        status = "OK" if self.ok else "INVALID"
        return f"{status} ({len(self.errors)} errors, {len(self.warnings)} warnings)"

    def to_dict(self) -> dict[str, Any]:
        def rows(findings: list[Finding]) -> list[dict[str, Any]]:
            return [{"code": f.code, "locus": f.locus, "message": f.message} for f in findings]

        return {"ok": self.ok, "errors": rows(self.errors), "warnings": rows(self.warnings)}


class InvalidManifest(VistraceError):
    """Raised when a manifest is turned into a chain despite validation errors."""

    def __init__(self, report: ValidationReport):
        first = report.errors[0]
        super().__init__(first.code, first.message, first.locus)
        self.report = report


# -- parsing -----------------------------------------------------------------


def _schema(message: str, locus: Optional[str] = None) -> ManifestParseError:
    return ManifestParseError(E.E_SCHEMA, message, locus)


def _no_duplicate_keys(pairs: list[tuple[str, Any]]) -> dict[str, Any]:
    obj: dict[str, Any] = {}
    for key, value in pairs:
        if key in obj:
            raise ManifestParseError(E.E_SYNTAX, f"duplicate key {key!r}")
        obj[key] = value
    return obj


def _reject_constant(name: str) -> Any:
    raise ManifestParseError(E.E_SYNTAX, f"non-standard JSON constant {name}")


class _Fields:
    """Pops typed fields off one JSON object; whatever is left is 'extra'."""

    def __init__(self, obj: Any, where: str):
        if not isinstance(obj, dict):
            raise _schema(f"{where} must be an object", where)
        self.rest = dict(obj)
        self.where = where

    def get(self, key: str, types: tuple[type, ...], required: bool = False, default: Any = None) -> Any:
        if key not in self.rest:
            if required:
                raise _schema(f"{self.where} is missing required field {key!r}", self.where)
            return default
        value = self.rest.pop(key)
        if isinstance(value, bool) and bool not in types:
            raise _schema(f"{self.where}.{key} has wrong type {type(value).__name__}", self.where)
        if not isinstance(value, types):
            raise _schema(f"{self.where}.{key} has wrong type {type(value).__name__}", self.where)
        return value

    def text(self, key: str, required: bool = False) -> Optional[str]:
        return self.get(key, (str,), required)

    def number(self, key: str, required: bool = False) -> Optional[Union[int, float]]:
        return self.get(key, (int, float), required)

    def date(self, key: str) -> Optional[dt.date]:
        raw = self.text(key)
        if raw is None:
            return None
        try:
            if not _DATE.fullmatch(raw):
                raise ValueError(raw)
            return dt.date.fromisoformat(raw)
        except ValueError:
            raise _schema(f"{self.where}.{key} is not a YYYY-MM-DD date: {raw!r}", self.where) from None


def _parse_evidence(obj: Any, where: str) -> EvidenceRecord:
    f = _Fields(obj, where)
    return EvidenceRecord(
        description=f.text("description", required=True),
        uri=f.text("uri"),
        last_updated=f.date("last_updated"),
        live_validation=f.get("live_validation", (bool,), default=False),
        extra=f.rest,
    )


def _parse_judgements(obj: Any, where: str) -> JudgementRecord:
    f = _Fields(obj, where)
    scores = {criterion: f.number(criterion, required=True) for criterion in CRITERIA}
    rationale = f.get("rationale", (dict,))
    if rationale is not None:
        for key, value in rationale.items():
            if not isinstance(value, str):
                raise _schema(f"{where}.rationale.{key} must be text", where)
    return JudgementRecord(
        **scores,
        rationale=rationale,
        assessed_by=f.text("assessed_by"),
        assessed_on=f.date("assessed_on"),
        extra=f.rest,
    )


def _parse_node(obj: Any, index: int) -> NodeRecord:
    f = _Fields(obj, f"nodes[{index}]")
    node_id = f.text("id", required=True)
    if not ID_PATTERN.fullmatch(node_id):
        raise _schema(f"invalid node id {node_id!r} (allowed: letters, digits, '_', '.', '-')", f.where)
    where = f"nodes[{node_id}]"
    f.where = where
    try:
        kind = NodeKind.parse(f.text("kind", required=True))
    except VistraceError as exc:
        raise _schema(exc.message, where) from None
    record = NodeRecord(
        id=node_id,
        kind=kind,
        name=f.text("name", required=True),
        role=f.text("role"),
        description=f.text("description"),
    )
    evidence = f.get("evidence", (list,), default=[])
    record.evidence = [_parse_evidence(item, f"{where}.evidence[{i}]") for i, item in enumerate(evidence)]
    judgements = f.get("judgements", (dict,))
    if judgements is not None:
        record.judgements = _parse_judgements(judgements, f"{where}.judgements")
    record.sub_manifest = f.text("sub_manifest")
    if record.sub_manifest is not None and kind is not NodeKind.EXTERNAL_MODEL:
        raise _schema("sub_manifest is only allowed on external-model nodes", where)
    record.extra = f.rest
    return record


def parse_manifest(data: Union[bytes, str]) -> Manifest:
    """Parse a manifest document (not yet semantically validated).

    Raises:
        ManifestParseError: E_SYNTAX, E_SCHEMA or E_VERSION.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ManifestParseError(E.E_SYNTAX, f"not UTF-8: {exc}") from None
    if not data.strip():
        raise ManifestParseError(E.E_SYNTAX, "empty document")
    try:
        raw = json.loads(data, object_pairs_hook=_no_duplicate_keys, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ManifestParseError(E.E_SYNTAX, f"malformed JSON: {exc}") from None

    top = _Fields(raw, "manifest")
    version = top.get("schema_version", (str,), required=True)
    if version not in SUPPORTED_VERSIONS:
        raise ManifestParseError(E.E_VERSION, f"unsupported schema_version {version!r}", "schema_version")

    sf = _Fields(top.get("subject", (dict,), required=True), "subject")
    subject = Subject(id=sf.text("id", required=True), name=sf.text("name", required=True), description=sf.text("description"))
    subject.extra = sf.rest

    nodes = [_parse_node(item, i) for i, item in enumerate(top.get("nodes", (list,), required=True))]

    edges = []
    for i, item in enumerate(top.get("edges", (list,), required=True)):
        ef = _Fields(item, f"edges[{i}]")
        edges.append(EdgeRecord(ef.text("from", required=True), ef.text("to", required=True)))
        edges[-1].extra = ef.rest

    weights = top.get("weights", (dict,))
    if weights is not None:
        for key, value in weights.items():
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise _schema(f"weights.{key} must be a number", "weights")

    return Manifest(
        schema_version=version, subject=subject, nodes=nodes, edges=edges, weights=weights, extra=top.rest
    )


def load_manifest(path: Union[str, Path]) -> Manifest:
    """Read and parse a manifest file. I/O failures propagate as ``OSError``."""
    return parse_manifest(Path(path).read_bytes())


# -- serialization -----------------------------------------------------------


def _put(out: dict[str, Any], key: str, value: Any) -> None:
    if value is not None:
        out[key] = value


def _with_extra(out: dict[str, Any], extra: dict[str, Any]) -> dict[str, Any]:
    for key in sorted(extra):
        out[key] = extra[key]
    return out


def _date(value: Optional[dt.date]) -> Optional[str]:
    return value.isoformat() if value is not None else None


def manifest_to_dict(manifest: Manifest) -> dict[str, Any]:
    """Plain-JSON form with keys in canonical order; optional fields left out when unset."""
    subject: dict[str, Any] = {"id": manifest.subject.id, "name": manifest.subject.name}
    _put(subject, "description", manifest.subject.description)

    nodes = []
    for record in manifest.nodes:
        node: dict[str, Any] = {"id": record.id, "kind": record.kind.value, "name": record.name}
        _put(node, "role", record.role)
        _put(node, "description", record.description)
        if record.evidence:
            items = []
            for ev in record.evidence:
                item: dict[str, Any] = {"description": ev.description}
                _put(item, "uri", ev.uri)
                _put(item, "last_updated", _date(ev.last_updated))
                if ev.live_validation:
                    item["live_validation"] = True
                items.append(_with_extra(item, ev.extra))
            node["evidence"] = items
        if record.judgements is not None:
            j = record.judgements
            judgements: dict[str, Any] = {c: getattr(j, c) for c in CRITERIA}
            _put(judgements, "rationale", j.rationale)
            _put(judgements, "assessed_by", j.assessed_by)
            _put(judgements, "assessed_on", _date(j.assessed_on))
            node["judgements"] = _with_extra(judgements, j.extra)
        _put(node, "sub_manifest", record.sub_manifest)
        nodes.append(_with_extra(node, record.extra))

    out: dict[str, Any] = {
        "schema_version": manifest.schema_version,
        "subject": _with_extra(subject, manifest.subject.extra),
        "nodes": nodes,
        "edges": [_with_extra({"from": e.source, "to": e.target}, e.extra) for e in manifest.edges],
    }
    _put(out, "weights", manifest.weights)
    return _with_extra(out, manifest.extra)


def serialize_manifest(manifest: Manifest) -> bytes:
    """Canonical bytes: fixed key order, 2-space indent, UTF-8, trailing newline."""
    text = json.dumps(manifest_to_dict(manifest), indent=2, ensure_ascii=False, allow_nan=False)
    return (text + "\n").encode("utf-8")


# -- validation --------------------------------------------------------------


def _unknown_fields(manifest: Manifest) -> list[str]:
    paths = [f"manifest.{k}" for k in manifest.extra]
    paths += [f"subject.{k}" for k in manifest.subject.extra]
    for record in manifest.nodes:
        where = f"nodes[{record.id}]"
        paths += [f"{where}.{k}" for k in record.extra]
        for i, ev in enumerate(record.evidence):
            paths += [f"{where}.evidence[{i}].{k}" for k in ev.extra]
        if record.judgements is not None:
            paths += [f"{where}.judgements.{k}" for k in record.judgements.extra]
    for i, edge in enumerate(manifest.edges):
        paths += [f"edges[{i}].{k}" for k in edge.extra]
    return sorted(paths)


def _leaf_ids(manifest: Manifest) -> list[str]:
    """Non-subject nodes with no incoming edge, in manifest order (first declaration wins)."""
    has_incoming = {e.target for e in manifest.edges}
    ids = dict.fromkeys(r.id for r in manifest.nodes)
    return [n for n in ids if n != manifest.subject.id and n not in has_incoming]


def validate_manifest(manifest: Manifest, strict: bool = False) -> ValidationReport:
    """Collect every problem in ``manifest``.

    Strict mode turns W_INTERNAL_JUDGEMENT and W_NO_RATIONALE into errors and
    rejects unknown fields (E_UNKNOWN_FIELD instead of W_UNKNOWN_FIELD).
    """
    report = ValidationReport()

    def promote(finding: Finding) -> None:
        (report.errors if strict else report.warnings).append(finding)

    for path in _unknown_fields(manifest):
        if strict:
            report.errors.append(Finding(E.E_UNKNOWN_FIELD, f"unknown field {path}", path))
        else:
            report.warnings.append(Finding(E.W_UNKNOWN_FIELD, f"unknown field {path} (ignored)", path))

    kinds: dict[str, NodeKind] = {}
    for record in manifest.nodes:
        kinds.setdefault(record.id, record.kind)
    report.errors += diagnose_graph(
        manifest.subject.id,
        [r.id for r in manifest.nodes],
        kinds,
        [(e.source, e.target) for e in manifest.edges],
    )

    for record in manifest.nodes:
        if record.judgements is None:
            continue
        for criterion in CRITERIA:
            _, problem = check_score(getattr(record.judgements, criterion), criterion)
            if problem is not None:
                report.errors.append(Finding(problem.code, problem.message, f"{record.id}.{criterion}"))

    leaf_ids = _leaf_ids(manifest)
    leaves = set(leaf_ids)
    if not leaf_ids:
        report.errors.append(
            Finding(E.E_NO_LEAVES, f"{manifest.subject.id} has no contributing leaf nodes to score", manifest.subject.id)
        )
    seen: set[str] = set()
    for record in manifest.nodes:
        if record.id in seen:
            continue
        seen.add(record.id)
        if record.id in leaves:
            if record.judgements is None:
                report.errors.append(Finding(E.E_MISSING_JUDGEMENT, f"leaf {record.id} has no judgements", record.id))
            elif not record.judgements.rationale:
                promote(Finding(E.W_NO_RATIONALE, f"judgements on {record.id} give no rationale", record.id))
            if not record.evidence:
                report.warnings.append(Finding(E.W_NO_EVIDENCE, f"leaf {record.id} lists no evidence", record.id))
        elif record.judgements is not None:
            promote(
                Finding(
                    E.W_INTERNAL_JUDGEMENT,
                    f"{record.id} is not a leaf; its judgements are ignored (its contributors determine its visibility)",
                    record.id,
                )
            )

    if manifest.weights is not None and leaf_ids:
        report.errors += check_weights(manifest.weights, leaf_ids)
    return report


def _to_node(record: NodeRecord) -> Node:
    triple = None
    if record.judgements is not None:
        j = record.judgements
        triple = JudgementTriple(
            quantity=int(j.quantity),
            freshness=int(j.freshness),
            accuracy=int(j.accuracy),
            rationale=dict(j.rationale) if j.rationale is not None else None,
            assessed_by=j.assessed_by,
            assessed_on=j.assessed_on,
        )
    return Node(
        id=record.id,
        kind=record.kind,
        name=record.name,
        role=record.role,
        description=record.description or "",
        evidence=tuple(EvidenceRef(e.description, e.uri, e.last_updated, e.live_validation) for e in record.evidence),
        judgements=triple,
        sub_manifest=record.sub_manifest,
    )


def manifest_chain(manifest: Manifest, strict: bool = False) -> SupplyChain:
    """Validate ``manifest`` and build its supply chain.

    Raises:
        InvalidManifest: carrying the full :class:`ValidationReport`.
    """
    report = validate_manifest(manifest, strict=strict)
    if not report.ok:
        raise InvalidManifest(report)
    return build_chain(
        manifest.subject.id,
        [_to_node(r) for r in manifest.nodes],
        [(e.source, e.target) for e in manifest.edges],
    )
