"""Production pipeline of a model as a bill-of-materials DAG.

Edges point from a contribution to the thing it contributes to. Only leaves
(contributions with nothing feeding into them) are scored; a derived asset's
transparency is fully determined by its own contributors.
"""

from __future__ import annotations

import datetime as dt
import enum
import re
from collections import deque
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    E_CYCLE,
    E_DANGLING_EDGE,
    E_DUP_ID,
    E_MULTI_SUBJECT,
    E_NO_SUBJECT,
    E_ORPHAN,
    E_SCHEMA,
    Finding,
    VistraceError,
)
from .rubric import JudgementTriple

ID_PATTERN = re.compile(r"[A-Za-z0-9_.-]+")


class NodeKind(str, enum.Enum):
    DATA_SOURCE = "data-source"
    HUMAN_CONTRIBUTOR = "human-contributor"
    DERIVED_ASSET = "derived-asset"
    EXTERNAL_MODEL = "external-model"
    OUTPUT_MODEL = "output-model"

    @classmethod
    def parse(cls, value: str) -> "NodeKind":
        try:
            return cls(value)
        except ValueError:
            allowed = ", ".join(k.value for k in cls)
            raise VistraceError(E_SCHEMA, f"unknown node kind {value!r} (expected one of {allowed})") from None


@dataclass(frozen=True)
class EvidenceRef:
    description: str
    uri: Optional[str] = None
    last_updated: Optional[dt.date] = None
    live_validation: bool = False


@dataclass(frozen=True)
class Node:
    id: str
    kind: NodeKind
    name: str
    role: Optional[str] = None
    description: str = ""
    evidence: tuple[EvidenceRef, ...] = ()
    judgements: Optional[JudgementTriple] = None
    sub_manifest: Optional[str] = None

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not ID_PATTERN.fullmatch(self.id):
            raise VistraceError(E_SCHEMA, f"invalid node id {self.id!r}", str(self.id))
        if not isinstance(self.kind, NodeKind):
            object.__setattr__(self, "kind", NodeKind.parse(self.kind))
        if not isinstance(self.evidence, tuple):
            object.__setattr__(self, "evidence", tuple(self.evidence))
        if self.sub_manifest is not None and self.kind is not NodeKind.EXTERNAL_MODEL:
            raise VistraceError(E_SCHEMA, "sub_manifest is only allowed on external-model nodes", self.id)


Edge = tuple[str, str]


def diagnose_graph(subject_id: str, node_ids: Sequence[str], kinds: Mapping[str, NodeKind], edges: Iterable[Edge]) -> list[Finding]:
    """All structural problems of a candidate chain, in a fixed check order."""
    findings: list[Finding] = []
    seen: set[str] = set()
    for node_id in node_ids:
        if node_id in seen:
            findings.append(Finding(E_DUP_ID, f"node id {node_id!r} is declared more than once", node_id))
        seen.add(node_id)

    good_edges: list[Edge] = []
    for src, dst in edges:
        missing = [n for n in (src, dst) if n not in seen]
        if missing:
            findings.append(
                Finding(E_DANGLING_EDGE, f"edge {src}->{dst} references unknown node(s) {', '.join(missing)}", f"{src}->{dst}")
            )
        else:
            good_edges.append((src, dst))

    outputs = [n for n in dict.fromkeys(node_ids) if kinds[n] is NodeKind.OUTPUT_MODEL]
    if not outputs:
        findings.append(Finding(E_NO_SUBJECT, "no node has kind output-model", subject_id))
    elif len(outputs) > 1:
        findings.append(
            Finding(E_MULTI_SUBJECT, f"more than one output-model node: {', '.join(outputs)}", ",".join(outputs))
        )
    elif outputs[0] != subject_id:
        findings.append(
            Finding(E_NO_SUBJECT, f"subject id {subject_id!r} does not name the output-model node {outputs[0]!r}", subject_id)
        )

    for src, dst in dict.fromkeys(good_edges):
        if src == dst:
            findings.append(Finding(E_CYCLE, f"self-edge on {src}", f"{src}->{dst}"))
    sorter: TopologicalSorter = TopologicalSorter()
    for node_id in dict.fromkeys(node_ids):
        sorter.add(node_id)
    for src, dst in good_edges:
        if src != dst:
            sorter.add(dst, src)
    try:
        sorter.prepare()
    except CycleError as exc:
        cycle = exc.args[1]
        findings.append(Finding(E_CYCLE, f"cycle {' -> '.join(cycle)}", "->".join(cycle)))

    if subject_id in seen:
        incoming: dict[str, set[str]] = {}
        for src, dst in good_edges:
            incoming.setdefault(dst, set()).add(src)
        reaches = {subject_id}
        queue = deque([subject_id])
        while queue:
            for src in incoming.get(queue.popleft(), ()):
                if src not in reaches:
                    reaches.add(src)
                    queue.append(src)
        for node_id in dict.fromkeys(node_ids):
            if node_id not in reaches:
                findings.append(Finding(E_ORPHAN, f"{node_id} does not contribute to {subject_id}", node_id))
    return findings


@dataclass(frozen=True)
class SupplyChain:
    """Validated, immutable contribution graph with a unique output sink."""

    subject_id: str
    nodes: tuple[Node, ...]
    edges: frozenset[Edge]
    _index: Mapping[str, Node] = field(init=False, repr=False, compare=False)
    _incoming: Mapping[str, frozenset[str]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        nodes = tuple(self.nodes)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", frozenset(self.edges))
        problems = diagnose_graph(
            self.subject_id, [n.id for n in nodes], {n.id: n.kind for n in nodes}, sorted(self.edges)
        )
        if problems:
            raise VistraceError.from_finding(problems[0])
        object.__setattr__(self, "_index", MappingProxyType({n.id: n for n in nodes}))
        incoming: dict[str, set[str]] = {n.id: set() for n in nodes}
        for src, dst in self.edges:
            incoming[dst].add(src)
        object.__setattr__(self, "_incoming", MappingProxyType({k: frozenset(v) for k, v in incoming.items()}))

    def __contains__(self, node_id: object) -> bool:
        return node_id in self._index

    def node(self, node_id: str) -> Node:
        return self._index[node_id]

    @property
    def subject(self) -> Node:
        return self._index[self.subject_id]

    def contributors(self, node_id: str) -> frozenset[str]:
        return self._incoming[node_id]

    def is_leaf(self, node_id: str) -> bool:
        return node_id != self.subject_id and not self._incoming[node_id]

    @property
    def leaves(self) -> list[Node]:
        return [n for n in self.nodes if self.is_leaf(n.id)]

    @property
    def internal(self) -> list[Node]:
        return [n for n in self.nodes if n.id != self.subject_id and not self.is_leaf(n.id)]

    def revalidate(self) -> "SupplyChain":
        return build_chain(self.subject_id, self.nodes, self.edges)


def build_chain(subject_id: str, nodes: Iterable[Node], edges: Iterable[Edge]) -> SupplyChain:
    """Validate and assemble a :class:`SupplyChain`.

    Duplicate edges collapse to one. Node order is kept as given so reports are
    deterministic.

    Raises:
        VistraceError: with the first of E_DUP_ID, E_DANGLING_EDGE,
            E_NO_SUBJECT/E_MULTI_SUBJECT, E_CYCLE, E_ORPHAN found.
    """
    return SupplyChain(subject_id, tuple(nodes), frozenset((src, dst) for src, dst in edges))


def leaf_nodes(chain: SupplyChain) -> list[Node]:
    """Scoreable contributions: nodes with no incoming edges, in input order.

    The subject itself is never a leaf, so a subject-only chain has none.
    """
    return chain.leaves
