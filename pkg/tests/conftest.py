from pathlib import Path

import pytest

from vistrace import Node, NodeKind, build_chain, load_manifest, manifest_chain, validate_triple

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"

PAPER_TABLES = ("table3", "table4", "table5", "table6", "table7", "table8")


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.json"


def load_chain(name: str):
    return manifest_chain(load_manifest(fixture_path(name)))


def leaf(node_id, q, f, a, kind=NodeKind.DATA_SOURCE):
    return Node(node_id, kind, node_id, judgements=validate_triple(q, f, a))


def star_chain(triples):
    """Leaves L0..Ln-1 each feeding the subject M directly."""
    nodes = [leaf(f"L{i}", *t) for i, t in enumerate(triples)]
    nodes.append(Node("M", NodeKind.OUTPUT_MODEL, "model"))
    return build_chain("M", nodes, [(n.id, "M") for n in nodes[:-1]])


@pytest.fixture
def figure1_nodes():
    return [
        leaf("DS", 3, 3, 3),
        leaf("H1", 4, 4, 4, NodeKind.HUMAN_CONTRIBUTOR),
        leaf("H2", 4, 4, 4, NodeKind.HUMAN_CONTRIBUTOR),
        Node("LD", NodeKind.DERIVED_ASSET, "labelled dataset"),
        Node("M", NodeKind.OUTPUT_MODEL, "model"),
    ]


FIGURE1_EDGES = [("DS", "LD"), ("H1", "LD"), ("LD", "M"), ("H2", "M")]


_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" in report.nodeid and (report.when == "call" or report.outcome != "passed"):
        name = report.nodeid.split("::", 1)[1]
        if report.outcome == "failed" or name not in _acceptance:
            _acceptance[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance.items():
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
