"""Regenerate the manifest fixtures under fixtures/.

Run from the repository root: ``python3 tools/make_fixtures.py``. Output is
written in canonical form so every fixture round-trips byte-for-byte.
"""

from __future__ import annotations

import copy
import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "fixtures"


def node(id, kind, name, role=None, description=None, evidence=None, judgements=None, **extra):
    out = {"id": id, "kind": kind, "name": name}
    if role:
        out["role"] = role
    if description:
        out["description"] = description
    if evidence:
        out["evidence"] = evidence
    if judgements:
        out["judgements"] = judgements
    out.update(extra)
    return out


def ev(description, uri=None, last_updated=None, live=False):
    out = {"description": description}
    if uri:
        out["uri"] = uri
    if last_updated:
        out["last_updated"] = last_updated
    if live:
        out["live_validation"] = True
    return out


def judge(q, f, a, why, by="model audit team", on="2020-06-01"):
    return {
        "quantity": q,
        "freshness": f,
        "accuracy": a,
        "rationale": {"quantity": why[0], "freshness": why[1], "accuracy": why[2]},
        "assessed_by": by,
        "assessed_on": on,
    }


def simple_pipeline(subject_name, ds, h1, h2, ds_ev, h1_ev, h2_ev):
    """DS and H1 feed the labelled dataset LD; LD and H2 feed the model M."""
    return {
        "schema_version": "1",
        "subject": {"id": "M", "name": subject_name, "description": "Model trained on a curated, labelled dataset"},
        "nodes": [
            node("DS", "data-source", "Raw data source", description="Unlabelled source records", evidence=ds_ev, judgements=ds),
            node("H1", "human-contributor", "Data curator", role="curator", evidence=h1_ev, judgements=h1),
            node("H2", "human-contributor", "AI engineer", role="engineer", evidence=h2_ev, judgements=h2),
            node("LD", "derived-asset", "Labelled dataset", description="DS after labelling by H1"),
            node("M", "output-model", subject_name),
        ],
        "edges": [
            {"from": "DS", "to": "LD"},
            {"from": "H1", "to": "LD"},
            {"from": "LD", "to": "M"},
            {"from": "H2", "to": "M"},
        ],
    }


LAB_EV = {
    "DS": [ev("Data collection protocol", "https://lab.example.org/data/protocol.pdf", "2020-03-02")],
    "H1": [ev("Curator labelling guide and staff record", "https://lab.example.org/data/labelling.md", "2020-04-11")],
    "H2": [ev("Training notebook and experiment log", "https://lab.example.org/models/m/train.ipynb", "2020-05-20")],
}


def table3():
    m = simple_pipeline(
        "First party model",
        judge(3, 3, 3, ["Protocol describes collection", "Kept current with collection", "Consistent with records"]),
        judge(4, 4, 4, ["Curator available for interview", "Curator reachable on request", "Labels spot-checked"]),
        judge(4, 4, 4, ["Full code and logs", "Engineer reachable on request", "Results reproduced"]),
        LAB_EV["DS"], LAB_EV["H1"], LAB_EV["H2"],
    )
    return m


def table4():
    old = {k: [dict(e, last_updated="2017-05-01") for e in v] for k, v in LAB_EV.items()}
    return simple_pipeline(
        "First party model, re-assessed years later",
        judge(3, 2, 3, ["Protocol still on file", "Not revised since collection", "No known inaccuracies"], on="2023-06-01"),
        judge(3, 3, 3, ["Guide on file, curator departed", "Guide maintained by team", "No known inaccuracies"], on="2023-06-01"),
        judge(3, 3, 3, ["Notebook on file, engineer moved", "Log maintained by team", "No known inaccuracies"], on="2023-06-01"),
        old["DS"], old["H1"], old["H2"],
    )


def table5():
    sparse = [ev("One-paragraph model description", "https://zoo.example.com/models/opaque")]
    j = judge(1, 1, 3, ["Almost nothing published", "Never revised", "No reason to doubt it"])
    return simple_pipeline("Poorly documented third party model", j, j, j, sparse, sparse, sparse)


def table6():
    rich = [
        ev("Vendor documentation pack", "https://vendor.example.com/models/rich/docs", "2020-02-14"),
        ev("Vendor contact address for queries", "mailto:support@vendor.example.com"),
    ]
    j = judge(4, 3, 3, ["Enough to validate the contribution", "Updated with each release", "Consistent with vendor claims"])
    return simple_pipeline("Well documented third party model", j, j, j, rich, rich, rich)


def table7():
    m = simple_pipeline(
        "GoogleNet (ModelHub)",
        judge(1, 1, 3, ["Scraped search results cannot be inspected", "Collection not revisited", "Plausible but unverifiable"]),
        judge(3, 3, 4, ["Curation procedure published", "Dataset page maintained", "Curation is documented and checkable"]),
        judge(4, 2, 3, ["Source repository and paper available", "Provenance link no longer resolves", "Replication believed faithful"]),
        [ev("Images gathered from internet search engine results")],
        [ev("ImageNet dataset paper", "https://doi.org/10.1109/CVPR.2009.5206848", "2009-06-20")],
        [
            ev("ONNX model zoo entry", "https://github.com/onnx/models/tree/master/bvlc_googlenet", "2018-03-01"),
            ev("Original Caffe model", "https://github.com/BVLC/caffe/tree/master/models/bvlc_googlenet", "2017-04-10"),
        ],
    )
    m["subject"]["description"] = "Pre-trained GoogleNet image classifier"
    m["nodes"][0]["description"] = "Real world images from search engines"
    m["nodes"][1]["name"] = "ImageNet curators"
    m["nodes"][2]["name"] = "ModelHub maintainers"
    m["nodes"][3]["name"] = "ImageNet"
    m["nodes"][3]["description"] = "Labelled image dataset curated by H1 from DS"
    return m


def table8():
    return {
        "schema_version": "1",
        "subject": {"id": "M", "name": "DistilBERT (PyTorch Hub)", "description": "Distilled BERT language model"},
        "nodes": [
            node("DS1", "data-source", "Toronto Book Corpus",
                 evidence=[ev("Corpus description", "https://yknzhu.wixsite.com/mbweb", "2015-12-01")],
                 judgements=judge(3, 2, 3, ["Corpus described in its paper", "Corpus page not maintained", "Believed accurate"])),
            node("DS2", "data-source", "English Wikipedia",
                 evidence=[ev("Wikipedia dump used for pre-training")],
                 judgements=judge(3, 1, 3, ["Dump widely documented", "Snapshot date not recorded", "Believed accurate"])),
            node("H1", "human-contributor", "BERT authors", role="curator",
                 evidence=[ev("BERT paper and code", "https://github.com/google-research/bert", "2020-03-11")],
                 judgements=judge(4, 3, 3, ["Paper and code release", "Repository updated on change", "Believed accurate"])),
            node("H2", "human-contributor", "DistilBERT authors", role="engineer",
                 evidence=[
                     ev("Distillation code and paper",
                        "https://github.com/huggingface/transformers/tree/master/examples/distillation", "2020-05-30"),
                     ev("Active issue tracker", "https://github.com/huggingface/transformers/issues", live=True),
                 ],
                 judgements=judge(4, 4, 4, ["Full training code", "Actively maintained", "Reproducible from code"])),
            node("LD", "derived-asset", "BERT pre-training corpus", description="DS1 and DS2 combined by H1"),
            node("M", "output-model", "DistilBERT"),
        ],
        "edges": [
            {"from": "DS1", "to": "LD"},
            {"from": "DS2", "to": "LD"},
            {"from": "H1", "to": "LD"},
            {"from": "LD", "to": "M"},
            {"from": "H2", "to": "M"},
        ],
    }


def figure1():
    """Topology only: an unassessed bill of materials."""
    m = simple_pipeline("Simple ML model", None, None, None, LAB_EV["DS"], LAB_EV["H1"], LAB_EV["H2"])
    m["subject"]["description"] = "Data source labelled by a curator, model trained by an engineer"
    return m


def transfer():
    """Fine-tuned model whose basis model carries its own manifest."""
    return {
        "schema_version": "1",
        "subject": {"id": "M", "name": "Fine-tuned sentiment model", "description": "DistilBERT fine-tuned on reviews"},
        "nodes": [
            node("DS", "data-source", "Product reviews",
                 evidence=[ev("Review export notes", "https://lab.example.org/data/reviews.md", "2021-01-15")],
                 judgements=judge(3, 3, 3, ["Export documented", "Kept current", "Believed accurate"])),
            node("H1", "human-contributor", "Annotator", role="annotator",
                 evidence=[ev("Annotation guide", "https://lab.example.org/data/annotation.md", "2021-02-01")],
                 judgements=judge(3, 3, 4, ["Guide available", "Updated when changed", "Agreement measured"])),
            node("H2", "human-contributor", "AI engineer", role="engineer",
                 evidence=[ev("Fine-tuning scripts", "https://lab.example.org/models/sentiment", "2021-03-01")],
                 judgements=judge(4, 3, 3, ["Scripts and configs", "Updated when changed", "Believed accurate"])),
            node("M_basis", "external-model", "DistilBERT basis model",
                 evidence=[ev("Basis model card", "https://huggingface.co/distilbert-base-uncased", "2020-05-30")],
                 judgements=judge(4, 3, 3, ["Separate review on file", "Updated when changed", "Believed accurate"]),
                 sub_manifest="table8.json"),
            node("LD", "derived-asset", "Labelled reviews"),
            node("M", "output-model", "Fine-tuned sentiment model"),
        ],
        "edges": [
            {"from": "DS", "to": "LD"},
            {"from": "H1", "to": "LD"},
            {"from": "LD", "to": "M"},
            {"from": "H2", "to": "M"},
            {"from": "M_basis", "to": "M"},
        ],
    }


def negatives():
    """One manifest per validation error code, plus parse-level and warning cases."""
    base = table3()
    out = {}

    m = copy.deepcopy(base)
    m["nodes"].insert(4, node("X", "derived-asset", "Re-labelled copy"))
    m["edges"] += [{"from": "LD", "to": "X"}, {"from": "X", "to": "LD"}]
    out["bad_cycle"] = m

    m = copy.deepcopy(base)
    m["nodes"][4]["kind"] = "derived-asset"
    out["bad_no_subject"] = m

    m = copy.deepcopy(base)
    m["nodes"][3]["kind"] = "output-model"
    out["bad_multi_subject"] = m

    m = copy.deepcopy(base)
    m["edges"][0] = {"from": "DSX", "to": "LD"}
    m["edges"].insert(1, {"from": "DS", "to": "LD"})
    out["bad_dangling_edge"] = m

    m = copy.deepcopy(base)
    m["nodes"].insert(3, node("DS9", "data-source", "Unused source", evidence=LAB_EV["DS"],
                              judgements=judge(2, 2, 2, ["a", "b", "c"])))
    out["bad_orphan"] = m

    m = copy.deepcopy(base)
    m["nodes"].insert(1, copy.deepcopy(m["nodes"][0]))
    out["bad_dup_id"] = m

    m = copy.deepcopy(base)
    m["nodes"][0]["judgements"]["quantity"] = 5
    out["bad_range"] = m

    m = copy.deepcopy(base)
    m["nodes"][0]["judgements"]["quantity"] = 2.5
    out["bad_not_integer"] = m

    m = copy.deepcopy(base)
    del m["nodes"][1]["judgements"]
    out["bad_missing_judgement"] = m

    m = copy.deepcopy(base)
    m["weights"] = {"DS": 0.5, "H1": 0.3, "H2": 0.3}
    out["bad_weights"] = m

    out["bad_no_leaves"] = {
        "schema_version": "1",
        "subject": {"id": "M", "name": "Model without recorded contributions"},
        "nodes": [node("M", "output-model", "Model without recorded contributions")],
        "edges": [],
    }

    m = copy.deepcopy(base)
    m["schema_version"] = "99"
    out["bad_version"] = m

    m = copy.deepcopy(base)
    m["nodes"][0]["kind"] = "dataset"
    out["bad_schema"] = m

    m = copy.deepcopy(base)
    m["nodes"][3]["judgements"] = judge(2, 2, 2, ["Not applicable", "Not applicable", "Not applicable"])
    out["internal_judgement"] = m

    m = copy.deepcopy(base)
    m["weights"] = {"DS": 0.5, "H1": 0.25, "H2": 0.25}
    out["weighted"] = m
    return out


def write(name, doc):
    text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    (OUT / f"{name}.json").write_text(text, encoding="utf-8")


def main():
    OUT.mkdir(exist_ok=True)
    for name, build in [("table3", table3), ("table4", table4), ("table5", table5), ("table6", table6),
                        ("table7", table7), ("table8", table8), ("figure1", figure1), ("transfer", transfer)]:
        write(name, build())
    for name, doc in negatives().items():
        write(name, doc)
    (OUT / "bad_syntax.json").write_text("", encoding="utf-8")


if __name__ == "__main__":
    main()
