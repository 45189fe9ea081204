"""``vistrace`` command line.

Exit codes: 0 success / gate pass, 1 gate fail, 2 validation error,
3 parse or I/O error.
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .errors import E_IO, E_NOT_LEAF, E_UNKNOWN_NODE, ManifestParseError, VistraceError
from .freshness import FreshnessPolicy, load_policy, suggest_freshness
from .manifest import InvalidManifest, Manifest, ValidationReport, load_manifest, manifest_chain, validate_manifest
from .metrics import ChainScore, chain_visibility, format_fixed, node_visibility
from .pipeline import NodeKind, SupplyChain
from .report import (
    FORMATS,
    SubManifestResult,
    rank_entries,
    render_explain,
    render_rank,
    render_score,
    render_suggestions,
    mode_for,
)

EXIT_OK = 0
EXIT_GATE_FAIL = 1
EXIT_INVALID = 2
EXIT_PARSE = 3


class CommandFailed(Exception):
    def __init__(self, exit_code: int):
        super().__init__(exit_code)
        self.exit_code = exit_code


def _err(message: str) -> None:
    print(message, file=sys.stderr)


def _print_report(report: ValidationReport, stream=None) -> None:
    stream = stream or sys.stdout
    for finding in report.errors:
        print(f"error {finding}", file=stream)
    for finding in report.warnings:
        print(f"warning {finding}", file=stream)
    print(report.summary(), file=stream)


def _read_manifest(path: str) -> Manifest:
    try:
        return load_manifest(path)
    except OSError as exc:
        _err(f"{path}: {E_IO}: {exc.strerror or exc}")
        raise CommandFailed(EXIT_PARSE) from None
    except ManifestParseError as exc:
        _err(f"{path}: {exc.to_finding()}")
        raise CommandFailed(EXIT_PARSE) from None


def _load_chain(path: str) -> tuple[Manifest, SupplyChain]:
    manifest = _read_manifest(path)
    try:
        return manifest, manifest_chain(manifest)
    except InvalidManifest as exc:
        _err(f"{path}: validation failed")
        _print_report(exc.report, sys.stderr)
        raise CommandFailed(EXIT_INVALID) from None


def _read_weights(path: Optional[str]) -> Optional[dict]:
    if path is None:
        return None
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        _err(f"{path}: {E_IO}: {exc.strerror or exc}")
        raise CommandFailed(EXIT_PARSE) from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        _err(f"{path}: E_SYNTAX: weights file is not valid JSON: {exc}")
        raise CommandFailed(EXIT_PARSE) from None
    if not isinstance(raw, dict):
        _err(f"{path}: E_BAD_WEIGHTS: weights file must hold a JSON object of node id -> weight")
        raise CommandFailed(EXIT_INVALID)
    return raw


def _score(path: str, paper_compat: bool, weights_path: Optional[str] = None) -> tuple[Manifest, SupplyChain, ChainScore]:
    manifest, chain = _load_chain(path)
    weights = _read_weights(weights_path)
    if weights is None:
        weights = manifest.weights
    try:
        score = chain_visibility(chain, weights, mode_for(paper_compat))
    except VistraceError as exc:
        _err(f"{path}: {exc.to_finding()}")
        raise CommandFailed(EXIT_INVALID) from None
    return manifest, chain, score


def _sub_manifests(path: str, chain: SupplyChain, paper_compat: bool) -> list[SubManifestResult]:
    results = []
    for leaf in chain.leaves:
        if leaf.kind is not NodeKind.EXTERNAL_MODEL or not leaf.sub_manifest:
            continue
        target = Path(path).parent / leaf.sub_manifest
        try:
            sub = manifest_chain(load_manifest(target))
            vis = chain_visibility(sub, None, mode_for(paper_compat)).vis
            results.append(SubManifestResult(leaf.id, leaf.sub_manifest, vis=vis))
        except OSError as exc:
            results.append(SubManifestResult(leaf.id, leaf.sub_manifest, error=f"{E_IO}: {exc.strerror or exc}"))
        except VistraceError as exc:
            results.append(SubManifestResult(leaf.id, leaf.sub_manifest, error=str(exc.to_finding())))
    return results


def _title(manifest: Manifest) -> str:
    return f"{manifest.subject.name} [{manifest.subject.id}]"


def cmd_score(args: argparse.Namespace) -> int:
    manifest, chain, score = _score(args.manifest, args.paper_compat, args.weights)
    subs = _sub_manifests(args.manifest, chain, args.paper_compat)
    sys.stdout.write(render_score(score, args.format, args.precision, _title(manifest), subs))
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    manifest = _read_manifest(args.manifest)
    report = validate_manifest(manifest, strict=args.strict)
    if args.format == "json":
        sys.stdout.write(json.dumps(report.to_dict(), indent=2) + "\n")
    else:
        _print_report(report)
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_rank(args: argparse.Namespace) -> int:
    scored = []
    worst = EXIT_OK
    for path in args.manifests:
        try:
            manifest, _, score = _score(path, args.paper_compat)
        except CommandFailed as exc:
            worst = max(worst, exc.exit_code)
            continue
        scored.append((path, manifest.subject.name, score.vis))
    sys.stdout.write(render_rank(rank_entries(scored), args.format, args.precision))
    return worst


def cmd_explain(args: argparse.Namespace) -> int:
    _, chain = _load_chain(args.manifest)
    if args.node not in chain:
        _err(f"{args.manifest}: {E_UNKNOWN_NODE}: no node {args.node!r}")
        return EXIT_INVALID
    if not chain.is_leaf(args.node):
        _err(
            f"{args.manifest}: {E_NOT_LEAF}: {args.node} is not a scored leaf; "
            f"its visibility comes from its contributors ({', '.join(sorted(chain.contributors(args.node)))})"
        )
        return EXIT_INVALID
    node = chain.node(args.node)
    score = node_visibility(node.judgements, node.id)
    sys.stdout.write(render_explain(node, score.vis_quality, score.vis, args.precision))
    return EXIT_OK


def cmd_gate(args: argparse.Namespace) -> int:
    _, _, score = _score(args.manifest, args.paper_compat, args.weights)
    passed = score.vis >= args.min
    verdict = "PASS" if passed else "FAIL"
    relation = ">=" if passed else "<"
    print(
        f"{verdict}: overall VIS {format_fixed(score.vis, args.precision)} {relation} "
        f"minimum {format_fixed(args.min, args.precision)} ({score.mode.value})"
    )
    return EXIT_OK if passed else EXIT_GATE_FAIL


def cmd_suggest_freshness(args: argparse.Namespace) -> int:
    policy = FreshnessPolicy()
    if args.policy:
        try:
            policy = load_policy(args.policy)
        except OSError as exc:
            _err(f"{args.policy}: {E_IO}: {exc.strerror or exc}")
            return EXIT_PARSE
        except ManifestParseError as exc:
            _err(f"{args.policy}: {exc.to_finding()}")
            return EXIT_PARSE
        except VistraceError as exc:
            _err(f"{args.policy}: {exc.to_finding()}")
            return EXIT_INVALID
    _, chain = _load_chain(args.manifest)
    suggestions, failures = [], []
    for leaf in chain.leaves:
        try:
            suggestions.append(suggest_freshness(leaf, policy, args.as_of))
        except VistraceError as exc:
            _err(f"{args.manifest}: {exc.to_finding()}")
            failures.append((leaf.id, str(exc.to_finding())))
    sys.stdout.write(render_suggestions(suggestions, failures, policy, args.format))
    return EXIT_OK


def _gate_min(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 1.0 <= value <= 4.0:
        raise argparse.ArgumentTypeError(f"minimum must be between 1 and 4, got {value}")
    return value


def _iso_date(text: str) -> dt.date:
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a YYYY-MM-DD date: {text!r}") from None


def _precision(text: str) -> int:
    value = int(text)
    if not 0 <= value <= 12:
        raise argparse.ArgumentTypeError("precision must be between 0 and 12")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vistrace", description="Score the transparency of a model's contribution supply chain."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def output_flags(p: argparse.ArgumentParser, compat: bool = True) -> None:
        p.add_argument("--format", choices=FORMATS, default="text")
        p.add_argument("--precision", type=_precision, default=2, help="decimals shown in text/markdown (default 2)")
        if compat:
            p.add_argument(
                "--paper-compat",
                action="store_true",
                help="aggregate from per-node values rounded to 2 decimals",
            )

    p = sub.add_parser("score", help="score a manifest")
    p.add_argument("manifest")
    p.add_argument("--weights", help="JSON file mapping leaf id to weight (overrides the manifest)")
    output_flags(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("validate", help="check a manifest and list every problem")
    p.add_argument("manifest")
    p.add_argument("--strict", action="store_true", help="treat internal judgements, missing rationale and unknown fields as errors")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("rank", help="rank several manifests by overall VIS")
    p.add_argument("manifests", nargs="+")
    output_flags(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("explain", help="show judgements, anchors and derivation for one leaf")
    p.add_argument("manifest")
    p.add_argument("--node", required=True)
    p.add_argument("--precision", type=_precision, default=2)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("gate", help="exit non-zero when overall VIS is below a minimum")
    p.add_argument("manifest")
    p.add_argument("--min", type=_gate_min, required=True)
    p.add_argument("--weights")
    p.add_argument("--paper-compat", action="store_true")
    p.add_argument("--precision", type=_precision, default=2)
    p.set_defaults(func=cmd_gate)

    p = sub.add_parser("suggest-freshness", help="suggest freshness judgements from evidence dates")
    p.add_argument("manifest")
    p.add_argument("--as-of", type=_iso_date, default=None, help="evaluation date (default: today)")
    p.add_argument("--policy", help='JSON file {"fresh_window_days": N, "stale_window_days": M}')
    p.add_argument("--format", choices=FORMATS, default="text")
    p.set_defaults(func=cmd_suggest_freshness)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "as_of", "unset") is None:
        args.as_of = dt.date.today()
    try:
        return args.func(args)
    except CommandFailed as exc:
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
