"""``knowmap`` command line: ingest, report, map and synth."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from knowmap import __version__
from knowmap.pipeline import (
    ConfigError,
    InputSpec,
    KnowmapError,
    PipelineConfig,
    run_ingest,
    run_map,
    run_report,
    run_synth,
    SYNTH_WRITERS,
)
from knowmap.synth import InfeasibleSpecError, SynthSpec
from knowmap.termspace import TermLayer

YELLOW = "\033[33m"
RESET = "\033[0m"


def _use_color(stream) -> bool:
    return not os.environ.get("KNOWMAP_NO_COLOR") and hasattr(stream, "isatty") and stream.isatty()


def _emitter(stream=None):
    stream = stream or sys.stderr
    color = _use_color(stream)

    def emit(diagnostic) -> None:
        line = str(diagnostic)
        print(f"{YELLOW}{line}{RESET}" if color else line, file=stream)

    return emit


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file with pipeline settings")
    parser.add_argument("--out", help="output directory (default knowmap-out)")
    parser.add_argument("--layer", help="title, abstract or keywords")
    parser.add_argument("--min-df", type=int, help="minimum document frequency of a term")
    parser.add_argument("--top-k", type=int, help="rows in source/author rankings")
    parser.add_argument("--seed", type=int, help="community detection seed")
    parser.add_argument("--stopwords", help="stopword file, one word per line")
    parser.add_argument("--merge-rules", help="tab-separated 'variant<TAB>canonical' file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="knowmap", description="Bibliometric indicators and co-word maps from bibliographic exports."
    )
    parser.add_argument("--version", action="version", version=f"knowmap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse and merge input files into corpus.csv")
    _common(p)
    p.add_argument(
        "--input",
        action="append",
        default=[],
        metavar="PATH[:FORMAT[:ORIGIN]]",
        help="file or directory; repeatable",
    )

    p = sub.add_parser("report", help="indicator tables and charts from corpus.csv")
    _common(p)

    p = sub.add_parser("map", help="term network, clusters and layout from corpus.csv")
    _common(p)
    p.add_argument("--resolution", type=float, help="modularity resolution (default 1.0)")
    p.add_argument(
        "--weighted", action="store_true", help="betweenness with edge length 1/weight"
    )

    p = sub.add_parser("synth", help="write a synthetic corpus with exact author counts")
    p.add_argument("--spec", help="JSON file with generator settings")
    p.add_argument("--documents", type=int)
    p.add_argument("--single-authored", type=int)
    p.add_argument("--author-appearances", type=int)
    p.add_argument("--authors", type=int)
    p.add_argument("--authors-multi", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", default="csv", choices=sorted(SYNTH_WRITERS))
    p.add_argument("--out", default="knowmap-synth")
    return parser


def resolve_config(args: argparse.Namespace) -> PipelineConfig:
    """Config file first, then command-line overrides."""
    config = PipelineConfig.load(args.config) if args.config else PipelineConfig()
    inputs = getattr(args, "input", None)
    if inputs:
        config.inputs = [InputSpec.parse(value) for value in inputs]
    if args.layer is not None:
        try:
            config.layer = TermLayer.parse(args.layer)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    for attr, name in (
        ("min_df", "min_df"),
        ("top_k", "top_k"),
        ("seed", "seed"),
        ("stopwords", "stopword_path"),
        ("merge_rules", "merge_rules_path"),
        ("out", "output_dir"),
        ("resolution", "resolution"),
    ):
        value = getattr(args, attr, None)
        if value is not None:
            setattr(config, name, value)
    if getattr(args, "weighted", False):
        config.weighted_centrality = True
    config.validate()
    return config


def _synth_spec(args: argparse.Namespace) -> SynthSpec:
    data: dict = {}
    if args.spec:
        try:
            data = json.loads(Path(args.spec).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot load synth spec {args.spec}: {exc}") from None
    for name in ("documents", "single_authored", "author_appearances", "authors", "authors_multi", "seed"):
        value = getattr(args, name)
        if value is not None:
            data[name] = value
    missing = [n for n in ("documents", "single_authored", "author_appearances", "authors") if n not in data]
    if missing:
        raise ConfigError(f"synth spec lacks {', '.join(missing)}")
    try:
        return SynthSpec.from_dict(data)
    except (InfeasibleSpecError, TypeError, ValueError) as exc:
        raise ConfigError(f"InfeasibleSpec: {exc}") from None


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    emit = _emitter()
    try:
        if args.command == "synth":
            path = run_synth(_synth_spec(args), args.out, args.format)
            print(path)
            return 0
        config = resolve_config(args)
        stage = {"ingest": run_ingest, "report": run_report, "map": run_map}[args.command]
        manifest = stage(config, emit)
        counts = manifest["stages"][args.command]["counts"]
        summary = ", ".join(f"{k}={v}" for k, v in counts.items() if not isinstance(v, dict))
        print(f"knowmap {args.command}: {summary} -> {config.output_dir}")
        return 0
    except KnowmapError as exc:
        message = " ".join(str(exc).split())
        print(f"knowmap: E{exc.exit_code} {exc.tag}: {message}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
