"""Pipeline stages behind the CLI: ingest -> report -> map, plus synth.

Every stage writes its files into ``output_dir`` and records them, with
SHA-256 hashes, in ``manifest.json``. Nothing time- or host-dependent goes
into any output, so identical inputs give identical bytes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from knowmap import __version__
from knowmap.indicators import (
    SUMMARY_NOTES,
    EmptyCorpusError,
    annual_production,
    rank_authors,
    rank_sources,
    summarize,
)
from knowmap.ingest import (
    PARSERS,
    SCOPUS_COLUMNS,
    Corpus,
    Diagnostic,
    Format,
    Origin,
    merge_corpora,
    normalize_all,
    read_corpus_csv,
    write_corpus_csv,
)
from knowmap.ingest.writers import to_bibtex, to_medline, to_ris
from knowmap.netlab import (
    METHOD_NOTE,
    NoEdgesError,
    NoTermsError,
    betweenness,
    coauthorship_graph,
    conceptual_map,
    detect_communities,
    to_dot,
    to_graphml,
)
from knowmap.netlab.export import fmt_number
from knowmap.svg import bar_chart, scatter_map
from knowmap.synth import InfeasibleSpecError, SynthSpec, generate
from knowmap.termspace import (
    TermConfig,
    TermLayer,
    default_stopwords,
    load_merge_rules,
    load_stopwords,
    occurrence_table,
)

CORPUS_FILE = "corpus.csv"
MANIFEST_FILE = "manifest.json"

EXTENSIONS = {
    ".bib": Format.BIBTEX,
    ".bibtex": Format.BIBTEX,
    ".ris": Format.RIS,
    ".nbib": Format.MEDLINE,
    ".medline": Format.MEDLINE,
    ".txt": Format.MEDLINE,
    ".csv": Format.TABULAR,
}
FORMAT_NAMES = {
    "bibtex": Format.BIBTEX,
    "bib": Format.BIBTEX,
    "ris": Format.RIS,
    "medline": Format.MEDLINE,
    "nbib": Format.MEDLINE,
    "pubmed": Format.MEDLINE,
    "tabular": Format.TABULAR,
    "csv": Format.TABULAR,
}


class KnowmapError(Exception):
    exit_code = 1
    tag = "error"


class InputError(KnowmapError):
    exit_code = 2
    tag = "input"


class MissingCorpusError(KnowmapError):
    exit_code = 3
    tag = "missing-corpus"


class EmptyAnalysisError(KnowmapError):
    exit_code = 4
    tag = "empty-analysis"


class ConfigError(KnowmapError):
    exit_code = 5
    tag = "config"


@dataclass
class InputSpec:
    path: str
    format: Format | None = None
    origin: Origin | None = None
    # column map preset ("canonical", "scopus") or explicit header->field map
    columns: str | dict | None = None

    @classmethod
    def parse(cls, value) -> "InputSpec":
        """Accept a dict from the config file or "path[:format[:origin]]" from the command line."""
        try:
            if isinstance(value, dict):
                unknown = set(value) - {"path", "format", "origin", "columns"}
                if unknown:
                    raise ConfigError(f"unknown input keys {sorted(unknown)}")
                fmt = value.get("format")
                return cls(
                    str(value["path"]),
                    FORMAT_NAMES[fmt.lower()] if fmt else None,
                    Origin.parse(value["origin"]) if value.get("origin") else None,
                    value.get("columns"),
                )
            path, *rest = str(value).split(":")
            fmt = FORMAT_NAMES[rest[0].lower()] if rest and rest[0] else None
            origin = Origin.parse(rest[1]) if len(rest) > 1 and rest[1] else None
            return cls(path, fmt, origin)
        except KeyError as exc:
            raise ConfigError(f"bad input spec {value!r}: unknown {exc}") from None
        except ValueError as exc:
            raise ConfigError(f"bad input spec {value!r}: {exc}") from None

    def echo(self) -> dict:
        return {
            "path": self.path,
            "format": self.format.value if self.format else None,
            "origin": self.origin.value if self.origin else None,
            "columns": self.columns,
        }


@dataclass
class PipelineConfig:
    inputs: list[InputSpec] = field(default_factory=list)
    layer: TermLayer | None = None
    min_df: int = 2
    top_k: int = 10
    seed: int = 0
    resolution: float = 1.0
    weighted_centrality: bool = False
    stopword_path: str | None = None
    merge_rules_path: str | None = None
    output_dir: str = "knowmap-out"

    def validate(self) -> None:
        if self.min_df < 1:
            raise ConfigError("min_df must be >= 1")
        if self.top_k < 1:
            raise ConfigError("top_k must be >= 1")
        if self.resolution <= 0:
            raise ConfigError("resolution must be > 0")

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        data = dict(data)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown config fields {sorted(unknown)}")
        try:
            if "inputs" in data:
                data["inputs"] = [InputSpec.parse(v) for v in data["inputs"]]
            if data.get("layer") is not None:
                data["layer"] = TermLayer.parse(data["layer"])
            for name in ("min_df", "top_k", "seed"):
                if name in data:
                    data[name] = int(data[name])
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        return cls(**data)

    @classmethod
    def load(cls, path: str | Path) -> "PipelineConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)

    def term_config(self) -> TermConfig:
        try:
            stopwords = load_stopwords(self.stopword_path) if self.stopword_path else default_stopwords()
            rules = load_merge_rules(self.merge_rules_path) if self.merge_rules_path else {}
            return TermConfig(stopwords=stopwords, merge_rules=rules)
        except OSError as exc:
            raise ConfigError(f"cannot read term file: {exc}") from None
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def echo(self) -> dict:
        # output_dir is left out so runs into different directories compare equal
        return {
            "inputs": [spec.echo() for spec in self.inputs],
            "layer": self.layer.value if self.layer else None,
            "min_df": self.min_df,
            "top_k": self.top_k,
            "seed": self.seed,
            "resolution": self.resolution,
            "weighted_centrality": self.weighted_centrality,
            "stopword_path": self.stopword_path,
            "merge_rules_path": self.merge_rules_path,
        }


# ---------------------------------------------------------------- file helpers


def sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _csv_text(header, rows) -> str:
    buf = io.StringIO(newline="")
    writer = csv.writer(buf)
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


class StageWriter:
    """Writes a stage's files and folds their hashes into manifest.json."""

    def __init__(self, config: PipelineConfig, stage: str) -> None:
        self.out = Path(config.output_dir)
        self.stage = stage
        self.config = config
        self.files: dict[str, str] = {}
        self.counts: dict[str, object] = {}
        self.notes: list[str] = []
        self.diagnostics: Counter = Counter()

    def write(self, name: str, text: str) -> None:
        self.out.mkdir(parents=True, exist_ok=True)
        path = self.out / name
        path.write_bytes(text.encode("utf-8"))
        self.files[name] = sha256_file(path)

    def finish(self) -> dict:
        manifest_path = self.out / MANIFEST_FILE
        manifest = {"tool": "knowmap", "version": __version__, "stages": {}}
        if manifest_path.exists():
            try:
                previous = json.loads(manifest_path.read_text(encoding="utf-8"))
                if isinstance(previous.get("stages"), dict):
                    manifest["stages"] = previous["stages"]
            except (json.JSONDecodeError, AttributeError):
                pass
        manifest["stages"][self.stage] = {
            "config": self.config.echo(),
            "counts": self.counts,
            "diagnostics": dict(sorted(self.diagnostics.items())),
            "notes": self.notes,
            "files": dict(sorted(self.files.items())),
        }
        manifest["stages"] = dict(sorted(manifest["stages"].items()))
        self.out.mkdir(parents=True, exist_ok=True)
        manifest_path.write_text(
            json.dumps(manifest, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        return manifest


# ---------------------------------------------------------------- ingest


def _expand_inputs(specs: list[InputSpec]) -> tuple[list[tuple[Path, InputSpec]], list[str]]:
    files, problems = [], []
    for spec in specs:
        path = Path(spec.path)
        if path.is_dir():
            found = sorted(p for p in path.iterdir() if p.suffix.lower() in EXTENSIONS and p.is_file())
            if not found:
                problems.append(f"{spec.path} (directory holds no .bib/.ris/.nbib/.txt/.csv files)")
            files.extend((p, spec) for p in found)
        elif path.is_file():
            files.append((path, spec))
        else:
            problems.append(f"{spec.path} (not found)")
    return files, problems


def _column_map(spec: InputSpec):
    if spec.columns is None or spec.columns == "auto":
        return None
    if isinstance(spec.columns, dict):
        return spec.columns
    if spec.columns == "scopus":
        return SCOPUS_COLUMNS
    if spec.columns == "canonical":
        return None
    raise ConfigError(f"unknown column preset {spec.columns!r}")


def read_input(path: Path, spec: InputSpec):
    fmt = spec.format or EXTENSIONS.get(path.suffix.lower())
    if fmt is None:
        raise InputError(f"cannot infer format of {path}; give one explicitly")
    try:
        text = path.read_bytes().decode("utf-8-sig")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError as exc:
        raise InputError(f"{path} is not valid UTF-8 ({exc.reason} at byte {exc.start})") from None
    name = str(path)
    if fmt is Format.TABULAR:
        result = PARSERS[fmt](text, _column_map(spec), name)
    else:
        result = PARSERS[fmt](text, name)
    origin = spec.origin or (Origin.MEDLINE if fmt is Format.MEDLINE else Origin.OTHER)
    records, rejected = normalize_all(result.entries, origin)
    return origin, records, result.diagnostics + rejected


def run_ingest(config: PipelineConfig, emit=None) -> dict:
    config.validate()
    if not config.inputs:
        raise InputError("no inputs given (use --input or the config 'inputs' list)")
    files, problems = _expand_inputs(config.inputs)
    if problems:
        raise InputError("missing inputs: " + "; ".join(problems))

    stage = StageWriter(config, "ingest")
    lists = []
    per_file = {}
    diagnostics: list[Diagnostic] = []
    for path, spec in files:
        origin, records, diags = read_input(path, spec)
        lists.append((origin, records))
        per_file[str(path)] = len(records)
        diagnostics.extend(diags)
    for d in diagnostics:
        stage.diagnostics[d.code] += 1
        if emit:
            emit(d)

    corpus = merge_corpora(lists)
    reasons = Counter(event.reason.value for event in corpus.merge_log)
    stage.counts = {
        "records_per_file": per_file,
        "records_in": sum(per_file.values()),
        "records_out": len(corpus.records),
        "merged": len(corpus.merge_log),
        "merged_by_reason": dict(sorted(reasons.items())),
        "origin_counts": {o.value: c for o, c in sorted(corpus.origin_counts.items(), key=lambda kv: kv[0].value)},
    }
    stage.write(CORPUS_FILE, write_corpus_csv(corpus.records))
    stage.write(
        "merge_log.csv",
        _csv_text(
            ["kept_id", "dropped_id", "reason"],
            [(e.kept_id, e.dropped_id, e.reason.value) for e in corpus.merge_log],
        ),
    )
    return stage.finish()


def load_corpus(config: PipelineConfig, emit=None) -> Corpus:
    path = Path(config.output_dir) / CORPUS_FILE
    if not path.is_file():
        raise MissingCorpusError(f"{path} not found; run 'knowmap ingest' first")
    corpus, diagnostics = read_corpus_csv(path.read_text(encoding="utf-8-sig"), str(path))
    for d in diagnostics:
        if emit:
            emit(d)
    if not corpus.records:
        raise MissingCorpusError(f"{path} holds no records")
    return corpus


# ---------------------------------------------------------------- report


def run_report(config: PipelineConfig, emit=None) -> dict:
    config.validate()
    corpus = load_corpus(config, emit)
    stage = StageWriter(config, "report")
    try:
        summary = summarize(corpus)
    except EmptyCorpusError as exc:
        raise MissingCorpusError(str(exc)) from None

    stage.write(
        "summary.json",
        json.dumps({**summary.to_dict(), "notes": list(SUMMARY_NOTES)}, indent=2, sort_keys=False)
        + "\n",
    )
    stage.write("summary.csv", _csv_text(["Description", "Results"], summary.display_rows()))

    annual = annual_production(corpus)
    stage.write("annual.csv", _csv_text(["Year", "Articles"], annual.rows()))
    stage.write(
        "annual.svg",
        bar_chart([(str(y), c) for y, c in annual.rows()], "Annual scientific production"),
    )

    sources = rank_sources(corpus, config.top_k)
    stage.write("sources.csv", _csv_text(["Source", "Articles"], sources.rows))
    stage.write(
        "sources_by_year.csv",
        _csv_text(
            ["Source", "Year", "Cumulative"],
            [(name, year, n) for (name, year), n in (sources.cumulative_by_year or {}).items()],
        ),
    )

    authors = rank_authors(corpus, config.top_k)
    stage.write(
        "authors.csv",
        _csv_text(["Author", "Display", "Articles"], [(k, authors.labels[k], c) for k, c in authors.rows]),
    )
    stage.write(
        "authors.svg",
        bar_chart([(authors.labels[k], c) for k, c in authors.rows], "Most relevant authors", horizontal=True),
    )

    terms = config.term_config()
    for layer, name in (
        (TermLayer.TITLE, "terms_title.csv"),
        (TermLayer.ABSTRACT, "terms_abstract.csv"),
        (TermLayer.AUTHOR_KEYWORDS, "terms_keywords.csv"),
    ):
        stage.write(name, occurrence_table(corpus, layer, terms).to_csv())

    stage.counts = {
        "documents": summary.documents,
        "unknown_year": annual.unknown_year,
        "sources_ranked": len(sources.rows),
        "authors_ranked": len(authors.rows),
    }
    stage.notes = list(SUMMARY_NOTES)
    return stage.finish()


# ---------------------------------------------------------------- map


def run_map(config: PipelineConfig, emit=None) -> dict:
    config.validate()
    if config.layer is None:
        raise ConfigError("map needs an explicit --layer (title, abstract or keywords)")
    corpus = load_corpus(config, emit)
    terms = config.term_config()
    try:
        cmap = conceptual_map(corpus, config.layer, terms, config.min_df, config.seed, config.resolution)
    except (NoTermsError, NoEdgesError) as exc:
        raise EmptyAnalysisError(str(exc)) from None

    graph = cmap.graph
    clusters = cmap.partition.assignment
    central = betweenness(graph, use_weights=config.weighted_centrality).scores
    degree = graph.degree()
    stage = StageWriter(config, "map")

    node_data = {
        label: {
            "cluster": clusters[label],
            "x": cmap.points[label][0],
            "y": cmap.points[label][1],
            "betweenness": central[label],
            "degree": degree[label],
        }
        for label in graph.labels
    }
    stage.write("terms.graphml", to_graphml(graph, node_data))
    stage.write("terms.dot", to_dot(graph, clusters, "terms"))
    ranked = sorted(graph.labels, key=lambda t: (-central[t], -degree[t], t))
    stage.write(
        "centrality.csv",
        _csv_text(["term", "betweenness", "degree"], [(t, fmt_number(central[t]), degree[t]) for t in ranked]),
    )
    stage.write(
        "clusters.csv",
        _csv_text(
            ["term", "cluster", "occurrence", "x", "y"],
            [
                (label, clusters[label], occ, fmt_number(cmap.points[label][0]), fmt_number(cmap.points[label][1]))
                for label, occ in graph.nodes
            ],
        ),
    )
    stage.write(
        "map.svg",
        scatter_map(cmap.points, clusters, f"Conceptual map ({config.layer.value})", dict(graph.nodes)),
    )

    authors = coauthorship_graph(corpus)
    author_clusters = {}
    if authors.edges:
        author_clusters = detect_communities(authors, config.seed, config.resolution).assignment
    stage.write(
        "authors.graphml",
        to_graphml(authors, {k: {"cluster": c} for k, c in author_clusters.items()}),
    )
    stage.write("authors.dot", to_dot(authors, author_clusters, "authors"))

    stage.counts = {
        "term_nodes": graph.n,
        "term_edges": len(graph.edges),
        "clusters": cmap.partition.n_clusters,
        "modularity": fmt_number(cmap.partition.modularity),
        "stress": fmt_number(cmap.stress),
        "layout_degenerate": cmap.degenerate,
        "author_nodes": authors.n,
        "author_edges": len(authors.edges),
        "author_clusters": len(set(author_clusters.values())),
    }
    stage.notes = [
        METHOD_NOTE,
        "centrality: raw shortest-path betweenness, "
        + ("edge length 1/weight" if config.weighted_centrality else "hop counts"),
    ]
    return stage.finish()


# ---------------------------------------------------------------- synth

SYNTH_WRITERS = {
    "csv": (write_corpus_csv, "synthetic.csv"),
    "bibtex": (to_bibtex, "synthetic.bib"),
    "ris": (to_ris, "synthetic.ris"),
    "medline": (to_medline, "synthetic.nbib"),
}


def run_synth(spec: SynthSpec, out_dir: str | Path, fmt: str = "csv") -> Path:
    if fmt not in SYNTH_WRITERS:
        raise ConfigError(f"unknown synth format {fmt!r} ({', '.join(SYNTH_WRITERS)})")
    try:
        records = generate(spec)
    except InfeasibleSpecError as exc:
        raise ConfigError(f"InfeasibleSpec: {exc}") from None
    writer, name = SYNTH_WRITERS[fmt]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_bytes(writer(records).encode("utf-8"))
    return path
