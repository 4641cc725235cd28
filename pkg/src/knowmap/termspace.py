"""Term extraction and occurrence counting per keyword layer."""

from __future__ import annotations

import csv
import enum
import io
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from knowmap.ingest.records import BibRecord, Corpus
from knowmap.ingest.text import clean


class TermLayer(str, enum.Enum):
    TITLE = "Title"
    ABSTRACT = "Abstract"
    AUTHOR_KEYWORDS = "AuthorKeywords"

    @classmethod
    def parse(cls, value: "str | TermLayer") -> "TermLayer":
        if isinstance(value, TermLayer):
            return value
        key = re.sub(r"[^a-z]", "", value.lower())
        aliases = {
            "title": cls.TITLE,
            "titles": cls.TITLE,
            "abstract": cls.ABSTRACT,
            "abstracts": cls.ABSTRACT,
            "authorkeywords": cls.AUTHOR_KEYWORDS,
            "keywords": cls.AUTHOR_KEYWORDS,
            "de": cls.AUTHOR_KEYWORDS,
        }
        if key not in aliases:
            raise ValueError(f"unknown layer {value!r} (title, abstract, keywords)")
        return aliases[key]


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    text = resources.files("knowmap").joinpath("data/stopwords.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def load_stopwords(path: str | Path) -> frozenset[str]:
    lines = Path(path).read_text(encoding="utf-8-sig").splitlines()
    return frozenset(w.strip().lower() for w in lines if w.strip())


def load_merge_rules(path: str | Path) -> dict[str, str]:
    rules = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8-sig").splitlines(), 1):
        if not line.strip():
            continue
        source, tab, target = line.partition("\t")
        if not tab or not source.strip() or not target.strip():
            raise ValueError(f"{path}:{lineno}: expected 'from<TAB>to'")
        rules[source.strip().lower()] = target.strip().lower()
    return rules


@dataclass(frozen=True)
class TermConfig:
    stopwords: frozenset[str] = field(default_factory=default_stopwords)
    min_length: int = 2
    merge_rules: Mapping[str, str] = field(default_factory=dict)
    keep_hyphenated: bool = True

    def __post_init__(self) -> None:
        bad = [w for w in self.stopwords if w != w.lower()]
        if bad:
            raise ValueError(f"stopwords must be lowercase: {sorted(bad)[:5]}")
        chained = set(self.merge_rules) & set(self.merge_rules.values())
        if chained:
            raise ValueError(f"merge rules chain through {sorted(chained)}")
        if self.min_length < 1:
            raise ValueError("min_length must be >= 1")

    def fold(self, term: str) -> str:
        return self.merge_rules.get(term, term)


_HYPHENATED = re.compile(r"[^\W_]+(?:-[^\W_]+)*")
_PLAIN = re.compile(r"[^\W_]+")


def tokenize(text: str, config: TermConfig) -> list[str]:
    pattern = _HYPHENATED if config.keep_hyphenated else _PLAIN
    out = []
    for token in pattern.findall(text.lower()):
        if len(token) < config.min_length or token in config.stopwords:
            continue
        out.append(config.fold(token))
    return out


def has_layer(record: BibRecord, layer: TermLayer) -> bool:
    if layer is TermLayer.TITLE:
        return bool(record.title)
    if layer is TermLayer.ABSTRACT:
        return bool(record.abstract)
    return bool(record.author_keywords)


def _layer_terms(record: BibRecord, layer: TermLayer, config: TermConfig) -> list[str]:
    if layer is TermLayer.TITLE:
        return tokenize(record.title, config)
    if layer is TermLayer.ABSTRACT:
        return tokenize(record.abstract or "", config)
    keywords = (clean(k).lower() for k in record.author_keywords)
    return [config.fold(k) for k in keywords if k]


def extract_terms(
    record: BibRecord, layer: TermLayer, config: TermConfig
) -> list[tuple[str, int]]:
    """(term, frequency-in-record) pairs in order of first appearance.

    A record without the layer yields []; use has_layer() to tell that apart
    from a layer whose every token was filtered out.
    """
    counts = Counter(_layer_terms(record, layer, config))
    return list(counts.items())


@dataclass(frozen=True)
class OccurrenceTable:
    layer: TermLayer | None
    rows: tuple[tuple[str, int], ...]
    # records that lack the layer's field entirely
    records_without_layer: int = 0

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.rows, key=lambda row: (-row[1], row[0])))
        object.__setattr__(self, "rows", ordered)

    @property
    def total(self) -> int:
        return sum(count for _, count in self.rows)

    def as_dict(self) -> dict[str, int]:
        return dict(self.rows)

    def top(self, k: int) -> "OccurrenceTable":
        return OccurrenceTable(self.layer, self.rows[:k], self.records_without_layer)

    def to_csv(self) -> str:
        buf = io.StringIO(newline="")
        writer = csv.writer(buf)
        writer.writerow(["term", "occurrences"])
        writer.writerows(self.rows)
        writer.writerow(["TOTAL", self.total])
        return buf.getvalue()


def _tabulate(corpus: Corpus, layer: TermLayer, config: TermConfig, presence: bool) -> OccurrenceTable:
    layer = TermLayer.parse(layer)
    counts: Counter = Counter()
    missing = 0
    for record in corpus.records:
        if not has_layer(record, layer):
            missing += 1
            continue
        for term, freq in extract_terms(record, layer, config):
            counts[term] += 1 if presence else freq
    return OccurrenceTable(layer, tuple(counts.items()), missing)


def occurrence_table(corpus: Corpus, layer: TermLayer, config: TermConfig) -> OccurrenceTable:
    """Raw token frequency of every term across the corpus."""
    return _tabulate(corpus, layer, config, presence=False)


def document_frequency(corpus: Corpus, layer: TermLayer, config: TermConfig) -> OccurrenceTable:
    """Number of records containing each term at least once."""
    return _tabulate(corpus, layer, config, presence=True)


def combined_rows(tables: Iterable[OccurrenceTable]) -> list[tuple[str, str, int]]:
    """Layer-tagged rows of several tables, concatenated rather than summed."""
    return [
        (table.layer.value if table.layer else "", term, count)
        for table in tables
        for term, count in table.rows
    ]


def combined_csv(tables: Iterable[OccurrenceTable]) -> str:
    rows = combined_rows(tables)
    buf = io.StringIO(newline="")
    writer = csv.writer(buf)
    writer.writerow(["layer", "term", "occurrences"])
    writer.writerows(rows)
    writer.writerow(["", "TOTAL", sum(r[2] for r in rows)])
    return buf.getvalue()
