"""Descriptive bibliometric statistics, annual production and rankings."""

from __future__ import annotations

import enum
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass, field

from knowmap.ingest.records import Corpus
from knowmap.ingest.text import clean, match_key


class EmptyCorpusError(ValueError):
    pass


@dataclass(frozen=True)
class IndicatorSummary:
    documents: int
    sources: int
    keywords: int
    period: tuple[int, int] | None
    authors: int
    author_appearances: int
    authors_single: int
    authors_multi: int
    single_authored_docs: int
    multi_authored_docs: int
    documents_per_author: float | None
    authors_per_document: float
    coauthors_per_document: float
    # None when no document has two or more authors.
    collaboration_index: float | None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["period"] = list(self.period) if self.period else None
        return d

    def display_rows(self) -> list[tuple[str, str]]:
        """Rows in the printed layout: 3 decimals for documents/author, 2 for other ratios."""

        def fmt(value: float | None, digits: int) -> str:
            return "NA" if value is None else f"{value:.{digits}f}"

        period = f"{self.period[0]} - {self.period[1]}" if self.period else "NA"
        return [
            ("Documents", str(self.documents)),
            ("Sources", str(self.sources)),
            ("Keywords", str(self.keywords)),
            ("Period", period),
            ("Authors", str(self.authors)),
            ("Author Appearances", str(self.author_appearances)),
            ("Authors of single-authored documents", str(self.authors_single)),
            ("Authors of multi-authored documents", str(self.authors_multi)),
            ("Single-authored documents", str(self.single_authored_docs)),
            ("Documents per Author", fmt(self.documents_per_author, 3)),
            ("Authors per Document", fmt(self.authors_per_document, 2)),
            ("Co-Authors per Documents", fmt(self.coauthors_per_document, 2)),
            ("Collaboration Index", fmt(self.collaboration_index, 2)),
        ]


SUMMARY_NOTES = (
    "authors are keyed by (surname, initials) after diacritic folding; homonyms merge",
    "keywords counts distinct normalized author keywords",
    "authors on both single- and multi-authored documents count as multi only",
)


def summarize(corpus: Corpus) -> IndicatorSummary:
    records = corpus.records
    if not records:
        raise EmptyCorpusError("cannot summarize an empty corpus")

    sources = {match_key(r.source_title) for r in records if clean(r.source_title)}
    keywords = {k for r in records for k in r.author_keywords}
    years = [r.year for r in records if r.year is not None]

    solo_pool: set[str] = set()
    multi_pool: set[str] = set()
    appearances = single_docs = multi_docs = 0
    for r in records:
        keys = {a.key for a in r.authors}
        appearances += len(r.authors)
        if len(keys) == 1:
            single_docs += 1
            solo_pool |= keys
        elif len(keys) > 1:
            multi_docs += 1
            multi_pool |= keys

    authors = len(solo_pool | multi_pool)
    n = len(records)
    return IndicatorSummary(
        documents=n,
        sources=len(sources),
        keywords=len(keywords),
        period=(min(years), max(years)) if years else None,
        authors=authors,
        author_appearances=appearances,
        authors_single=len(solo_pool - multi_pool),
        authors_multi=len(multi_pool),
        single_authored_docs=single_docs,
        multi_authored_docs=multi_docs,
        documents_per_author=n / authors if authors else None,
        authors_per_document=authors / n,
        coauthors_per_document=appearances / n,
        collaboration_index=len(multi_pool) / multi_docs if multi_docs else None,
    )


@dataclass(frozen=True)
class AnnualProduction:
    counts: dict[int, int]
    unknown_year: int = 0

    def rows(self) -> list[tuple[int, int]]:
        return sorted(self.counts.items())


def annual_production(corpus: Corpus) -> AnnualProduction:
    counts = Counter(r.year for r in corpus.records if r.year is not None)
    unknown = sum(1 for r in corpus.records if r.year is None)
    return AnnualProduction(dict(sorted(counts.items())), unknown)


class RankingKind(str, enum.Enum):
    SOURCE = "Source"
    AUTHOR = "Author"


@dataclass(frozen=True)
class RankingReport:
    kind: RankingKind
    rows: list[tuple[str, int]]
    cumulative_by_year: dict[tuple[str, int], int] | None = None
    labels: dict[str, str] = field(default_factory=dict)


def _ranked(counter: Counter, top_k: int) -> list[tuple[str, int]]:
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    return sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))[:top_k]


def rank_sources(corpus: Corpus, top_k: int = 10) -> RankingReport:
    """Top sources by record count; spelling variants of one venue are pooled.

    Each source is reported under its most frequent spelling.
    """
    counts: Counter = Counter()
    spellings: dict[str, Counter] = defaultdict(Counter)
    for r in corpus.records:
        title = clean(r.source_title)
        if not title:
            continue
        key = match_key(title)
        counts[key] += 1
        spellings[key][title] += 1
    display = {
        key: min(variants.items(), key=lambda kv: (-kv[1], kv[0]))[0]
        for key, variants in spellings.items()
    }
    named = Counter({display[k]: c for k, c in counts.items()})
    rows = _ranked(named, top_k)

    cumulative: dict[tuple[str, int], int] = {}
    years = [r.year for r in corpus.records if r.year is not None]
    if years and rows:
        per_year: dict[str, Counter] = defaultdict(Counter)
        for r in corpus.records:
            if r.year is not None and clean(r.source_title):
                per_year[display[match_key(r.source_title)]][r.year] += 1
        for name, _ in rows:
            running = 0
            for year in range(min(years), max(years) + 1):
                running += per_year[name][year]
                cumulative[(name, year)] = running
    return RankingReport(RankingKind.SOURCE, rows, cumulative)


def rank_authors(corpus: Corpus, top_k: int = 10) -> RankingReport:
    """Top authors by number of distinct records, keyed as "surname initials"."""
    counts: Counter = Counter()
    labels: dict[str, str] = {}
    for r in corpus.records:
        for author in r.authors:
            seen = labels.get(author.key)
            labels[author.key] = author.display if seen is None else min(seen, author.display)
        counts.update({a.key for a in r.authors})
    rows = _ranked(counts, top_k)
    return RankingReport(RankingKind.AUTHOR, rows, None, {k: labels[k] for k, _ in rows})
