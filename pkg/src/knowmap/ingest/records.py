"""Core record types shared by the parsers, the normalizer and the merger."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Mapping


class Format(str, enum.Enum):
    BIBTEX = "BibTeX"
    RIS = "RIS"
    MEDLINE = "MEDLINE"
    TABULAR = "Tabular"


class Origin(str, enum.Enum):
    MEDLINE = "Medline"
    WEB_OF_SCIENCE = "WebOfScience"
    SCOPUS = "Scopus"
    OTHER = "Other"

    @classmethod
    def parse(cls, value: "str | Origin | None") -> "Origin":
        if value is None or value == "":
            return cls.OTHER
        if isinstance(value, Origin):
            return value
        key = "".join(ch for ch in value.lower() if ch.isalnum())
        aliases = {
            "medline": cls.MEDLINE,
            "pubmed": cls.MEDLINE,
            "webofscience": cls.WEB_OF_SCIENCE,
            "wos": cls.WEB_OF_SCIENCE,
            "scopus": cls.SCOPUS,
            "other": cls.OTHER,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown origin {value!r}") from None


# Merge tie-break: lower rank wins.
ORIGIN_PRIORITY = {
    Origin.MEDLINE: 0,
    Origin.WEB_OF_SCIENCE: 1,
    Origin.SCOPUS: 2,
    Origin.OTHER: 3,
}


@dataclass(frozen=True)
class Diagnostic:
    """A recoverable problem found while reading one input file."""

    file: str
    line: int
    code: str
    message: str

    def __str__(self) -> str:
        return f"WARN {self.file}:{self.line} {self.code} {self.message}"


@dataclass(frozen=True)
class RawEntry:
    format_tag: Format
    fields: tuple[tuple[str, str], ...]
    source_file: str = "<string>"
    line_span: tuple[int, int] = (1, 1)
    # Native identifier when the format has one (cite key, PMID, RIS ID).
    key: str | None = None

    def __post_init__(self) -> None:
        if self.line_span[0] > self.line_span[1]:
            raise ValueError(f"bad line span {self.line_span}")

    def get(self, tag: str) -> str | None:
        for name, value in self.fields:
            if name == tag:
                return value
        return None

    def get_all(self, tag: str) -> list[str]:
        return [value for name, value in self.fields if name == tag]


@dataclass
class ParseResult:
    """Entries recovered from one input plus the diagnostics raised on the way."""

    entries: list[RawEntry] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def __iter__(self) -> Iterator[RawEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def warn(self, file: str, line: int, code: str, message: str) -> None:
        self.diagnostics.append(Diagnostic(file, line, code, message))


@dataclass(frozen=True)
class NormalizedAuthor:
    surname: str
    initials: str = ""

    def __post_init__(self) -> None:
        if not self.surname:
            raise ValueError("author surname must be non-empty")

    @property
    def display(self) -> str:
        return f"{self.surname} {self.initials}" if self.initials else self.surname

    @property
    def key(self) -> str:
        """Identity key: (surname, initials) with diacritics folded, lowercased."""
        from knowmap.ingest.text import match_key

        return match_key(self.display)


@dataclass(frozen=True)
class BibRecord:
    record_id: str
    title: str
    doi: str | None = None
    abstract: str | None = None
    year: int | None = None
    source_title: str = ""
    authors: tuple[NormalizedAuthor, ...] = ()
    author_keywords: tuple[str, ...] = ()
    origin: Origin = Origin.OTHER

    def __post_init__(self) -> None:
        if not self.title.strip():
            raise ValueError("title must be non-empty")
        if self.year is not None and not 1800 <= self.year <= 2100:
            raise ValueError(f"year {self.year} outside [1800, 2100]")
        keys = [a.key for a in self.authors]
        if len(set(keys)) != len(keys):
            raise ValueError(f"duplicate authors in record {self.record_id}")

    def filled_fields(self) -> int:
        """Number of non-empty descriptive fields, used to pick merge survivors."""
        values = (
            self.title,
            self.doi,
            self.abstract,
            self.year,
            self.source_title,
            self.authors,
            self.author_keywords,
        )
        return sum(1 for v in values if v not in (None, "", ()))


class MergeReason(str, enum.Enum):
    DOI_MATCH = "DoiMatch"
    TITLE_YEAR_MATCH = "TitleYearMatch"


@dataclass(frozen=True)
class MergeEvent:
    kept_id: str
    dropped_id: str
    reason: MergeReason


@dataclass(frozen=True)
class Corpus:
    records: tuple[BibRecord, ...] = ()
    merge_log: tuple[MergeEvent, ...] = ()
    origin_counts: Mapping[Origin, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[BibRecord]:
        return iter(self.records)

    @classmethod
    def of(cls, records) -> "Corpus":
        """Wrap already-clean records without running the merge."""
        records = tuple(records)
        counts: dict[Origin, int] = {}
        for r in records:
            counts[r.origin] = counts.get(r.origin, 0) + 1
        return cls(records, (), counts)
