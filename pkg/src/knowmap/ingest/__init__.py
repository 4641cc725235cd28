"""Bibliographic export parsing, normalization and cross-database merging."""

from knowmap.ingest.bibtex import parse_bibtex
from knowmap.ingest.canonical import read_corpus_csv, write_corpus_csv
from knowmap.ingest.medline import parse_medline
from knowmap.ingest.merge import merge_corpora
from knowmap.ingest.normalize import NoTitleError, normalize, normalize_all, parse_author
from knowmap.ingest.records import (
    BibRecord,
    Corpus,
    Diagnostic,
    Format,
    MergeEvent,
    MergeReason,
    NormalizedAuthor,
    Origin,
    ParseResult,
    RawEntry,
)
from knowmap.ingest.ris import parse_ris
from knowmap.ingest.tabular import CANONICAL_COLUMNS, SCOPUS_COLUMNS, parse_tabular

PARSERS = {
    Format.BIBTEX: parse_bibtex,
    Format.RIS: parse_ris,
    Format.MEDLINE: parse_medline,
    Format.TABULAR: parse_tabular,
}

__all__ = [
    "BibRecord",
    "CANONICAL_COLUMNS",
    "Corpus",
    "Diagnostic",
    "Format",
    "MergeEvent",
    "MergeReason",
    "NoTitleError",
    "NormalizedAuthor",
    "Origin",
    "PARSERS",
    "ParseResult",
    "RawEntry",
    "SCOPUS_COLUMNS",
    "merge_corpora",
    "normalize",
    "normalize_all",
    "parse_author",
    "parse_bibtex",
    "parse_medline",
    "parse_ris",
    "parse_tabular",
    "read_corpus_csv",
    "write_corpus_csv",
]
