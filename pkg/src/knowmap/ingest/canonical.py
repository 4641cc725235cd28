"""Canonical corpus CSV: the lossless persistence format between CLI stages."""

from __future__ import annotations

import csv
import io

from knowmap.ingest.normalize import normalize_all
from knowmap.ingest.records import BibRecord, Corpus, Diagnostic, NormalizedAuthor
from knowmap.ingest.tabular import CANONICAL_COLUMNS, parse_tabular


def format_author(author: NormalizedAuthor) -> str:
    # "Surname, I.J." always carries the comma so multi-word surnames re-parse intact.
    if not author.initials:
        return f"{author.surname},"
    return f"{author.surname}, " + "".join(f"{ch}." for ch in author.initials)


def record_row(record: BibRecord) -> list[str]:
    return [
        record.record_id,
        record.origin.value,
        record.doi or "",
        record.title,
        "" if record.year is None else str(record.year),
        record.source_title,
        "; ".join(format_author(a) for a in record.authors),
        "; ".join(record.author_keywords),
        record.abstract or "",
    ]


def write_corpus_csv(records) -> str:
    buf = io.StringIO(newline="")
    writer = csv.writer(buf)
    writer.writerow(CANONICAL_COLUMNS)
    for record in records:
        writer.writerow(record_row(record))
    return buf.getvalue()


def read_corpus_csv(text: str, source_file: str = "<string>") -> tuple[Corpus, list[Diagnostic]]:
    parsed = parse_tabular(text, {c: c for c in CANONICAL_COLUMNS}, source_file)
    records, diagnostics = normalize_all(parsed.entries)
    return Corpus.of(records), parsed.diagnostics + diagnostics
