"""Header-first CSV reader (RFC 4180 quoting) for Scopus/WoS-style exports."""

from __future__ import annotations

import csv
import io
from typing import Mapping

from knowmap.ingest.records import Format, ParseResult, RawEntry

MULTI_VALUED = frozenset({"authors", "author_keywords", "keywords"})

# Record-field names understood by normalize() for tabular input.
CANONICAL_COLUMNS = (
    "record_id",
    "origin",
    "doi",
    "title",
    "year",
    "source_title",
    "authors",
    "author_keywords",
    "abstract",
)

SCOPUS_COLUMNS = {
    "EID": "record_id",
    "DOI": "doi",
    "Title": "title",
    "Year": "year",
    "Source title": "source_title",
    "Authors": "authors",
    "Author Keywords": "author_keywords",
    "Abstract": "abstract",
}


def split_multi(cell: str) -> list[str]:
    return [part.strip() for part in cell.split(";") if part.strip()]


def parse_tabular(
    text: str,
    column_map: Mapping[str, str] | None = None,
    source_file: str = "<string>",
) -> ParseResult:
    """Read one entry per data row.

    ``column_map`` maps header names to record-field names; columns not in the
    map are ignored. Without a map, every header cell is used, lowercased.
    """
    result = ParseResult()
    text = text.lstrip("\ufeff")
    reader = csv.reader(io.StringIO(text, newline=""), strict=False)
    try:
        header = next(reader, None)
    except csv.Error as exc:
        result.warn(source_file, 1, "BadHeader", str(exc))
        return result
    if not header:
        return result
    header = [h.strip() for h in header]
    if column_map is None:
        column_map = {h: h.lower() for h in header if h}
    missing = [name for name in column_map if name not in header]
    if missing:
        for name in missing:
            result.warn(source_file, 1, "MissingColumn", f"header lacks column {name!r}")
        return result
    wanted = [(header.index(name), target) for name, target in column_map.items()]

    row_start = reader.line_num + 1
    while True:
        try:
            row = next(reader)
        except StopIteration:
            break
        except csv.Error as exc:
            result.warn(source_file, reader.line_num, "BadRow", str(exc))
            row_start = reader.line_num + 1
            continue
        span = (row_start, max(row_start, reader.line_num))
        row_start = reader.line_num + 1
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(header):
            result.warn(
                source_file,
                span[0],
                "RaggedRow",
                f"{len(row)} cells, header has {len(header)}; row skipped",
            )
            continue
        fields: list[tuple[str, str]] = []
        for index, target in wanted:
            cell = row[index]
            if target in MULTI_VALUED:
                fields.extend((target, part) for part in split_multi(cell))
            else:
                fields.append((target, cell))
        result.entries.append(RawEntry(Format.TABULAR, tuple(fields), source_file, span))
    return result
