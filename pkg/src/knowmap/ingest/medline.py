"""PubMed/MEDLINE (nbib) reader.

Records are runs of non-blank lines. A tag line looks like ``TI  - text``
(tag left-justified in a four-character column); lines starting with
whitespace continue the previous tag's value.
"""

from __future__ import annotations

import re

from knowmap.ingest.records import Format, ParseResult, RawEntry

_TAG_LINE = re.compile(r"^([A-Z][A-Z0-9]{0,3}) *- ?(.*)$")


def _flush(
    result: ParseResult,
    block: list[list[str]],
    span: tuple[int, int],
    source_file: str,
    stray: int,
) -> None:
    if not block and not stray:
        return
    pmid = next((v for t, v in block if t == "PMID" and v), None)
    if pmid is None:
        result.warn(source_file, span[0], "NoPmid", "record block without PMID; dropped")
        return
    result.entries.append(
        RawEntry(Format.MEDLINE, tuple((t, v) for t, v in block), source_file, span, key=pmid)
    )


def parse_medline(text: str, source_file: str = "<string>") -> ParseResult:
    result = ParseResult()
    text = text.lstrip("\ufeff")
    block: list[list[str]] = []
    stray = 0
    first = last = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            _flush(result, block, (first, last), source_file, stray)
            block, stray = [], 0
            continue
        if not block and not stray:
            first = lineno
        last = lineno
        if line[0] in " \t":
            if block:
                block[-1][1] = f"{block[-1][1]} {line.strip()}".strip()
            else:
                stray += 1
            continue
        m = _TAG_LINE.match(line.rstrip())
        if m is None:
            stray += 1
            continue
        block.append([m.group(1), m.group(2).strip()])
    _flush(result, block, (first, last), source_file, stray)
    return result
