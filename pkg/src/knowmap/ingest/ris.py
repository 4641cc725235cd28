"""RIS reader: ``XX  - value`` lines, one record per ``ER  -`` terminator."""

from __future__ import annotations

import re

from knowmap.ingest.records import Format, ParseResult, RawEntry

# Exports disagree on spacing around the dash; accept "TY  - x", "TY - x", "ER  -".
_TAG_LINE = re.compile(r"^([A-Z][A-Z0-9]) {1,2}-(?: (.*))?$")


def parse_ris(text: str, source_file: str = "<string>") -> ParseResult:
    result = ParseResult()
    text = text.lstrip("\ufeff")
    fields: list[list[str]] = []
    start_line = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip()
        if not line.strip():
            continue
        m = _TAG_LINE.match(line)
        if m is None:
            if fields:
                # wrapped value: continue the previous tag
                fields[-1][1] = f"{fields[-1][1]} {line.strip()}".strip()
            continue
        tag, value = m.group(1), (m.group(2) or "").strip()
        if tag == "ER":
            if fields:
                result.entries.append(
                    RawEntry(
                        Format.RIS,
                        tuple((t, v) for t, v in fields),
                        source_file,
                        (start_line, lineno),
                        key=_native_id(fields),
                    )
                )
            fields = []
            continue
        if not fields:
            start_line = lineno
        fields.append([tag, value])
    if fields:
        result.warn(
            source_file,
            start_line,
            "MissingEndRecord",
            f"record of {len(fields)} tags has no 'ER  -' line; dropped",
        )
    return result


def _native_id(fields: list[list[str]]) -> str | None:
    for tag in ("ID", "AN"):
        for t, v in fields:
            if t == tag and v:
                return v
    return None
