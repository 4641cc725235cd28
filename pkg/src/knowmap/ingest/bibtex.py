"""BibTeX reader.

Entries are located by scanning for ``@type{`` / ``@type(`` and matching braces.
An entry whose braces never balance is reported as ``UnbalancedBraces`` and
scanning resumes at the next line that starts with ``@``, so one broken entry
does not swallow the rest of the file.
"""

from __future__ import annotations

import bisect
import re

from knowmap.ingest.records import Format, ParseResult, RawEntry
from knowmap.ingest.text import decode_latex

_ENTRY_START = re.compile(r"@\s*([A-Za-z][\w-]*)\s*([{(])")
_LINE_AT = re.compile(r"\n[ \t]*@\s*[A-Za-z][\w-]*\s*[{(]")
_NAME = re.compile(r"\s*([^\s=,{}\"#()]+)\s*")
_WS = re.compile(r"\s+")

_MONTHS = {
    m: str(i)
    for i, m in enumerate(
        ["jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"],
        start=1,
    )
}


class _Lines:
    def __init__(self, text: str) -> None:
        self._breaks = [i for i, ch in enumerate(text) if ch == "\n"]

    def at(self, pos: int) -> int:
        return bisect.bisect_left(self._breaks, pos) + 1


def _find_body_end(text: str, start: int, closer: str) -> tuple[int, int | None]:
    """Return (end index of the closing delimiter or -1, restart position).

    ``restart`` is set when an unbalanced entry is abandoned at a line-leading
    ``@``; otherwise None.
    """
    depth = 0
    i = start
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\\":
            i += 2
            continue
        if ch == "{":
            depth += 1
        elif ch == "}":
            if depth == 0 and closer == "}":
                return i, None
            depth -= 1
            if depth < 0:
                nxt = _LINE_AT.search(text, i)
                return -1, (nxt.start() + 1 if nxt else None)
        elif ch == ")" and closer == ")" and depth == 0:
            return i, None
        elif ch == "\n" and _LINE_AT.match(text, i):
            return -1, i + 1
        i += 1
    return -1, None


class _FieldReader:
    def __init__(self, body: str, macros: dict[str, str]) -> None:
        self.body = body
        self.pos = 0
        self.macros = macros

    def skip(self, chars: str = " \t\r\n") -> None:
        while self.pos < len(self.body) and self.body[self.pos] in chars:
            self.pos += 1

    def peek(self) -> str:
        return self.body[self.pos] if self.pos < len(self.body) else ""

    def braced(self) -> str:
        depth = 0
        start = self.pos + 1
        i = self.pos
        while i < len(self.body):
            ch = self.body[i]
            if ch == "\\":
                i += 2
                continue
            if ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    self.pos = i + 1
                    return self.body[start:i]
            i += 1
        raise ValueError("unterminated braced value")

    def quoted(self) -> str:
        depth = 0
        i = self.pos + 1
        while i < len(self.body):
            ch = self.body[i]
            if ch == "\\":
                i += 2
                continue
            if ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
            elif ch == '"' and depth == 0:
                value = self.body[self.pos + 1 : i]
                self.pos = i + 1
                return value
            i += 1
        raise ValueError("unterminated quoted value")

    def value(self) -> str:
        parts = []
        while True:
            self.skip()
            ch = self.peek()
            if ch == "{":
                parts.append(self.braced())
            elif ch == '"':
                parts.append(self.quoted())
            else:
                m = _NAME.match(self.body, self.pos)
                if not m:
                    raise ValueError("missing field value")
                self.pos = m.end()
                word = m.group(1)
                parts.append(self.macros.get(word.lower(), word))
            self.skip()
            if self.peek() == "#":
                self.pos += 1
                continue
            return "".join(parts)

    def fields(self) -> list[tuple[str, str]]:
        out = []
        while True:
            self.skip(" \t\r\n,")
            if self.pos >= len(self.body):
                return out
            m = _NAME.match(self.body, self.pos)
            if not m:
                raise ValueError(f"unexpected character {self.peek()!r}")
            self.pos = m.end()
            if self.peek() != "=":
                raise ValueError(f"field {m.group(1)!r} lacks '='")
            self.pos += 1
            out.append((m.group(1).lower(), self.value()))
            self.skip()
            if self.pos < len(self.body) and self.peek() != ",":
                raise ValueError(f"expected ',' after field {m.group(1)!r}")


def _clean_value(raw: str) -> str:
    return _WS.sub(" ", decode_latex(raw)).strip()


def parse_bibtex(text: str, source_file: str = "<string>") -> ParseResult:
    result = ParseResult()
    text = text.lstrip("\ufeff")
    if not text.strip():
        return result
    lines = _Lines(text)
    macros = dict(_MONTHS)
    pos = 0
    while True:
        at = text.find("@", pos)
        if at < 0:
            break
        m = _ENTRY_START.match(text, at)
        if not m:
            pos = at + 1
            continue
        kind = m.group(1).lower()
        closer = "}" if m.group(2) == "{" else ")"
        end, restart = _find_body_end(text, m.end(), closer)
        start_line = lines.at(at)
        if end < 0:
            result.warn(
                source_file,
                start_line,
                "UnbalancedBraces",
                f"entry @{m.group(1)} never closes; skipped",
            )
            if restart is None:
                break
            pos = restart
            continue
        pos = end + 1
        body = text[m.end() : end]
        if kind in ("comment", "preamble"):
            continue
        if kind == "string":
            try:
                for name, value in _FieldReader(body, macros).fields():
                    macros[name] = value
            except ValueError as exc:
                result.warn(source_file, start_line, "MalformedString", str(exc))
            continue

        key, comma, rest = body.partition(",")
        if not comma:
            # no key: the whole body is fields, e.g. "@misc{title={x}}"
            key, rest = "", body
        key = key.strip()
        if "=" in key:
            key, rest = "", body
        try:
            raw_fields = _FieldReader(rest, macros).fields()
        except ValueError as exc:
            result.warn(source_file, start_line, "MalformedField", f"{key or '?'}: {exc}")
            continue
        fields = tuple((name, _clean_value(value)) for name, value in raw_fields)
        result.entries.append(
            RawEntry(
                Format.BIBTEX,
                fields,
                source_file,
                (start_line, lines.at(end)),
                key=key or None,
            )
        )
    return result
