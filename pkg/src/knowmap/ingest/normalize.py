"""Turn format-specific RawEntry tags into BibRecords."""

from __future__ import annotations

import hashlib
import re
from typing import Iterable

from knowmap.ingest.records import (
    BibRecord,
    Diagnostic,
    Format,
    NormalizedAuthor,
    Origin,
    RawEntry,
)
from knowmap.ingest.tabular import split_multi
from knowmap.ingest.text import clean, match_key, normalize_doi


class NoTitleError(ValueError):
    def __init__(self, diagnostic: Diagnostic) -> None:
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


# Record field -> candidate tags in preference order.
_TAGS: dict[Format, dict[str, tuple[str, ...]]] = {
    Format.BIBTEX: {
        "title": ("title",),
        "abstract": ("abstract",),
        "year": ("year", "date"),
        "source_title": ("journal", "journaltitle", "booktitle", "series"),
        "doi": ("doi",),
        "doi_fallback": ("url",),
    },
    Format.RIS: {
        "title": ("TI", "T1", "CT"),
        "abstract": ("AB", "N2"),
        "year": ("PY", "Y1", "DA"),
        "source_title": ("JF", "JO", "T2", "JA", "J2"),
        "doi": ("DO",),
        "doi_fallback": ("UR",),
    },
    Format.MEDLINE: {
        "title": ("TI", "BTI"),
        "abstract": ("AB",),
        "year": ("DP", "DEP"),
        "source_title": ("JT", "TA"),
        "doi": ("LID", "AID"),
        "doi_fallback": (),
    },
    Format.TABULAR: {
        "title": ("title",),
        "abstract": ("abstract",),
        "year": ("year",),
        "source_title": ("source_title", "source", "journal"),
        "doi": ("doi",),
        "doi_fallback": (),
    },
}

_YEAR = re.compile(r"(?<!\d)(\d{4})(?!\d)")
_BIBTEX_AND = re.compile(r"\s+and\s+", re.IGNORECASE)
_INITIAL_SPLIT = re.compile(r"[\s.\-‐]+")
_PARTICLES = frozenset(
    "van von de der den da das del della di du la le dos ten ter bin ibn al el".split()
)


def _first(entry: RawEntry, tags: Iterable[str]) -> str:
    for tag in tags:
        for value in entry.get_all(tag):
            if clean(value):
                return value
    return ""


def parse_year(value: str) -> int | None:
    for m in _YEAR.finditer(value or ""):
        year = int(m.group(1))
        if 1800 <= year <= 2100:
            return year
    return None


def _looks_like_initials(token: str) -> bool:
    letters = re.sub(r"[.\-‐]", "", token)
    return 1 <= len(letters) <= 3 and letters.isalpha() and letters.isupper()


def initials_of(given: str) -> str:
    """First letters of the given names; packed initials ("JM", "J.-P.") are split."""
    out = []
    for token in _INITIAL_SPLIT.split(given):
        letters = "".join(ch for ch in token if ch.isalpha())
        if not letters:
            continue
        if letters.isupper() and len(letters) <= 3:
            out.append(letters)
        else:
            out.append(letters[0].upper())
    return "".join(out)


def parse_author(name: str) -> NormalizedAuthor | None:
    """Parse "Surname, Given", "Surname I" or "Given Surname" into a NormalizedAuthor."""
    name = clean(name)
    if not name.strip(" .,;"):
        return None
    if "," in name:
        surname, _, given = name.partition(",")
    else:
        tokens = name.split()
        if len(tokens) == 1:
            surname, given = tokens[0], ""
        elif _looks_like_initials(tokens[-1]) and not _looks_like_initials(tokens[0]):
            # MEDLINE/WoS "Wang Y", "van Dijk JM"
            surname, given = " ".join(tokens[:-1]), tokens[-1]
        else:
            cut = len(tokens) - 1
            while cut > 1 and tokens[cut - 1].lower() in _PARTICLES:
                cut -= 1
            surname, given = " ".join(tokens[cut:]), " ".join(tokens[:cut])
    surname = surname.strip()
    if not surname:
        return None
    return NormalizedAuthor(surname, initials_of(given))


def _authors(entry: RawEntry) -> list[str]:
    fmt = entry.format_tag
    if fmt is Format.BIBTEX:
        raw = _first(entry, ("author",))
        return _BIBTEX_AND.split(raw) if raw else []
    if fmt is Format.RIS:
        return entry.get_all("AU") or entry.get_all("A1")
    if fmt is Format.MEDLINE:
        return entry.get_all("FAU") or entry.get_all("AU")
    return entry.get_all("authors")


def _keywords(entry: RawEntry) -> list[str]:
    fmt = entry.format_tag
    if fmt is Format.BIBTEX:
        raw = _first(entry, ("keywords", "author_keywords", "keyword"))
        sep = ";" if ";" in raw else ","
        return [k for k in raw.split(sep)]
    if fmt is Format.RIS:
        return [part for value in entry.get_all("KW") for part in split_multi(value)]
    if fmt is Format.MEDLINE:
        return entry.get_all("OT")
    return entry.get_all("author_keywords") + entry.get_all("keywords")


def _doi(entry: RawEntry, tags: dict[str, tuple[str, ...]]) -> str | None:
    if entry.format_tag is Format.MEDLINE:
        for tag in tags["doi"]:
            for value in entry.get_all(tag):
                if "[doi]" in value:
                    return normalize_doi(value.replace("[doi]", ""))
        return None
    doi = normalize_doi(_first(entry, tags["doi"]))
    if doi is None:
        url = _first(entry, tags["doi_fallback"])
        if "doi" in url.lower():
            doi = normalize_doi(url)
    return doi


def _dedup(items: Iterable, key) -> list:
    seen = set()
    out = []
    for item in items:
        k = key(item)
        if k not in seen:
            seen.add(k)
            out.append(item)
    return out


def make_record_id(
    doi: str | None, title: str, year: int | None, authors, source_title: str
) -> str:
    first = authors[0].key if authors else ""
    basis = "|".join([doi or "", match_key(title), str(year or ""), first, match_key(source_title)])
    return "kr-" + hashlib.sha1(basis.encode("utf-8")).hexdigest()[:16]


def normalize(entry: RawEntry, origin: Origin | str | None = None) -> BibRecord:
    """Build a BibRecord; raises NoTitleError when the entry has no usable title.

    An explicit ``origin`` field (canonical CSV) wins over the ``origin`` argument.
    """
    tags = _TAGS[entry.format_tag]
    title = clean(_first(entry, tags["title"]))
    if not title:
        raise NoTitleError(
            Diagnostic(entry.source_file, entry.line_span[0], "NoTitle", "entry has no title; rejected")
        )
    abstract = clean(_first(entry, tags["abstract"])) or None
    year = parse_year(_first(entry, tags["year"]))
    source_title = clean(_first(entry, tags["source_title"]))
    doi = _doi(entry, tags)

    authors = [a for a in map(parse_author, _authors(entry)) if a is not None]
    authors = _dedup(authors, key=lambda a: a.key)
    keywords = [clean(k).lower() for k in _keywords(entry)]
    keywords = _dedup([k for k in keywords if k], key=lambda k: k)

    explicit_origin = entry.get("origin") if entry.format_tag is Format.TABULAR else None
    resolved = Origin.parse(explicit_origin or origin)
    record_id = clean(entry.get("record_id") or "") if entry.format_tag is Format.TABULAR else ""
    if not record_id:
        record_id = make_record_id(doi, title, year, authors, source_title)
    return BibRecord(
        record_id=record_id,
        title=title,
        doi=doi,
        abstract=abstract,
        year=year,
        source_title=source_title,
        authors=tuple(authors),
        author_keywords=tuple(keywords),
        origin=resolved,
    )


def normalize_all(
    entries: Iterable[RawEntry], origin: Origin | str | None = None
) -> tuple[list[BibRecord], list[Diagnostic]]:
    records, diagnostics = [], []
    for entry in entries:
        try:
            records.append(normalize(entry, origin))
        except NoTitleError as exc:
            diagnostics.append(exc.diagnostic)
    return records, diagnostics
