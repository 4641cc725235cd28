"""Serialize BibRecords back to BibTeX, RIS and MEDLINE text."""

from __future__ import annotations

from knowmap.ingest.records import BibRecord, NormalizedAuthor


def _dotted(author: NormalizedAuthor) -> str:
    if not author.initials:
        return f"{author.surname},"
    return f"{author.surname}, " + " ".join(f"{ch}." for ch in author.initials)


def _bib_escape(text: str) -> str:
    out = text.replace("\\", "")
    for ch in "{}&%$#_":
        out = out.replace(ch, "\\" + ch)
    return out


def to_bibtex(records: list[BibRecord]) -> str:
    chunks = []
    for r in records:
        fields = [("title", r.title)]
        if r.authors:
            fields.append(("author", " and ".join(_dotted(a) for a in r.authors)))
        if r.year is not None:
            fields.append(("year", str(r.year)))
        if r.source_title:
            fields.append(("journal", r.source_title))
        if r.doi:
            fields.append(("doi", r.doi))
        if r.author_keywords:
            fields.append(("keywords", "; ".join(r.author_keywords)))
        if r.abstract:
            fields.append(("abstract", r.abstract))
        body = ",\n".join(f"  {name} = {{{_bib_escape(value)}}}" for name, value in fields)
        chunks.append(f"@article{{{r.record_id},\n{body}\n}}\n")
    return "\n".join(chunks)


def to_ris(records: list[BibRecord]) -> str:
    lines = []
    for r in records:
        lines.append("TY  - JOUR")
        lines.append(f"ID  - {r.record_id}")
        lines.append(f"TI  - {r.title}")
        lines.extend(f"AU  - {_dotted(a)}" for a in r.authors)
        if r.year is not None:
            lines.append(f"PY  - {r.year}")
        if r.source_title:
            lines.append(f"JO  - {r.source_title}")
        if r.doi:
            lines.append(f"DO  - {r.doi}")
        lines.extend(f"KW  - {k}" for k in r.author_keywords)
        if r.abstract:
            lines.append(f"AB  - {r.abstract}")
        lines.append("ER  - ")
        lines.append("")
    return "\n".join(lines)


def _wrap(tag: str, value: str, width: int = 82) -> list[str]:
    """MEDLINE-style wrapping: continuation lines indented by six spaces."""
    words = value.split(" ")
    lines, current = [], ""
    for word in words:
        if current and len(current) + 1 + len(word) > width - 6:
            lines.append(current)
            current = word
        else:
            current = f"{current} {word}" if current else word
    lines.append(current)
    head = f"{tag:<4}- {lines[0]}"
    return [head] + [f"      {line}" for line in lines[1:]]


def to_medline(records: list[BibRecord], first_pmid: int = 90000001) -> str:
    blocks = []
    for n, r in enumerate(records):
        lines = [f"PMID- {first_pmid + n}"]
        if r.year is not None:
            lines.append(f"DP  - {r.year}")
        lines += _wrap("TI", r.title)
        if r.abstract:
            lines += _wrap("AB", r.abstract)
        for a in r.authors:
            lines.append(f"FAU - {_dotted(a)}")
            lines.append(f"AU  - {a.display}")
        if r.source_title:
            lines += _wrap("JT", r.source_title)
        lines.extend(f"OT  - {k}" for k in r.author_keywords)
        if r.doi:
            lines.append(f"AID - {r.doi} [doi]")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
