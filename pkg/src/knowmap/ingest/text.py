"""String normalization helpers used for display values and matching keys."""

from __future__ import annotations

import re
import unicodedata

_WS = re.compile(r"\s+")
_NON_ALNUM = re.compile(r"[^0-9a-z]+")
_DOI_PREFIX = re.compile(
    r"^(?:https?://(?:dx\.)?doi\.org/|doi\.org/|doi:\s*|urn:doi:)", re.IGNORECASE
)
_DOI_BODY = re.compile(r"10\.\d+(?:\.\d+)*/\S+")


def clean(text: str | None) -> str:
    """NFKC, then collapse whitespace runs to single spaces and trim."""
    if not text:
        return ""
    return _WS.sub(" ", unicodedata.normalize("NFKC", text)).strip()


def fold_diacritics(text: str) -> str:
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def match_key(text: str) -> str:
    """Lowercase, diacritic-free, punctuation-free key for equality matching."""
    return _NON_ALNUM.sub(" ", fold_diacritics(clean(text)).lower()).strip()


def normalize_doi(value: str | None) -> str | None:
    if not value:
        return None
    value = clean(value)
    value = _DOI_PREFIX.sub("", value).strip()
    m = _DOI_BODY.search(value)
    if m is None:
        return None
    return m.group(0).rstrip(".,;").lower()


# Combining marks for the LaTeX accent commands.
_ACCENTS = {
    '"': "\u0308",
    "'": "\u0301",
    "`": "\u0300",
    "^": "\u0302",
    "~": "\u0303",
    "=": "\u0304",
    ".": "\u0307",
    "c": "\u0327",
    "v": "\u030c",
    "H": "\u030b",
    "u": "\u0306",
    "r": "\u030a",
    "k": "\u0328",
}
_SPECIAL = {
    "ss": "ß",
    "o": "ø",
    "O": "Ø",
    "aa": "å",
    "AA": "Å",
    "ae": "æ",
    "AE": "Æ",
    "oe": "œ",
    "OE": "Œ",
    "l": "ł",
    "L": "Ł",
    "i": "ı",
    "j": "ȷ",
}
# \"{o}, {\"o}, \"o, \c{c}, \c c
_ACCENT_RE = re.compile(
    r"\\([\"'`^~=.]|[cvHurk](?=[\s{]))\s*(?:\{\s*(\\?[A-Za-z])\s*\}|(\\?[A-Za-z]))"
)
_SPECIAL_RE = re.compile(r"\\(ss|aa|AA|ae|AE|oe|OE|o|O|l|L|i|j)(?![A-Za-z])\s*(?:\{\})?")
_ESCAPED = re.compile(r"\\([&%$#_{}])")
# Escaped characters are parked in the private-use area while braces are stripped.
_PARK = 0xE000


def decode_latex(text: str) -> str:
    """Decode the common LaTeX diacritic and escape sequences, then drop braces."""

    def accent(m: re.Match) -> str:
        base = m.group(2) or m.group(3)
        if base.startswith("\\"):
            # accented \i and \j carry the accent in place of the dot
            base = base[1:] if base[1:] in "ij" else _SPECIAL.get(base[1:], base[1:])
        return unicodedata.normalize("NFC", base + _ACCENTS[m.group(1)])

    text = _ACCENT_RE.sub(accent, text)
    text = _SPECIAL_RE.sub(lambda m: _SPECIAL[m.group(1)], text)
    text = _ESCAPED.sub(lambda m: chr(_PARK + ord(m.group(1))), text)
    text = text.replace("{", "").replace("}", "")
    return "".join(
        chr(ord(ch) - _PARK) if _PARK <= ord(ch) < _PARK + 128 else ch for ch in text
    )
