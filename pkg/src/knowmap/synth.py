"""Deterministic synthetic corpora with exact aggregate author counts.

The generator reproduces, exactly, the document count, the number of
single-authored documents, the total of author appearances, and the
distinct-author counts on single- and multi-authored documents. Everything
else (titles, abstracts, keywords, years, venues) is drawn from a seeded
``random.Random`` so the same spec always yields the same records.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from knowmap.ingest.records import BibRecord, NormalizedAuthor, Origin
from knowmap.ingest.normalize import make_record_id
from knowmap.ingest.text import match_key

SURNAMES = (
    "Wang Li Zhang Liu Chen Yang Huang Zhao Wu Zhou Xu Sun Ma Zhu Hu Guo He Lin Gao Luo "
    "Smith Johnson Garcia Müller Rossi Silva Kim Park Nguyen Tanaka Kumar Singh Cohen Novak "
    "Ivanova Dubois López Santos Ahmed Okafor"
).split()

VOCABULARY = (
    "coronavirus patients outbreak novel ncov infection humans epidemiology disease covid "
    "china cases transmission pneumonia respiratory syndrome clinical characteristics wuhan "
    "virus severe acute public health mortality treatment diagnosis chest imaging ct "
    "children pregnancy vaccine antiviral therapy protein receptor genome sequence spike "
    "incubation period quarantine travel risk model epidemic pandemic hospital intensive "
    "care symptoms fever cough lung infection-control surveillance"
).split()

KEYWORDS = (
    "covid-19",
    "sars-cov-2",
    "2019-ncov",
    "coronavirus",
    "pneumonia",
    "epidemiology",
    "public health",
    "china",
    "outbreak",
    "transmission",
    "mathematical model",
    "infection control",
    "computed tomography",
    "vaccine",
    "children",
)

JOURNALS = (
    "Journal of Medical Virology",
    "Lancet",
    "Radiology",
    "BMJ",
    "Journal of Clinical Medicine",
    "Travel Medicine and Infectious Disease",
    "Euro Surveillance",
    "Intensive Care Medicine",
    "The Journal of Infection",
    "Chinese Journal of Tuberculosis and Respiratory Diseases",
)


class InfeasibleSpecError(ValueError):
    pass


@dataclass
class SynthSpec:
    documents: int
    single_authored: int
    author_appearances: int
    authors: int
    authors_multi: int | None = None
    # year -> document count; must sum to documents when given
    years: dict[int, int] | None = None
    # venue -> document count; remaining documents cycle through JOURNALS
    sources: dict[str, int] | None = None
    vocabulary: list[str] = field(default_factory=lambda: list(VOCABULARY))
    keywords: list[str] = field(default_factory=lambda: list(KEYWORDS))
    abstract_length: int = 40
    title_length: int = 6
    seed: int = 0
    origin: Origin = Origin.OTHER

    @classmethod
    def from_dict(cls, data: dict) -> "SynthSpec":
        data = dict(data)
        if data.get("years") is not None:
            data["years"] = {int(k): int(v) for k, v in data["years"].items()}
        if "origin" in data:
            data["origin"] = Origin.parse(data["origin"])
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise InfeasibleSpecError(f"unknown synth fields {sorted(unknown)}")
        return cls(**data)


def plan_authorship(spec: SynthSpec) -> list[list[int]]:
    """Author-id lists per document meeting the requested counts exactly.

    Ids below ``authors_single`` write only single-authored papers; the rest
    are assigned round-robin to multi-authored papers, which keeps every
    multi-author list duplicate-free as long as no paper needs more authors
    than exist.
    """
    d, s, a = spec.documents, spec.single_authored, spec.author_appearances
    if d < 1:
        raise InfeasibleSpecError("documents must be >= 1")
    if not 0 <= s <= d:
        raise InfeasibleSpecError("single_authored must lie in [0, documents]")
    if a < d:
        raise InfeasibleSpecError(
            f"author_appearances ({a}) < documents ({d}): every document needs an author"
        )
    multi_docs, multi_apps = d - s, a - s
    if multi_docs == 0:
        if multi_apps:
            raise InfeasibleSpecError("appearances exceed documents with no multi-authored papers")
        authors_multi = 0
    elif spec.authors_multi is not None:
        authors_multi = spec.authors_multi
    else:
        authors_multi = spec.authors - min(s, max(spec.authors - 2, 0))
    authors_single = spec.authors - authors_multi

    if multi_docs and multi_apps < 2 * multi_docs:
        raise InfeasibleSpecError("multi-authored documents need at least 2 appearances each")
    if multi_docs and not (
        math.ceil(multi_apps / multi_docs) <= authors_multi <= multi_apps
    ):
        raise InfeasibleSpecError(
            f"authors_multi={authors_multi} cannot cover {multi_apps} appearances "
            f"on {multi_docs} documents"
        )
    if authors_single < 0 or authors_single > s:
        raise InfeasibleSpecError(
            f"authors_single={authors_single} must lie in [0, single_authored={s}]"
        )
    if s and not authors_single and not authors_multi:
        raise InfeasibleSpecError("single-authored documents need some author")

    plan: list[list[int]] = []
    for k in range(s):
        if authors_single:
            plan.append([k % authors_single])
        else:
            plan.append([authors_single + k % authors_multi])
    if multi_docs:
        base, extra = divmod(multi_apps, multi_docs)
        slot = 0
        for k in range(multi_docs):
            size = base + (1 if k < extra else 0)
            plan.append([authors_single + (slot + t) % authors_multi for t in range(size)])
            slot += size
    return plan


def author_name(index: int) -> NormalizedAuthor:
    surname = SURNAMES[index % len(SURNAMES)]
    n = index // len(SURNAMES)
    letters = ""
    while True:
        letters = chr(ord("A") + n % 26) + letters
        n = n // 26 - 1
        if n < 0:
            break
    return NormalizedAuthor(surname, letters)


def _years(spec: SynthSpec, rng: random.Random) -> list[int]:
    if spec.years is not None:
        if sum(spec.years.values()) != spec.documents:
            raise InfeasibleSpecError("year counts must sum to documents")
        years = [y for y, c in sorted(spec.years.items()) for _ in range(c)]
        rng.shuffle(years)
        return years
    return [rng.choice((2016, 2017, 2018, 2019, 2020, 2020, 2020)) for _ in range(spec.documents)]


def _sources(spec: SynthSpec, rng: random.Random) -> list[str]:
    fixed = [name for name, c in (spec.sources or {}).items() for _ in range(c)]
    if len(fixed) > spec.documents:
        raise InfeasibleSpecError("source counts exceed documents")
    rest = [JOURNALS[k % len(JOURNALS)] for k in range(spec.documents - len(fixed))]
    out = fixed + rest
    rng.shuffle(out)
    return out


def generate(spec: SynthSpec) -> list[BibRecord]:
    plan = plan_authorship(spec)
    rng = random.Random(spec.seed)
    rng.shuffle(plan)
    years = _years(spec, rng)
    venues = _sources(spec, rng)
    weights = [1.0 / (rank + 1) for rank in range(len(spec.vocabulary))]

    titles_seen: set[str] = set()
    records = []
    for k, author_ids in enumerate(plan):
        while True:
            words = rng.sample(spec.vocabulary, min(spec.title_length, len(spec.vocabulary)))
            title = " ".join(words).capitalize()
            if match_key(title) not in titles_seen:
                titles_seen.add(match_key(title))
                break
        abstract = " ".join(rng.choices(spec.vocabulary, weights, k=spec.abstract_length))
        keywords = tuple(rng.sample(spec.keywords, min(rng.randint(3, 5), len(spec.keywords))))
        authors = tuple(author_name(i) for i in author_ids)
        doi = f"10.5555/knowmap.synth.{spec.seed}.{k:06d}"
        records.append(
            BibRecord(
                record_id=make_record_id(doi, title, years[k], authors, venues[k]),
                title=title,
                doi=doi,
                abstract=abstract.capitalize() + ".",
                year=years[k],
                source_title=venues[k],
                authors=authors,
                author_keywords=keywords,
                origin=spec.origin,
            )
        )
    return records
