"""Cross-database deduplication: exact DOI first, then exact (title, year)."""

from __future__ import annotations

import dataclasses
from typing import Callable, Hashable, Iterable, Sequence

from knowmap.ingest.records import (
    ORIGIN_PRIORITY,
    BibRecord,
    Corpus,
    MergeEvent,
    MergeReason,
    Origin,
)
from knowmap.ingest.text import match_key


def survivor_rank(record: BibRecord) -> tuple:
    """Sort key; the smallest key survives a duplicate group."""
    return (-record.filled_fields(), ORIGIN_PRIORITY[record.origin], record.record_id)


def title_year_key(record: BibRecord) -> tuple[str, int | None]:
    return match_key(record.title), record.year


def _absorb(kept: BibRecord, dropped: Sequence[BibRecord]) -> BibRecord:
    """Fill the survivor's empty abstract/keywords from the best-ranked duplicate."""
    changes = {}
    if not kept.abstract:
        donor = next((r.abstract for r in dropped if r.abstract), None)
        if donor:
            changes["abstract"] = donor
    if not kept.author_keywords:
        donor = next((r.author_keywords for r in dropped if r.author_keywords), None)
        if donor:
            changes["author_keywords"] = donor
    return dataclasses.replace(kept, **changes) if changes else kept


def _dedup_pass(
    records: list[BibRecord],
    key: Callable[[BibRecord], Hashable | None],
    reason: MergeReason,
    log: list[MergeEvent],
) -> list[BibRecord]:
    groups: dict[Hashable, list[BibRecord]] = {}
    order: list[Hashable] = []
    for i, record in enumerate(records):
        k = key(record)
        if k is None:
            k = ("__unique__", i)
        if k not in groups:
            groups[k] = []
            order.append(k)
        groups[k].append(record)
    out = []
    for k in order:
        members = sorted(groups[k], key=survivor_rank)
        kept, dropped = members[0], members[1:]
        for r in dropped:
            log.append(MergeEvent(kept.record_id, r.record_id, reason))
        out.append(_absorb(kept, dropped))
    return out


def merge_corpora(record_lists: Iterable[tuple[Origin | str, Iterable[BibRecord]]]) -> Corpus:
    """Merge per-database record lists into one deduplicated Corpus.

    ``origin_counts`` tallies the inputs by their declared origin before any
    record is dropped, so ``sum(origin_counts) == len(records) + len(merge_log)``.
    """
    pooled: list[BibRecord] = []
    counts: dict[Origin, int] = {}
    for origin, records in record_lists:
        origin = Origin.parse(origin)
        records = list(records)
        counts[origin] = counts.get(origin, 0) + len(records)
        pooled.extend(records)

    log: list[MergeEvent] = []
    pooled = _dedup_pass(pooled, lambda r: r.doi, MergeReason.DOI_MATCH, log)
    pooled = _dedup_pass(pooled, title_year_key, MergeReason.TITLE_YEAR_MATCH, log)
    return Corpus(tuple(pooled), tuple(log), counts)
