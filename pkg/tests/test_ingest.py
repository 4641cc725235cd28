from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knowmap.ingest import (
    CANONICAL_COLUMNS,
    Diagnostic,
    Format,
    MergeReason,
    NoTitleError,
    NormalizedAuthor,
    Origin,
    RawEntry,
    merge_corpora,
    normalize,
    parse_author,
    parse_bibtex,
    parse_medline,
    parse_ris,
    parse_tabular,
    read_corpus_csv,
    write_corpus_csv,
)
from knowmap.ingest.text import decode_latex, match_key, normalize_doi
from knowmap.ingest.writers import to_bibtex, to_medline, to_ris

from oracles import rec

# ---------------------------------------------------------------- BibTeX


def test_bibtex_single_entry():
    result = parse_bibtex("@article{x, title={A}, year={2020}}")
    assert len(result) == 1
    entry = result.entries[0]
    assert entry.fields == (("title", "A"), ("year", "2020"))
    assert entry.key == "x"
    assert entry.format_tag is Format.BIBTEX


def test_bibtex_empty_input():
    result = parse_bibtex("")
    assert result.entries == [] and result.diagnostics == []


def test_bibtex_unbalanced_entry_is_skipped_and_reported():
    text = (
        "@article{good, title={Fine}, year={2019}}\n"
        "@article{bad, title={Broken, year={2020}\n"
        "\n"
    )
    result = parse_bibtex(text, "refs.bib")
    assert [e.key for e in result.entries] == ["good"]
    assert [d.code for d in result.diagnostics] == ["UnbalancedBraces"]
    assert result.diagnostics[0].line == 2
    assert str(result.diagnostics[0]).startswith("WARN refs.bib:2 UnbalancedBraces")


def test_bibtex_recovers_at_next_entry_after_unbalanced():
    text = "@article{bad, title={Broken}\n@article{ok, title={Kept}}\n"
    result = parse_bibtex(text)
    assert [e.get("title") for e in result.entries] == ["Kept"]
    assert len(result.diagnostics) == 1


def test_bibtex_values_quotes_macros_and_accents():
    text = r"""
@string{jmv = "Journal of Medical Virology"}
@comment{ignored}
@Article{k1,
  Title = "The {COVID} outbreak in Wuhan",
  author = {M{\"u}ller, J{\"o}rg and Garc{\'\i}a, Ana},
  journal = jmv,
  month = mar,
  note = "Vol. " # {12},
  year = 2020,
}
"""
    result = parse_bibtex(text)
    assert result.diagnostics == []
    entry = result.entries[0]
    assert entry.get("title") == "The COVID outbreak in Wuhan"
    assert entry.get("author") == "Müller, Jörg and García, Ana"
    assert entry.get("journal") == "Journal of Medical Virology"
    assert entry.get("month") == "3"
    assert entry.get("note") == "Vol. 12"
    assert entry.get("year") == "2020"


def test_bibtex_line_span():
    text = "% header\n@book{b,\n  title={T},\n}\n"
    (entry,) = parse_bibtex(text).entries
    assert entry.line_span == (2, 4)


@pytest.mark.parametrize(
    "latex, plain",
    [
        (r"{\'e}", "é"),
        (r"\`a", "à"),
        (r"{\c c}", "ç"),
        (r"\~n", "ñ"),
        (r"{\ss}", "ß"),
        (r"\o", "ø"),
        (r"50\% \& more", "50% & more"),
        (r"{\v{s}}", "š"),
    ],
)
def test_decode_latex(latex, plain):
    assert decode_latex(latex) == plain


# ---------------------------------------------------------------- RIS


def test_ris_single_record():
    result = parse_ris("TY  - JOUR\nAU  - Doe, J.\nER  -")
    assert len(result) == 1
    assert result.entries[0].fields == (("TY", "JOUR"), ("AU", "Doe, J."))
    assert result.diagnostics == []


def test_ris_two_records_and_author_order():
    text = (
        "TY  - JOUR\nTI  - One\nAU  - A, A.\nAU  - B, B.\nAU  - C, C.\nER  - \n"
        "TY  - JOUR\nTI  - Two\nER  - \n"
    )
    result = parse_ris(text)
    assert len(result) == 2
    assert result.entries[0].get_all("AU") == ["A, A.", "B, B.", "C, C."]


def test_ris_trailing_record_without_end_is_dropped():
    result = parse_ris("TY  - JOUR\nTI  - Done\nER  - \nTY  - JOUR\nTI  - Partial\n", "x.ris")
    assert len(result) == 1
    assert [d.code for d in result.diagnostics] == ["MissingEndRecord"]
    assert result.diagnostics[0].line == 4


def test_ris_continuation_line():
    result = parse_ris("TY  - JOUR\nAB  - first part\nsecond part\nER  - \n")
    assert result.entries[0].get("AB") == "first part second part"


# ---------------------------------------------------------------- MEDLINE


def test_medline_continuation_folding():
    result = parse_medline("PMID- 1\nTI  - A title\n      continued\n")
    assert result.entries[0].fields == (("PMID", "1"), ("TI", "A title continued"))
    assert result.entries[0].key == "1"


def test_medline_two_blocks():
    result = parse_medline("PMID- 1\nTI  - A\n\nPMID- 2\nTI  - B\n")
    assert [e.key for e in result.entries] == ["1", "2"]


def test_medline_block_without_pmid():
    result = parse_medline("TI  - Orphan\nAU  - Doe J\n", "p.nbib")
    assert result.entries == []
    assert [d.code for d in result.diagnostics] == ["NoPmid"]


# ---------------------------------------------------------------- tabular


def test_tabular_identity_map():
    result = parse_tabular("Title,Year\nA,2020\n", {"Title": "title", "Year": "year"})
    assert result.entries[0].fields == (("title", "A"), ("year", "2020"))


def test_tabular_splits_multivalued_cells():
    result = parse_tabular('Title,Keywords\nT,"a; b"\n', {"Title": "title", "Keywords": "keywords"})
    assert result.entries[0].get_all("keywords") == ["a", "b"]


def test_tabular_ragged_row():
    result = parse_tabular("Title,Year\nA,2020\nB\nC,2021\n", {"Title": "title", "Year": "year"}, "s.csv")
    assert [e.get("title") for e in result.entries] == ["A", "C"]
    assert [(d.code, d.line) for d in result.diagnostics] == [("RaggedRow", 3)]


def test_tabular_missing_column():
    result = parse_tabular("Title\nA\n", {"Title": "title", "Year": "year"})
    assert result.entries == []
    assert [d.code for d in result.diagnostics] == ["MissingColumn"]
    assert "Year" in result.diagnostics[0].message


def test_tabular_quoted_newline_and_bom():
    text = '\ufeffTitle,Abstract\n"T","line one\nline two"\n'
    result = parse_tabular(text, {"Title": "title", "Abstract": "abstract"})
    assert result.entries[0].get("abstract") == "line one\nline two"
    assert result.diagnostics == []


# ---------------------------------------------------------------- parser totality

PARSER_FUNCS = [parse_bibtex, parse_ris, parse_medline, lambda t: parse_tabular(t, None)]
syntax = st.text(
    alphabet=st.sampled_from(list("@{}\"=,#;\n -ERTYAUPMIDab\\'`^~0123456789é")), max_size=200
)


@settings(max_examples=300, deadline=None)
@given(text=st.one_of(st.text(max_size=200), syntax), which=st.integers(0, 3))
def test_parsers_are_total(text, which):
    result = PARSER_FUNCS[which](text)
    for entry in result.entries:
        assert entry.line_span[0] <= entry.line_span[1]
    assert all(isinstance(d, Diagnostic) for d in result.diagnostics)


# ---------------------------------------------------------------- normalize


def test_doi_prefix_stripped_and_lowercased():
    entry = RawEntry(Format.TABULAR, (("title", "T"), ("doi", "https://doi.org/10.1/AB")))
    assert normalize(entry).doi == "10.1/ab"
    assert normalize_doi("doi:10.1016/J.X.2020.01.001.") == "10.1016/j.x.2020.01.001"
    assert normalize_doi("not a doi") is None


@pytest.mark.parametrize(
    "name, surname, initials",
    [
        ("Wang, Yi", "Wang", "Y"),
        ("Wang Y", "Wang", "Y"),
        ("Wang YZ", "Wang", "YZ"),
        ("Doe, J.", "Doe", "J"),
        ("Jean-Paul Sartre", "Sartre", "JP"),
        ("Ludwig van Beethoven", "van Beethoven", "L"),
        ("García Márquez, Gabriel José", "García Márquez", "GJ"),
        ("Smith, J.R.R.", "Smith", "JRR"),
        ("Plato", "Plato", ""),
    ],
)
def test_parse_author(name, surname, initials):
    author = parse_author(name)
    assert (author.surname, author.initials) == (surname, initials)


def test_author_display_and_key():
    author = parse_author("Wang, Yi")
    assert author == NormalizedAuthor("Wang", "Y")
    assert author.display == "Wang Y"
    assert NormalizedAuthor("Müller", "J").key == NormalizedAuthor("Muller", "J").key == "muller j"


def test_normalize_without_title_raises():
    entry = RawEntry(Format.RIS, (("TY", "JOUR"), ("AU", "Doe, J.")), "a.ris", (3, 5))
    with pytest.raises(NoTitleError) as info:
        normalize(entry)
    assert info.value.diagnostic.code == "NoTitle"
    assert info.value.diagnostic.line == 3


def test_normalize_medline_block():
    text = (
        "PMID- 32004427\nDP  - 2020 Feb\nTI  - Clinical  features of patients\n"
        "AB  - Background text.\nFAU - Huang, Chaolin\nAU  - Huang C\nFAU - Wang, Yeming\n"
        "AU  - Wang Y\nJT  - Lancet (London, England)\nOT  - COVID-19\n"
        "LID - 10.1016/S0140-6736(20)30183-5 [doi]\n"
    )
    record = normalize(parse_medline(text).entries[0], Origin.MEDLINE)
    assert record.title == "Clinical features of patients"
    assert record.year == 2020
    assert [a.display for a in record.authors] == ["Huang C", "Wang Y"]
    assert record.doi == "10.1016/s0140-6736(20)30183-5"
    assert record.author_keywords == ("covid-19",)
    assert record.origin is Origin.MEDLINE


def test_normalize_dedups_authors_and_applies_nfkc():
    entry = RawEntry(
        Format.RIS,
        (("TI", "ﬁrst result"), ("AU", "Doe, John"), ("AU", "Doe, J."), ("KW", "COVID; Virus")),
    )
    record = normalize(entry)
    assert record.title == "first result"
    assert [a.display for a in record.authors] == ["Doe J"]
    assert record.author_keywords == ("covid", "virus")


def test_record_id_is_stable():
    entry = RawEntry(Format.TABULAR, (("title", "T"), ("year", "2020")))
    assert normalize(entry).record_id == normalize(entry).record_id
    assert normalize(entry).record_id.startswith("kr-")


# ---------------------------------------------------------------- merge


def test_merge_on_doi_keeps_abstract():
    a = rec("a", "Paper", doi="10.1/x", abstract="Has abstract", year=2020, origin=Origin.SCOPUS)
    b = rec("b", "Paper (other spelling)", doi="10.1/x", year=2020, origin=Origin.MEDLINE)
    merged = merge_corpora([(Origin.SCOPUS, [a]), (Origin.MEDLINE, [b])])
    assert len(merged) == 1
    assert merged.records[0].abstract == "Has abstract"
    assert [(e.kept_id, e.dropped_id, e.reason) for e in merged.merge_log] == [
        ("a", "b", MergeReason.DOI_MATCH)
    ]


def test_merge_on_title_year():
    a = rec("a", "Novel Coronavirus: a study", year=2020)
    b = rec("b", "novel coronavirus - a study", year=2020)
    merged = merge_corpora([(Origin.OTHER, [a]), (Origin.WEB_OF_SCIENCE, [b])])
    assert len(merged) == 1
    assert merged.merge_log[0].reason is MergeReason.TITLE_YEAR_MATCH


def test_merge_disjoint_across_origins():
    lists = [
        (Origin.MEDLINE, [rec("a", "A", origin=Origin.MEDLINE)]),
        (Origin.WEB_OF_SCIENCE, [rec("b", "B", origin=Origin.WEB_OF_SCIENCE)]),
        (Origin.SCOPUS, [rec("c", "C", origin=Origin.SCOPUS)]),
    ]
    merged = merge_corpora(lists)
    assert len(merged) == 3 and merged.merge_log == ()
    assert dict(merged.origin_counts) == {Origin.MEDLINE: 1, Origin.WEB_OF_SCIENCE: 1, Origin.SCOPUS: 1}


def test_merge_origin_priority_breaks_ties():
    a = rec("a", "Same", doi="10.1/y", origin=Origin.SCOPUS)
    b = rec("b", "Same", doi="10.1/y", origin=Origin.MEDLINE)
    merged = merge_corpora([(Origin.SCOPUS, [a]), (Origin.MEDLINE, [b])])
    assert merged.records[0].record_id == "b"


def test_merge_inherits_keywords():
    a = rec("a", "T", doi="10.1/z", year=2020, source="J", authors=["Doe J"])
    b = rec("b", "T", doi="10.1/z", keywords=["covid"])
    merged = merge_corpora([(Origin.OTHER, [a, b])])
    assert merged.records[0].record_id == "a"
    assert merged.records[0].author_keywords == ("covid",)


def test_merge_empty():
    merged = merge_corpora([])
    assert len(merged) == 0 and merged.merge_log == ()


def _record_pool():
    titles = ["Alpha study", "Beta study", "Gamma study", "Delta study"]
    dois = [None, "10.1/a", "10.1/b"]
    pool = []
    for k, (t, d, y, o) in enumerate(
        itertools.product(titles, dois, [2019, 2020], [Origin.MEDLINE, Origin.SCOPUS])
    ):
        pool.append(rec(f"r{k:03d}", t, doi=d, year=y, origin=o, abstract="x" if k % 3 else None))
    return pool


pool_lists = st.lists(
    st.lists(st.sampled_from(_record_pool()), max_size=6, unique_by=lambda r: r.record_id),
    min_size=1,
    max_size=4,
)


def _invariants_hold(corpus):
    dois = [r.doi for r in corpus.records if r.doi]
    assert len(dois) == len(set(dois))
    keys = [(match_key(r.title), r.year) for r in corpus.records]
    assert len(keys) == len(set(keys))


@settings(max_examples=200, deadline=None)
@given(lists=pool_lists)
def test_merge_invariants(lists):
    inputs = [(Origin.OTHER, rs) for rs in lists]
    merged = merge_corpora(inputs)
    _invariants_hold(merged)
    total = sum(len(rs) for rs in lists)
    assert sum(merged.origin_counts.values()) == total
    assert len(merged.records) == total - len(merged.merge_log)


@settings(max_examples=200, deadline=None)
@given(lists=pool_lists)
def test_merge_is_idempotent(lists):
    merged = merge_corpora([(Origin.OTHER, rs) for rs in lists])
    again = merge_corpora([(Origin.OTHER, merged.records), (Origin.OTHER, merged.records)])
    assert [r.record_id for r in again.records] == [r.record_id for r in merged.records]


@settings(max_examples=200, deadline=None)
@given(lists=pool_lists, data=st.data())
def test_merge_is_order_independent(lists, data):
    perm = data.draw(st.permutations(range(len(lists))))
    first = merge_corpora([(Origin.OTHER, rs) for rs in lists])
    second = merge_corpora([(Origin.OTHER, lists[k]) for k in perm])
    triple = lambda c: sorted((r.title, r.year, r.doi or "") for r in c.records)  # noqa: E731
    assert triple(first) == triple(second)
    assert len(first) == len(second)


# ---------------------------------------------------------------- canonical CSV and writers


def test_canonical_header():
    assert write_corpus_csv([]).splitlines()[0] == ",".join(CANONICAL_COLUMNS)


def test_canonical_round_trip_simple():
    records = [
        rec("kr-1", "A, b and \"c\"", authors=["van der Berg JP", "Plato"], year=2020, doi="10.1/x",
            abstract="Line one.", source="BMJ", keywords=["covid-19", "public health"],
            origin=Origin.SCOPUS),
        rec("kr-2", "Second"),
    ]
    corpus, diagnostics = read_corpus_csv(write_corpus_csv(records))
    assert diagnostics == []
    assert list(corpus.records) == records


def test_writers_reparse_to_same_records():
    records = [
        rec("kr-1", "Outbreak {analysis} 100%", authors=["Müller J", "Li X"], year=2020,
            doi="10.1/abc", abstract="Short abstract.", source="Lancet", keywords=["covid-19"]),
        rec("kr-2", "Second paper", authors=["Smith JR"], year=2019),
    ]

    def core(r):
        return (r.title, r.year, r.doi, r.source_title, [a.display for a in r.authors],
                r.author_keywords, r.abstract)

    for text, parser in (
        (to_bibtex(records), parse_bibtex),
        (to_ris(records), parse_ris),
        (to_medline(records), parse_medline),
    ):
        parsed = parser(text)
        assert parsed.diagnostics == []
        assert [core(normalize(e)) for e in parsed.entries] == [core(r) for r in records]
