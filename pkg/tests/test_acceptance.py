"""Acceptance criteria, each run at its stated tolerance and time budget.

Every test logs a single PASS/FAIL line; the lines are repeated in the
"acceptance criteria" section at the end of the pytest run.
"""

from __future__ import annotations

import itertools
import json
import random
import string
import time
import unicodedata

import numpy as np
import pytest

from acceptance_log import record
from knowmap import cli
from knowmap.indicators import summarize
from knowmap.ingest import (
    CANONICAL_COLUMNS,
    BibRecord,
    Corpus,
    NormalizedAuthor,
    Origin,
    normalize,
    parse_tabular,
    write_corpus_csv,
)
from knowmap.netlab import betweenness, classical_mds, detect_communities, WeightedGraph
from knowmap.synth import SynthSpec, generate
from knowmap.termspace import OccurrenceTable, TermLayer

from oracles import (
    best_modularity,
    brute_betweenness,
    graph_of,
    pairwise_modularity,
    random_connected_graph,
    random_graph,
    rec,
)

TABLE2 = [(2003, 2), (2004, 1), (2006, 1), (2011, 1), (2019, 1), (2020, 522)]
TABLE4 = [
    ("patients", 632), ("outbreak", 80), ("novel", 196), ("ncov", 601), ("infection", 248),
    ("humans", 16), ("epidemiology", 8), ("disease outbreaks", 8), ("disease", 72),
    ("covid", 613), ("coronavirus infections", 13), ("coronavirus", 677), ("coronavirus", 8),
    ("china", 435), ("cases", 445),
]


def test_criterion_1_table1_arithmetic():
    start = time.perf_counter()
    spec = SynthSpec(documents=547, authors=2198, author_appearances=3315,
                     single_authored=121, authors_multi=2128)
    s = summarize(Corpus.of(generate(spec)))
    elapsed = time.perf_counter() - start
    checks = {
        "documents_per_author": abs(s.documents_per_author - 0.249) <= 0.0005,
        "authors_per_document": abs(s.authors_per_document - 4.02) <= 0.005,
        "coauthors_per_document": abs(s.coauthors_per_document - 6.06) <= 0.005,
        "collaboration_index": abs(round(s.collaboration_index, 2) - 5.0) <= 0.01,
        "runtime": elapsed < 1.0,
    }
    ok = all(checks.values())
    record(1, ok, f"D/A={s.documents_per_author:.5f} A/D={s.authors_per_document:.5f} "
                  f"CoA/D={s.coauthors_per_document:.5f} CI={s.collaboration_index:.5f} "
                  f"in {elapsed:.3f}s")
    assert ok, checks


def test_criterion_2_table2_annual_csv(tmp_path):
    years = [y for y, n in TABLE2 for _ in range(n)]
    random.Random(0).shuffle(years)
    out = tmp_path / "out"
    out.mkdir()
    records = [rec(f"r{k:03d}", f"Paper {k}", year=y) for k, y in enumerate(years)]
    (out / "corpus.csv").write_text(write_corpus_csv(records), encoding="utf-8")
    start = time.perf_counter()
    code = cli.main(["report", "--out", str(out)])
    elapsed = time.perf_counter() - start
    lines = (out / "annual.csv").read_bytes().decode("utf-8").splitlines()
    expected = ["Year,Articles"] + [f"{y},{n}" for y, n in TABLE2]
    ok = code == 0 and lines == expected and elapsed < 1.0
    record(2, ok, f"annual.csv {'matches' if lines == expected else 'differs from'} the "
                  f"{len(TABLE2)} reference rows in {elapsed:.3f}s")
    assert ok


def test_criterion_3_table4_total():
    table = OccurrenceTable(TermLayer.ABSTRACT, tuple(TABLE4))
    last = table.to_csv().splitlines()[-1]
    ok = len(table.rows) == 15 and table.total == 4052 and last == "TOTAL,4052"
    record(3, ok, f"15 rows serialize with {last!r}")
    assert ok


def test_criterion_4_betweenness_oracle():
    start = time.perf_counter()
    mismatches = []
    for trial in range(200):
        rng = random.Random(trial)
        n = rng.randint(2, 7)
        edges = random_connected_graph(rng, n, rng.uniform(0.1, 0.7))
        g = graph_of(n, edges)
        oracle = brute_betweenness(n, edges)
        exact = betweenness(g, exact=True).scores
        floats = betweenness(g).scores
        got = [exact[f"v{i}"] for i in range(n)]
        close = all(abs(floats[f"v{i}"] - float(oracle[i])) <= 1e-9 for i in range(n))
        integral = all(floats[f"v{i}"] == oracle[i] for i in range(n) if oracle[i].denominator == 1)
        if got != oracle or not close or not integral:
            mismatches.append(trial)
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 10
    record(4, ok, f"{200 - len(mismatches)}/200 graphs match the all-paths enumerator "
                  f"exactly in {elapsed:.2f}s")
    assert ok, mismatches


def _criterion5_graph(trial: int):
    rng = random.Random(trial)
    n = rng.randint(3, 8)
    p = rng.uniform(0.2, 0.7)
    while True:
        edges = random_graph(rng, n, p)
        if edges:
            return n, edges


def test_criterion_5_modularity_oracle():
    misses = []
    for trial in range(50):
        n, edges = _criterion5_graph(trial)
        g = graph_of(n, edges)
        q = detect_communities(g, seed=0).modularity
        weighted = [(i, j, 1) for i, j in edges]
        if n <= 7:
            best = best_modularity(n, weighted)
            if q < best - 1e-9:
                misses.append((trial, n, round(q, 6), round(best, 6)))
        else:
            one = pairwise_modularity(n, weighted, [0] * n)
            singletons = pairwise_modularity(n, weighted, list(range(n)))
            if not (q > one and q > singletons):
                misses.append((trial, n, round(q, 6), "trivial"))
    triangles = WeightedGraph.from_edges(
        "abcdef", [("a", "b"), ("b", "c"), ("a", "c"), ("d", "e"), ("e", "f"), ("d", "f")]
    )
    triangle_ok = all(
        (p := detect_communities(triangles, seed)).n_clusters == 2 and abs(p.modularity - 0.5) <= 1e-12
        for seed in range(20)
    )
    ok = not misses and triangle_ok
    record(5, ok, f"{50 - len(misses)}/50 graphs reach the reference bound; "
                  f"two triangles {'split' if triangle_ok else 'NOT split'} at Q=0.5"
                  + (f"; misses (trial, n, Q, best): {misses}" if misses else ""))
    assert ok, misses


def test_criterion_6_mds_exactness():
    worst = 0.0
    rng = np.random.default_rng(2024)
    for _ in range(100):
        n = int(rng.integers(2, 11))
        pts = rng.uniform(-10, 10, size=(n, 2))
        if rng.random() < 0.2:
            pts[:, 1] = 0.5 * pts[:, 0]  # collinear, rank 1
        d = np.linalg.norm(pts[:, None] - pts[None], axis=-1)
        coords = classical_mds(d).coords
        got = np.linalg.norm(coords[:, None] - coords[None], axis=-1)
        worst = max(worst, float(np.max(np.abs(got - d))))
    tri = classical_mds(np.ones((3, 3)) - np.eye(3))
    sides = [np.linalg.norm(tri.coords[i] - tri.coords[j]) for i, j in itertools.combinations(range(3), 2)]
    tri_ok = all(abs(s - 1) <= 1e-9 for s in sides) and tri.stress <= 1e-9
    ok = worst <= 1e-6 and tri_ok
    record(6, ok, f"max distance error {worst:.2e} over 100 planar matrices; "
                  f"equilateral stress {tri.stress:.1e}")
    assert ok


ALPHABET = string.ascii_letters + string.digits + " ,;:.'\"()[]-/&%éüñøçÅßłő漢字"
SURNAME_CHARS = string.ascii_letters + "éüñøçÅßłő'-"


def _text(rng: random.Random, lo: int, hi: int) -> str:
    raw = "".join(rng.choice(ALPHABET) for _ in range(rng.randint(lo, hi)))
    return " ".join(unicodedata.normalize("NFKC", raw).split())


def _surname(rng: random.Random) -> str:
    core = rng.choice(string.ascii_uppercase) + "".join(
        rng.choice(SURNAME_CHARS) for _ in range(rng.randint(1, 9))
    )
    particle = rng.choice(["", "", "", "van der ", "de ", "Mac ", "al-"])
    return unicodedata.normalize("NFKC", particle + core).strip("-'")


def random_record(rng: random.Random, k: int) -> BibRecord:
    authors: list[NormalizedAuthor] = []
    keys = set()
    for _ in range(rng.randint(0, 6)):
        initials = "".join(rng.choice(string.ascii_uppercase) for _ in range(rng.randint(0, 3)))
        author = NormalizedAuthor(_surname(rng), initials)
        if author.key not in keys:
            keys.add(author.key)
            authors.append(author)
    keywords: list[str] = []
    for _ in range(rng.randint(0, 5)):
        kw = _text(rng, 1, 20).replace(";", "").lower().strip()
        kw = " ".join(kw.split())
        if kw and kw not in keywords:
            keywords.append(kw)
    title = ""
    while not title:
        title = _text(rng, 1, 80)
    doi = None
    if rng.random() < 0.7:
        doi = f"10.{rng.randint(1000, 99999)}/" + "".join(
            rng.choice(string.ascii_lowercase + string.digits + "-._()/") for _ in range(rng.randint(1, 20))
        ) + rng.choice(string.ascii_lowercase)
    return BibRecord(
        record_id=f"kr-{k:05d}-{rng.getrandbits(32):08x}",
        title=title,
        doi=doi,
        abstract=_text(rng, 1, 300) or None if rng.random() < 0.8 else None,
        year=rng.choice([None, rng.randint(1800, 2100)]),
        source_title=_text(rng, 0, 40),
        authors=tuple(authors),
        author_keywords=tuple(keywords),
        origin=rng.choice(list(Origin)),
    )


def test_criterion_7_parser_round_trip():
    rng = random.Random(7)
    originals = [random_record(rng, k) for k in range(500)]
    parsed = parse_tabular(write_corpus_csv(originals), {c: c for c in CANONICAL_COLUMNS})
    restored = [normalize(entry) for entry in parsed.entries]
    equal = sum(1 for a, b in zip(originals, restored) if a == b)
    ok = len(restored) == 500 and equal == 500 and not parsed.diagnostics
    record(7, ok, f"{equal}/500 random records equal field-for-field after CSV -> parse_tabular")
    assert ok, [(a, b) for a, b in zip(originals, restored) if a != b][:3]


def _pipeline(fixture, out) -> bytes:
    assert cli.main(["ingest", "--input", str(fixture), "--out", str(out)]) == 0
    assert cli.main(["report", "--out", str(out)]) == 0
    assert cli.main(["map", "--out", str(out), "--layer", "abstract"]) == 0
    return (out / "manifest.json").read_bytes()


def test_criterion_8_determinism(tmp_path):
    fixture = tmp_path / "fixture"
    spec = SynthSpec(documents=120, single_authored=20, author_appearances=400, authors=300, seed=8)
    records = generate(spec)
    fixture.mkdir()
    (fixture / "corpus_a.csv").write_text(write_corpus_csv(records[:70]), encoding="utf-8")
    (fixture / "corpus_b.csv").write_text(write_corpus_csv(records[50:]), encoding="utf-8")
    first = _pipeline(fixture, tmp_path / "run1")
    second = _pipeline(fixture, tmp_path / "run2")
    files = {k: v for stage in json.loads(first)["stages"].values() for k, v in stage["files"].items()}
    ok = first == second
    record(8, ok, f"manifests {'byte-identical' if ok else 'DIFFER'} across two runs "
                  f"({len(files)} hashed files)")
    assert ok


def test_criterion_9_desk_scale(tmp_path):
    spec = SynthSpec(documents=547, authors=2198, author_appearances=3315,
                     single_authored=121, authors_multi=2128, origin=Origin.MEDLINE)
    synth = tmp_path / "synth"
    assert cli.main(["synth", "--spec", _spec_file(tmp_path, spec), "--format", "medline",
                     "--out", str(synth)]) == 0
    start = time.perf_counter()
    _pipeline(synth / "synthetic.nbib", tmp_path / "out")
    elapsed = time.perf_counter() - start
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    ok = elapsed < 5.0 and summary["documents"] == 547
    record(9, ok, f"547-record ingest -> report -> map in {elapsed:.2f}s")
    assert ok


def _spec_file(tmp_path, spec: SynthSpec) -> str:
    path = tmp_path / "spec.json"
    data = {k: v for k, v in spec.__dict__.items() if k in
            ("documents", "authors", "author_appearances", "single_authored", "authors_multi", "seed")}
    data["origin"] = spec.origin.value
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
