import itertools
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from sdgtag.errors import CatalogError, ParseError, UndefinedRatioError
from sdgtag.fuzzylink import (
    FieldOfStudy,
    FosCatalog,
    FosLink,
    build_sdg_fos_map,
    levenshtein_distance,
    link_ontology_to_fos,
    load_fos_catalog,
    load_link_table,
    similarity_ratio,
    write_link_table,
)
from sdgtag.ontology import SourceDataset, merge_sources


@lru_cache(maxsize=None)
def recursive_distance(a: str, b: str) -> int:
    """Independent oracle: plain recursion over insert/delete/substitute."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    substitute = recursive_distance(a[1:], b[1:]) + (0 if a[0] == b[0] else 1)
    delete = recursive_distance(a[1:], b) + 1
    insert = recursive_distance(a, b[1:]) + 1
    return min(substitute, delete, insert)


class TestDistance:
    def test_kitten_sitting(self):
        assert levenshtein_distance("kitten", "sitting") == 3
        assert recursive_distance("kitten", "sitting") == 3

    def test_identical(self):
        assert levenshtein_distance("water", "water") == 0

    def test_pure_insertion(self):
        assert levenshtein_distance("", "abc") == 3
        assert levenshtein_distance("abc", "") == 3

    def test_exhaustive_against_oracle_short_strings(self):
        strings = [""]
        for n in range(1, 5):
            strings += ["".join(p) for p in itertools.product("abc", repeat=n)]
        for a in strings:
            for b in strings:
                assert levenshtein_distance(a, b) == recursive_distance(a, b)


words = st.text(alphabet="abcde", max_size=10)


@given(words, words)
def test_distance_symmetric(a, b):
    assert levenshtein_distance(a, b) == levenshtein_distance(b, a)


@given(words, words, words)
def test_distance_triangle_inequality(a, b, c):
    assert levenshtein_distance(a, c) <= (
        levenshtein_distance(a, b) + levenshtein_distance(b, c)
    )


@given(words, words)
def test_distance_zero_iff_equal(a, b):
    assert (levenshtein_distance(a, b) == 0) == (a == b)


class TestRatio:
    def test_identity(self):
        assert similarity_ratio("sustainable", "sustainable") == 1.0

    def test_color_colour(self):
        assert similarity_ratio("color", "colour") == pytest.approx(1 - 1 / 6)

    def test_oil_soil(self):
        assert similarity_ratio("oil", "soil") == 0.75

    def test_both_empty_undefined(self):
        with pytest.raises(UndefinedRatioError):
            similarity_ratio("", "")

    def test_one_empty(self):
        assert similarity_ratio("", "abc") == 0.0

    @given(words, words)
    def test_one_iff_equal(self, a, b):
        if a or b:
            assert (similarity_ratio(a, b) == 1.0) == (a == b)


def make_ontology(pairs):
    return merge_sources([SourceDataset("T", pairs)])


def make_catalog(names):
    return FosCatalog(
        [FieldOfStudy(fos_id=f"f{i}", name=name) for i, name in enumerate(names)]
    )


class TestLinking:
    def test_exact_match_linked_at_ratio_one(self):
        ontology = make_ontology([("climate change", 13)])
        catalog = make_catalog(["climate change"])
        links = link_ontology_to_fos(ontology, catalog)
        assert links == [FosLink("climate change", 13, "f0", 1.0)]

    def test_sub_threshold_pair_not_linked(self):
        ontology = make_ontology([("oil", 7)])
        catalog = make_catalog(["soil"])
        assert link_ontology_to_fos(ontology, catalog) == []

    def test_threshold_one_strict_gives_empty_table(self):
        ontology = make_ontology([("climate change", 13)])
        catalog = make_catalog(["climate change"])
        assert link_ontology_to_fos(ontology, catalog, threshold=1.0) == []

    def test_exact_boundary_excluded(self):
        # distance 3 over max length 20 -> ratio exactly 0.85, strict > drops it
        term = "climate change model"
        name = "climate change bades"
        assert len(term) == len(name) == 20
        assert recursive_distance(term, name) == 3
        assert similarity_ratio(term, name) == pytest.approx(0.85)
        ontology = make_ontology([(term, 13)])
        catalog = make_catalog([name])
        assert link_ontology_to_fos(ontology, catalog, threshold=0.85) == []

    def test_multiple_fos_sharing_a_name_all_linked(self):
        ontology = make_ontology([("poverty", 1)])
        catalog = FosCatalog(
            [
                FieldOfStudy(fos_id="fb", name="poverty"),
                FieldOfStudy(fos_id="fa", name="poverty"),
            ]
        )
        links = link_ontology_to_fos(ontology, catalog)
        assert [link.fos_id for link in links] == ["fa", "fb"]

    def test_blocking_equals_naive(self):
        pairs = [
            ("solar energy", 7),
            ("solar enemy", 7),
            ("food security", 2),
            ("food securty", 2),
            ("oil", 14),
            ("wind", 7),
        ]
        names = ["solar energy", "food security", "soil", "wind", "wind power"]
        ontology = make_ontology(pairs)
        catalog = make_catalog(names)
        for threshold in (0.5, 0.75, 0.85, 0.9, 1.0):
            blocked = link_ontology_to_fos(ontology, catalog, threshold, use_blocking=True)
            naive = link_ontology_to_fos(ontology, catalog, threshold, use_blocking=False)
            assert blocked == naive

    def test_raising_threshold_never_adds_links(self):
        ontology = make_ontology([("solar energy", 7), ("food securty", 2), ("oil", 14)])
        catalog = make_catalog(["solar energy", "food security", "soil"])
        low = link_ontology_to_fos(ontology, catalog, threshold=0.80)
        high = link_ontology_to_fos(ontology, catalog, threshold=0.92)
        assert set(high).issubset(set(low))

    def test_perfect_match_world_all_ratio_one(self):
        names = ["alpha one", "beta two", "gamma three"]
        ontology = make_ontology([(name, i + 1) for i, name in enumerate(names)])
        catalog = make_catalog(names)
        links = link_ontology_to_fos(ontology, catalog, threshold=0.99)
        assert len(links) == 3
        assert all(link.ratio == 1.0 for link in links)

    def test_empty_inputs(self):
        assert link_ontology_to_fos(make_ontology([]), make_catalog(["x"])) == []
        assert link_ontology_to_fos(make_ontology([("x", 1)]), make_catalog([])) == []

    def test_invalid_threshold(self):
        with pytest.raises(ValueError):
            link_ontology_to_fos(make_ontology([]), make_catalog([]), threshold=0.0)


class TestSdgFosMap:
    def test_direct_grouping(self):
        links = [FosLink("t1", 7, "fA", 1.0), FosLink("t2", 7, "fB", 0.9)]
        mapping = build_sdg_fos_map(links)
        assert mapping[7] == {"fA", "fB"}
        assert all(mapping[s] == set() for s in range(1, 18) if s != 7)

    def test_fos_may_serve_many_sdgs(self):
        links = [FosLink("t1", 7, "fA", 1.0), FosLink("t3", 13, "fA", 1.0)]
        mapping = build_sdg_fos_map(links)
        assert "fA" in mapping[7] and "fA" in mapping[13]

    def test_empty_links(self):
        mapping = build_sdg_fos_map([])
        assert set(mapping) == set(range(1, 18))
        assert all(v == set() for v in mapping.values())


class TestCatalog:
    def test_load(self, tmp_path):
        path = tmp_path / "catalog.csv"
        path.write_text(
            "fos_id,name,parent_id\nf1,Climate Change,\nf2,Climate Adaptation,f1\n",
            encoding="utf-8",
        )
        catalog = load_fos_catalog(path)
        assert len(catalog) == 2
        assert catalog.by_id["f2"].parent_id == "f1"
        assert catalog.by_name["climate change"] == ["f1"]

    def test_duplicate_id_rejected(self):
        with pytest.raises(CatalogError):
            FosCatalog([FieldOfStudy("f1", "a"), FieldOfStudy("f1", "b")])

    def test_unknown_parent_rejected(self):
        with pytest.raises(CatalogError):
            FosCatalog([FieldOfStudy("f1", "a", parent_id="nope")])

    def test_bad_header(self, tmp_path):
        path = tmp_path / "catalog.csv"
        path.write_text("id,label\nf1,x\n", encoding="utf-8")
        with pytest.raises(ParseError):
            load_fos_catalog(path)


def test_link_table_round_trip(tmp_path):
    links = [
        FosLink("food securty", 2, "f1", 1 - 1 / 13),
        FosLink("solar energy", 7, "f2", 1.0),
    ]
    path = tmp_path / "links.csv"
    write_link_table(links, path)
    text = path.read_text(encoding="utf-8")
    assert "0.9231" in text  # four decimal places
    loaded = load_link_table(path)
    assert [(l.term, l.sdg, l.fos_id) for l in loaded] == [
        (l.term, l.sdg, l.fos_id) for l in links
    ]
    assert loaded[0].ratio == pytest.approx(links[0].ratio, abs=1e-4)


@settings(max_examples=25)
@given(
    st.lists(
        st.tuples(st.text("abcd ", min_size=1, max_size=8), st.integers(1, 17)),
        max_size=10,
    ),
    st.lists(st.text("abcd ", min_size=1, max_size=8), max_size=10),
    st.sampled_from([0.5, 0.7, 0.85, 0.95]),
)
def test_blocking_equals_naive_property(pairs, names, threshold):
    clean_names = []
    for name in names:
        if name.strip(" "):
            clean_names.append(name)
    ontology = make_ontology(pairs)
    catalog = make_catalog(list(dict.fromkeys(clean_names)))
    blocked = link_ontology_to_fos(ontology, catalog, threshold, use_blocking=True)
    naive = link_ontology_to_fos(ontology, catalog, threshold, use_blocking=False)
    assert blocked == naive
