"""Shared fixture builders for the test suite.

The "seventeen-goal world" is a synthetic corpus with fully disjoint
vocabularies per SDG: every SDG owns three FOS whose names and document
tokens share no words with any other SDG, and the ontology terms are
exactly the FOS names. A text drawn from one SDG's documents can then
only tag that SDG's FOS.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

import pytest

from sdgtag.fostag import FosDocument, FosIndex, build_fos_index
from sdgtag.fuzzylink import (
    FieldOfStudy,
    FosCatalog,
    build_sdg_fos_map,
    link_ontology_to_fos,
)
from sdgtag.ontology import SourceDataset, merge_sources
from sdgtag.sdgscore import ThresholdConfig
from sdgtag.textprep import TokenizerConfig

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"

# One distinctive word per SDG; pairwise Levenshtein distance >= 3, so no
# cross-SDG name ever clears a 0.85 similarity ratio.
SDG_WORDS = [
    "alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf",
    "hotel", "india", "juliett", "kilo", "lima", "mike", "november",
    "oscar", "papa", "quebec",
]


@dataclass
class SdgWorld:
    docs: list[FosDocument]
    catalog: FosCatalog
    ontology: object
    index: FosIndex
    links: list
    sdg_fos_map: dict[int, set[str]]
    thresholds: ThresholdConfig

    def doc_texts(self, sdg: int) -> list[str]:
        prefix = f"F{sdg:02d}"
        return [d.text for d in self.docs if d.fos_id.startswith(prefix)]


def build_sdg_world(fos_per_sdg: int = 3) -> SdgWorld:
    docs = []
    entries = []
    pairs = []
    for sdg in range(1, 18):
        word = SDG_WORDS[sdg - 1]
        for k in range(1, fos_per_sdg + 1):
            fos_id = f"F{sdg:02d}{k}"
            name = f"{word}ology {word}branch{k}"
            filler = " ".join(f"{word}topic{j}{k}" for j in range(1, 5))
            docs.append(FosDocument(fos_id, f"{name} {filler}"))
            entries.append(FieldOfStudy(fos_id=fos_id, name=name))
            pairs.append((name, sdg))
    catalog = FosCatalog(entries)
    ontology = merge_sources([SourceDataset(source_id="world", items=pairs)])
    index = build_fos_index(docs, tokenizer=TokenizerConfig(frozenset()))
    links = link_ontology_to_fos(ontology, catalog, threshold=0.85)
    sdg_map = build_sdg_fos_map(links)
    return SdgWorld(
        docs=docs,
        catalog=catalog,
        ontology=ontology,
        index=index,
        links=links,
        sdg_fos_map=sdg_map,
        thresholds=ThresholdConfig(),
    )


@pytest.fixture(scope="session")
def sdg_world() -> SdgWorld:
    return build_sdg_world()


def build_random_index(
    n_fos: int = 1000,
    vocab_size: int = 400,
    seed: int = 7,
) -> FosIndex:
    rng = random.Random(seed)
    words = [f"term{i:03d}" for i in range(vocab_size)]
    docs = [
        FosDocument(
            f"R{i:04d}",
            " ".join(rng.choices(words, k=rng.randint(8, 30))),
        )
        for i in range(n_fos)
    ]
    return build_fos_index(docs, tokenizer=TokenizerConfig(frozenset()))


@pytest.fixture(scope="session")
def random_index() -> FosIndex:
    return build_random_index()


SDG13_DOI = "10.1234/world.sdg13"


@pytest.fixture(scope="session")
def world_artifacts(sdg_world, tmp_path_factory) -> Path:
    """The seventeen-goal world written out as pipeline artifact files."""
    import json

    from sdgtag.fostag import write_index
    from sdgtag.fuzzylink import write_link_table, write_sdg_fos_map
    from sdgtag.ontology import write_ontology

    base = tmp_path_factory.mktemp("world_artifacts")
    write_ontology(sdg_world.ontology, base / "ontology.json")
    write_index(sdg_world.index, base / "index.json")
    write_link_table(sdg_world.links, base / "links.csv")
    write_sdg_fos_map(sdg_world.sdg_fos_map, base / "sdg_fos_map.json")
    (base / "thresholds.json").write_text(
        json.dumps({"default": {"moderate": 0.1, "strong": 0.3}}), encoding="utf-8"
    )
    sdg13_text = " ".join(sdg_world.doc_texts(13))
    records = [
        {"doi": SDG13_DOI, "title": "A mike-heavy study", "abstract": sdg13_text},
        {"doi": "10.1234/world.empty", "title": "No abstract", "abstract": ""},
    ]
    (base / "doi_records.jsonl").write_text(
        "\n".join(json.dumps(r) for r in records) + "\n", encoding="utf-8"
    )
    return base
