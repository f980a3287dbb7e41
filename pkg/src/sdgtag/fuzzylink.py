"""Link ontology terms to Fields of Study by Levenshtein similarity.

An ontology term and a FOS name are linked when their similarity ratio
1 - d/max(|a|,|b|) strictly exceeds the threshold (default 0.85). The
linker ships a length-band blocking filter that skips pairs whose length
difference alone already caps the ratio below the threshold; it cannot
change the result, only the work done.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import CatalogError, ParseError, UndefinedRatioError
from .ontology import ALL_SDGS, Ontology, validate_sdg
from .textprep import normalize_term


def levenshtein_distance(a: str, b: str) -> int:
    """Minimum number of single-character edits transforming a into b.

    Counts insertions, deletions and substitutions over Unicode code
    points. Symmetric; 0 iff the strings are equal; at most the length of
    the longer string. Classic dynamic program kept to two rows, iterating
    over the shorter string in the inner loop.
    """
    if a == b:
        return 0
    if len(a) > len(b):
        a, b = b, a
    if not a:
        return len(b)
    previous = list(range(len(a) + 1))
    for i, char_b in enumerate(b, start=1):
        current = [i]
        append = current.append
        diagonal = previous[0]
        for j, char_a in enumerate(a, start=1):
            above = previous[j]
            cost = diagonal if char_a == char_b else diagonal + 1
            if above < cost:
                cost = above + 1
            if current[j - 1] < cost:
                cost = current[j - 1] + 1
            append(cost)
            diagonal = above
        previous = current
    return previous[-1]


def similarity_ratio(a: str, b: str) -> float:
    """Levenshtein similarity ratio 1 - d/max(|a|,|b|), in [0, 1].

    Equals 1 iff the strings are equal; symmetric. Undefined (raises) when
    both strings are empty.
    """
    longest = max(len(a), len(b))
    if longest == 0:
        raise UndefinedRatioError("similarity ratio is undefined for two empty strings")
    return 1.0 - levenshtein_distance(a, b) / longest


@dataclass(frozen=True)
class FieldOfStudy:
    fos_id: str
    name: str
    parent_id: str | None = None


class FosCatalog:
    """All known Fields of Study, with a normalized-name lookup index."""

    def __init__(self, entries: Iterable[FieldOfStudy]):
        self.entries: list[FieldOfStudy] = list(entries)
        by_id: dict[str, FieldOfStudy] = {}
        for entry in self.entries:
            if entry.fos_id in by_id:
                raise CatalogError(f"duplicate fos_id {entry.fos_id!r}")
            by_id[entry.fos_id] = entry
        for entry in self.entries:
            if entry.parent_id is not None and entry.parent_id not in by_id:
                raise CatalogError(
                    f"fos {entry.fos_id!r} references unknown parent {entry.parent_id!r}"
                )
        self.by_id = by_id
        self.by_name: dict[str, list[str]] = {}
        for entry in self.entries:
            self.by_name.setdefault(entry.name, []).append(entry.fos_id)
        for ids in self.by_name.values():
            ids.sort()

    def __len__(self) -> int:
        return len(self.entries)


def load_fos_catalog(path: str | Path) -> FosCatalog:
    """Load a catalog CSV with header ``fos_id,name,parent_id``.

    Names are normalized on load; parent_id may be empty.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read FOS catalog {path}: {exc}") from exc
    reader = csv.reader(text.splitlines())
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError(f"{path}: empty catalog, expected header 'fos_id,name,parent_id'")
    if [h.strip().lower() for h in header] != ["fos_id", "name", "parent_id"]:
        raise ParseError(
            f"{path}: malformed header {header!r}, expected 'fos_id,name,parent_id'"
        )
    entries = []
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            raise ParseError(f"{path}:{row_no}: expected 3 columns, got {len(row)}")
        fos_id, name, parent = (cell.strip() for cell in row)
        if not fos_id:
            raise ParseError(f"{path}:{row_no}: empty fos_id")
        entries.append(
            FieldOfStudy(
                fos_id=fos_id,
                name=normalize_term(name),
                parent_id=parent or None,
            )
        )
    return FosCatalog(entries)


@dataclass(frozen=True)
class FosLink:
    """One term->FOS link: the term's SDG, the matched FOS and the ratio."""

    term: str
    sdg: int
    fos_id: str
    ratio: float


def link_ontology_to_fos(
    ontology: Ontology,
    catalog: FosCatalog,
    threshold: float = 0.85,
    use_blocking: bool = True,
) -> list[FosLink]:
    """Build the link table: every (term, sdg, fos) with ratio > threshold.

    The comparison is strict, so a pair at exactly the threshold is
    excluded and threshold 1.0 yields an empty table. With
    ``use_blocking`` the candidate set is pre-filtered by name length:
    since d >= abs(|a|-|b|), a pair can only exceed the threshold when
    abs(|a|-|b|)/max(|a|,|b|) <= 1 - threshold, i.e. for a term of length
    L only names with ceil(L*t) <= length <= floor(L/t) qualify. The
    filter never changes the result.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")

    term_to_sdgs: dict[str, list[int]] = {}
    for item in ontology.items:
        term_to_sdgs.setdefault(item.term, []).append(item.sdg)

    names = sorted(catalog.by_name)
    names_by_length: dict[int, list[str]] = {}
    for name in names:
        names_by_length.setdefault(len(name), []).append(name)

    links: list[FosLink] = []
    for term in term_to_sdgs:
        if use_blocking:
            # Band widened by a hair so float rounding can only ever admit
            # extra candidates, never drop a qualifying one.
            length = len(term)
            low = math.ceil(length * threshold - 1e-9)
            high = math.floor(length / threshold + 1e-9)
            candidates: Iterable[str] = (
                name
                for name_length in range(low, high + 1)
                for name in names_by_length.get(name_length, ())
            )
        else:
            candidates = names
        for name in candidates:
            ratio = 1.0 if name == term else similarity_ratio(term, name)
            if ratio > threshold:
                for sdg in term_to_sdgs[term]:
                    for fos_id in catalog.by_name[name]:
                        links.append(FosLink(term, sdg, fos_id, ratio))
    links.sort(key=lambda link: (link.term, link.sdg, link.fos_id))
    return links


def build_sdg_fos_map(links: Iterable[FosLink]) -> dict[int, set[str]]:
    """Group the link table into SDG -> set of linked fos_ids, all 17 keys."""
    mapping: dict[int, set[str]] = {sdg: set() for sdg in ALL_SDGS}
    for link in links:
        mapping[link.sdg].add(link.fos_id)
    return mapping


def write_link_table(links: Iterable[FosLink], path: str | Path) -> None:
    """Write the link table CSV: term,sdg,fos_id,ratio with 4-decimal ratios."""
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["term", "sdg", "fos_id", "ratio"])
        for link in links:
            writer.writerow([link.term, link.sdg, link.fos_id, f"{link.ratio:.4f}"])


def load_link_table(path: str | Path) -> list[FosLink]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read link table {path}: {exc}") from exc
    reader = csv.reader(text.splitlines())
    header = next(reader, None)
    if header is None or [h.strip().lower() for h in header] != ["term", "sdg", "fos_id", "ratio"]:
        raise ParseError(f"{path}: malformed link table header {header!r}")
    return [
        FosLink(term=row[0], sdg=validate_sdg(row[1]), fos_id=row[2], ratio=float(row[3]))
        for row in reader
        if row
    ]


def write_sdg_fos_map(mapping: dict[int, set[str]], path: str | Path) -> None:
    payload = {str(sdg): sorted(mapping.get(sdg, set())) for sdg in ALL_SDGS}
    Path(path).write_text(
        json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )


def load_sdg_fos_map(path: str | Path) -> dict[int, set[str]]:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot load SDG->FOS map from {path}: {exc}") from exc
    mapping = {sdg: set() for sdg in ALL_SDGS}
    for key, ids in data.items():
        mapping[validate_sdg(key)] = set(ids)
    return mapping
