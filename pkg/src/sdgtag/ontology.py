"""Ingest SDG keyword source datasets and merge them into one ontology.

A source dataset is a flat list of (term, sdg) pairs from one prior
classification effort. Merging normalizes every term, collapses duplicates
on the (normalized term, sdg) key and records which sources contributed
each surviving item.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable

from .errors import DuplicateSourceError, EmptyTermError, ParseError
from .textprep import normalize_term

SDG_MIN = 1
SDG_MAX = 17
ALL_SDGS = tuple(range(SDG_MIN, SDG_MAX + 1))


def validate_sdg(value) -> int:
    """Coerce to an SDG number in 1..17 or raise ValueError."""
    number = int(value)
    if not SDG_MIN <= number <= SDG_MAX:
        raise ValueError(f"SDG number out of range 1..17: {value!r}")
    return number


@dataclass
class SourceDataset:
    """Raw (term, sdg) pairs from one origin, before any normalization."""

    source_id: str
    items: list[tuple[str, int]]
    metadata: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class OntologyItem:
    """One normalized key term linked to one SDG, with source provenance."""

    term: str
    sdg: int
    provenance: frozenset[str]


@dataclass
class Ontology:
    """Merged, deduplicated term->SDG ontology with provenance tracking."""

    items: list[OntologyItem]
    created_at: datetime
    source_registry: list[dict]
    warnings: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.items)


@dataclass
class StatsReport:
    total_items: int
    per_sdg: dict[int, int]
    per_source: dict[str, int]
    multi_provenance_items: int

    def to_dict(self) -> dict:
        return {
            "total_items": self.total_items,
            "per_sdg": {str(k): self.per_sdg[k] for k in sorted(self.per_sdg)},
            "per_source": {k: self.per_source[k] for k in sorted(self.per_source)},
            "multi_provenance_items": self.multi_provenance_items,
        }


def parse_source_dataset(
    path: str | Path,
    format: str | None = None,
    source_id: str | None = None,
    metadata: dict | None = None,
) -> SourceDataset:
    """Parse a CSV (header ``term,sdg``) or JSON source file into raw pairs.

    Rows with an out-of-range SDG or an empty term are rejected with a
    warning instead of failing the whole file. Raises ParseError for an
    unreadable file, a malformed header, or when more than half of the rows
    are rejected (which signals a wrong-format file rather than dirty data).
    """
    path = Path(path)
    if format is None:
        format = path.suffix.lstrip(".").lower() or "csv"
    if format not in ("csv", "json"):
        raise ParseError(f"unsupported source format {format!r} for {path}")
    if source_id is None:
        source_id = path.stem
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read source file {path}: {exc}") from exc

    items: list[tuple[str, int]] = []
    warnings: list[str] = []
    rejected = 0

    def consider(row_no: int, term, sdg) -> None:
        nonlocal rejected
        if not isinstance(term, str) or not term.strip():
            warnings.append(f"{path.name}:{row_no}: empty term, row rejected")
            rejected += 1
            return
        try:
            number = validate_sdg(sdg)
        except (TypeError, ValueError):
            warnings.append(
                f"{path.name}:{row_no}: SDG {sdg!r} not in 1..17, row rejected"
            )
            rejected += 1
            return
        items.append((term, number))

    if format == "csv":
        reader = csv.reader(text.splitlines())
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty CSV, expected header 'term,sdg'")
        if [h.strip().lower() for h in header] != ["term", "sdg"]:
            raise ParseError(f"{path}: malformed header {header!r}, expected 'term,sdg'")
        for row_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 2:
                warnings.append(f"{path.name}:{row_no}: expected 2 columns, row rejected")
                rejected += 1
                continue
            consider(row_no, row[0], row[1])
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON: {exc}") from exc
        if not isinstance(data, list):
            raise ParseError(f"{path}: expected a JSON array of {{term, sdg}} objects")
        for row_no, record in enumerate(data, start=1):
            if not isinstance(record, dict):
                warnings.append(f"{path.name}:item {row_no}: not an object, rejected")
                rejected += 1
                continue
            consider(row_no, record.get("term"), record.get("sdg"))

    total = len(items) + rejected
    if total > 0 and rejected * 2 > total:
        raise ParseError(
            f"{path}: {rejected}/{total} rows rejected; "
            "file does not look like a term,sdg dataset"
        )
    return SourceDataset(
        source_id=source_id,
        items=items,
        metadata=metadata or {},
        warnings=warnings,
    )


def merge_sources(sources: Iterable[SourceDataset]) -> Ontology:
    """Merge source datasets into one deduplicated, provenance-tracked ontology.

    Terms are normalized first; items sharing a (normalized term, sdg) key
    collapse into one entry whose provenance is the union of contributing
    source ids. Terms that normalize to nothing are dropped with a warning.
    The result is independent of source order.
    """
    sources = list(sources)
    seen_ids = set()
    for source in sources:
        if not source.source_id:
            raise DuplicateSourceError("source_id must be nonempty")
        if source.source_id in seen_ids:
            raise DuplicateSourceError(f"duplicate source_id {source.source_id!r}")
        seen_ids.add(source.source_id)

    merged: dict[tuple[str, int], set[str]] = {}
    warnings: list[str] = []
    for source in sources:
        for raw_term, sdg in source.items:
            try:
                term = normalize_term(raw_term)
            except EmptyTermError:
                warnings.append(
                    f"{source.source_id}: term {raw_term!r} normalizes to nothing, dropped"
                )
                continue
            merged.setdefault((term, sdg), set()).add(source.source_id)

    items = [
        OntologyItem(term=term, sdg=sdg, provenance=frozenset(provenance))
        for (term, sdg), provenance in merged.items()
    ]
    items.sort(key=lambda item: (item.sdg, item.term))
    registry = [
        {"source_id": s.source_id, **{k: v for k, v in sorted(s.metadata.items())}}
        for s in sorted(sources, key=lambda s: s.source_id)
    ]
    return Ontology(
        items=items,
        created_at=datetime.now(timezone.utc),
        source_registry=registry,
        warnings=warnings,
    )


def ontology_stats(ontology: Ontology) -> StatsReport:
    """Count items per SDG and per source; sums reconcile with the total."""
    per_sdg = {sdg: 0 for sdg in ALL_SDGS}
    per_source: dict[str, int] = {
        entry["source_id"]: 0 for entry in ontology.source_registry
    }
    multi = 0
    for item in ontology.items:
        per_sdg[item.sdg] += 1
        for source_id in item.provenance:
            per_source[source_id] = per_source.get(source_id, 0) + 1
        if len(item.provenance) > 1:
            multi += 1
    return StatsReport(
        total_items=len(ontology.items),
        per_sdg=per_sdg,
        per_source=per_source,
        multi_provenance_items=multi,
    )


def ontology_to_dict(ontology: Ontology) -> dict:
    return {
        "source_registry": ontology.source_registry,
        "items": [
            {"term": i.term, "sdg": i.sdg, "provenance": sorted(i.provenance)}
            for i in ontology.items
        ],
    }


def write_ontology(ontology: Ontology, path: str | Path) -> None:
    """Write the merged ontology as deterministic JSON (no timestamps)."""
    payload = json.dumps(ontology_to_dict(ontology), ensure_ascii=False, indent=2)
    Path(path).write_text(payload + "\n", encoding="utf-8")


def load_ontology(path: str | Path) -> Ontology:
    """Load an ontology previously written by :func:`write_ontology`."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot load ontology from {path}: {exc}") from exc
    try:
        items = [
            OntologyItem(
                term=entry["term"],
                sdg=validate_sdg(entry["sdg"]),
                provenance=frozenset(entry["provenance"]),
            )
            for entry in data["items"]
        ]
        registry = list(data["source_registry"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: malformed ontology JSON: {exc}") from exc
    items.sort(key=lambda item: (item.sdg, item.term))
    return Ontology(
        items=items,
        created_at=datetime.now(timezone.utc),
        source_registry=registry,
    )
