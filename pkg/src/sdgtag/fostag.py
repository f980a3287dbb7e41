"""TF-IDF index over Fields-of-Study documents and cosine-similarity tagging.

Each FOS gets one document (its name plus whatever representative text is
available). Documents become L2-normalized tf-idf vectors with smoothed
idf ln((1+N)/(1+df)) + 1; queries go through the identical pipeline, so a
query equal to a document scores cosine 1. Tagging walks an inverted
index (term -> postings), which for unit vectors reduces cosine to an
accumulated dot product.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import (
    DuplicateFosError,
    EmptyCorpusError,
    EmptyDocumentError,
    ParseError,
    SnapshotError,
)
from .textprep import TokenizerConfig

SNAPSHOT_FORMAT_VERSION = 1


@dataclass(frozen=True)
class FosDocument:
    fos_id: str
    text: str


@dataclass
class SparseVector:
    """Sparse nonnegative vector: vocabulary index -> weight, plus its norm."""

    entries: dict[int, float]
    norm: float

    @classmethod
    def from_weights(cls, weights: dict[int, float]) -> "SparseVector":
        entries = {i: w for i, w in weights.items() if w != 0.0}
        norm = math.sqrt(sum(w * w for w in entries.values()))
        return cls(entries=entries, norm=norm)

    def normalized(self) -> "SparseVector":
        if self.norm == 0.0:
            return SparseVector(entries={}, norm=0.0)
        entries = {i: w / self.norm for i, w in self.entries.items()}
        # Unit by construction; storing 1.0 keeps cosine == plain dot product.
        return SparseVector(entries=entries, norm=1.0)


@dataclass(frozen=True)
class FosTag:
    fos_id: str
    similarity: float


@dataclass
class FosIndex:
    """Immutable per-FOS tf-idf vectors plus shared vocabulary and idf table."""

    vocabulary: dict[str, int]
    idf: list[float]
    vectors: dict[str, SparseVector]
    tokenizer: TokenizerConfig
    postings: dict[int, list[tuple[str, float]]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.postings:
            self.postings = _build_postings(self.vectors)

    @property
    def build_config(self) -> str:
        return self.tokenizer.config_hash()

    def __len__(self) -> int:
        return len(self.vectors)


def _build_postings(vectors: dict[str, SparseVector]) -> dict[int, list[tuple[str, float]]]:
    postings: dict[int, list[tuple[str, float]]] = {}
    for fos_id in sorted(vectors):
        for index, weight in vectors[fos_id].entries.items():
            postings.setdefault(index, []).append((fos_id, weight))
    return postings


def build_fos_index(
    docs: Iterable[FosDocument],
    tokenizer: TokenizerConfig | None = None,
) -> FosIndex:
    """Build the tf-idf index over FOS documents.

    Vocabulary indices are assigned in lexicographic term order, which makes
    the build independent of document order. idf(t) = ln((1+N)/(1+df(t))) + 1
    with raw tf counts, then each vector is L2-normalized.
    """
    docs = list(docs)
    if not docs:
        raise EmptyCorpusError("cannot build an index over zero documents")
    tokenizer = tokenizer or TokenizerConfig.default()

    token_lists: dict[str, list[str]] = {}
    for doc in docs:
        if doc.fos_id in token_lists:
            raise DuplicateFosError(f"duplicate fos_id {doc.fos_id!r} in corpus")
        tokens = tokenizer.tokenize(doc.text)
        if not tokens:
            raise EmptyDocumentError(
                f"document for {doc.fos_id!r} has no usable tokens"
            )
        token_lists[doc.fos_id] = tokens

    df: dict[str, int] = {}
    for tokens in token_lists.values():
        for term in set(tokens):
            df[term] = df.get(term, 0) + 1

    vocabulary = {term: index for index, term in enumerate(sorted(df))}
    n_docs = len(docs)
    idf = [0.0] * len(vocabulary)
    for term, index in vocabulary.items():
        idf[index] = math.log((1 + n_docs) / (1 + df[term])) + 1.0

    vectors: dict[str, SparseVector] = {}
    for fos_id, tokens in token_lists.items():
        counts: dict[int, int] = {}
        for term in tokens:
            index = vocabulary[term]
            counts[index] = counts.get(index, 0) + 1
        weights = {index: count * idf[index] for index, count in counts.items()}
        vectors[fos_id] = SparseVector.from_weights(weights).normalized()

    return FosIndex(vocabulary=vocabulary, idf=idf, vectors=vectors, tokenizer=tokenizer)


def vectorize_text(text: str, index: FosIndex) -> SparseVector:
    """Vectorize arbitrary text against the index vocabulary.

    Out-of-vocabulary tokens are ignored; all-out-of-vocabulary input yields
    the zero vector rather than an error.
    """
    counts: dict[int, int] = {}
    for term in index.tokenizer.tokenize(text):
        vocab_index = index.vocabulary.get(term)
        if vocab_index is not None:
            counts[vocab_index] = counts.get(vocab_index, 0) + 1
    weights = {i: count * index.idf[i] for i, count in counts.items()}
    return SparseVector.from_weights(weights).normalized()


def cosine_similarity(u: SparseVector, v: SparseVector) -> float:
    """dot(u,v) / (|u|*|v|), defined as 0.0 when either vector is zero."""
    if u.norm == 0.0 or v.norm == 0.0:
        return 0.0
    if len(u.entries) > len(v.entries):
        u, v = v, u
    dot = 0.0
    v_entries = v.entries
    for index in sorted(u.entries):
        weight = v_entries.get(index)
        if weight is not None:
            dot += u.entries[index] * weight
    return min(1.0, dot / (u.norm * v.norm))


def tag_fos(
    text: str,
    index: FosIndex,
    top_k: int = 20,
    min_sim: float = 0.1,
) -> list[FosTag]:
    """Top-k FOS by cosine similarity, filtered to similarity >= min_sim.

    Ties break on fos_id ascending. A query that vectorizes to zero yields
    an empty list. Scores accumulate over the inverted index in vocabulary
    order so they match a direct sorted-index dot product bit for bit.
    """
    if top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    if not 0.0 <= min_sim <= 1.0:
        raise ValueError(f"min_sim must be in [0, 1], got {min_sim}")
    query = vectorize_text(text, index)
    if query.norm == 0.0:
        return []
    scores: dict[str, float] = {}
    for vocab_index in sorted(query.entries):
        query_weight = query.entries[vocab_index]
        for fos_id, weight in index.postings.get(vocab_index, ()):
            scores[fos_id] = scores.get(fos_id, 0.0) + query_weight * weight
    if min_sim <= 0.0:
        for fos_id in index.vectors:
            scores.setdefault(fos_id, 0.0)
    tags = [
        FosTag(fos_id=fos_id, similarity=min(1.0, score))
        for fos_id, score in scores.items()
        if min(1.0, score) >= min_sim
    ]
    tags.sort(key=lambda tag: (-tag.similarity, tag.fos_id))
    return tags[:top_k]


def write_index(index: FosIndex, path: str | Path) -> None:
    """Persist the index as a versioned JSON snapshot."""
    payload = {
        "format_version": SNAPSHOT_FORMAT_VERSION,
        "build_config": index.build_config,
        "stopwords": sorted(index.tokenizer.stopwords),
        "vocabulary": index.vocabulary,
        "idf": index.idf,
        "vectors": {
            fos_id: {
                "indices": sorted(vector.entries),
                "weights": [vector.entries[i] for i in sorted(vector.entries)],
                "norm": vector.norm,
            }
            for fos_id, vector in sorted(index.vectors.items())
        },
    }
    Path(path).write_text(
        json.dumps(payload, ensure_ascii=False) + "\n", encoding="utf-8"
    )


def load_index(path: str | Path, expected: TokenizerConfig | None = None) -> FosIndex:
    """Load a snapshot, verifying the tokenizer config when one is expected.

    Raises SnapshotError if the file is not a snapshot, the format version
    is unknown, or the stored build_config hash differs from ``expected``.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SnapshotError(f"cannot load index snapshot {path}: {exc}") from exc
    if not isinstance(data, dict) or data.get("format_version") != SNAPSHOT_FORMAT_VERSION:
        raise SnapshotError(
            f"{path}: unsupported snapshot format {data.get('format_version')!r}"
        )
    tokenizer = TokenizerConfig(stopwords=frozenset(data["stopwords"]))
    if tokenizer.config_hash() != data["build_config"]:
        raise SnapshotError(f"{path}: snapshot build_config is internally inconsistent")
    if expected is not None and expected.config_hash() != data["build_config"]:
        raise SnapshotError(
            f"{path}: snapshot was built with a different tokenizer config"
        )
    try:
        vectors = {
            fos_id: SparseVector(
                entries=dict(zip(record["indices"], record["weights"])),
                norm=record["norm"],
            )
            for fos_id, record in data["vectors"].items()
        }
        index = FosIndex(
            vocabulary={term: int(i) for term, i in data["vocabulary"].items()},
            idf=[float(x) for x in data["idf"]],
            vectors=vectors,
            tokenizer=tokenizer,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SnapshotError(f"{path}: malformed snapshot: {exc}") from exc
    return index


def load_fos_corpus(path: str | Path) -> list[FosDocument]:
    """Read a FOS corpus: JSON Lines with objects {"fos_id", "text"}."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read FOS corpus {path}: {exc}") from exc
    docs = []
    for line_no, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
            docs.append(FosDocument(fos_id=str(record["fos_id"]), text=str(record["text"])))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ParseError(f"{path}:{line_no}: malformed corpus line: {exc}") from exc
    return docs
