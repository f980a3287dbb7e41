"""Text normalization and tokenization shared by every pipeline stage.

Ontology terms, FOS names, FOS descriptions and user input all pass through
the same folding so that strings humans consider equal compare equal:
Unicode NFKC, case folding, edge-punctuation stripping and whitespace
collapse. Stopword removal happens only in :func:`tokenize`, never in
:func:`normalize_term` (multi-word key terms must keep their function words).
"""

from __future__ import annotations

import hashlib
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

from .errors import EmptyTermError

_FOLD_ALGORITHM = "nfkc-casefold-edgestrip-v1"


def _fold(text: str) -> str:
    # NFKC before and after casefold: casefolding an NFKC string can emit
    # combining sequences that need one more composition pass to stabilize.
    folded = unicodedata.normalize("NFKC", text).casefold()
    return unicodedata.normalize("NFKC", folded)


def _strip_edges(token: str) -> str:
    start = 0
    end = len(token)
    while start < end and not token[start].isalnum():
        start += 1
    while end > start and not token[end - 1].isalnum():
        end -= 1
    return token[start:end]


def normalize_term(raw: str) -> str:
    """Normalize a key term: fold case, strip edge punctuation, collapse spaces.

    Internal punctuation (hyphens in "post-oil") is preserved; only token
    edges are stripped. Raises EmptyTermError when nothing survives, e.g.
    for punctuation-only input.
    """
    tokens = [t for t in (_strip_edges(tok) for tok in _fold(raw).split()) if t]
    if not tokens:
        raise EmptyTermError(f"term normalizes to nothing: {raw!r}")
    return " ".join(tokens)


def tokenize(text: str, stopwords: Iterable[str] | None = None) -> list[str]:
    """Split text into normalized tokens, dropping stopwords.

    ``stopwords=None`` uses the default list shipped with the package; pass
    an empty set to keep every token. Empty input yields an empty list.
    """
    stop = default_stopwords() if stopwords is None else frozenset(stopwords)
    return [
        t
        for t in (_strip_edges(tok) for tok in _fold(text).split())
        if t and t not in stop
    ]


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword file: one token per line, UTF-8, ``#`` comments allowed."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        token = _strip_edges(_fold(line))
        if token:
            words.add(token)
    return frozenset(words)


_DEFAULT_STOPWORDS: frozenset[str] | None = None


def default_stopwords() -> frozenset[str]:
    """Stopword list shipped with the package, loaded once."""
    global _DEFAULT_STOPWORDS
    if _DEFAULT_STOPWORDS is None:
        text = resources.files("sdgtag").joinpath("data/stopwords.txt").read_text("utf-8")
        words = set()
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                token = _strip_edges(_fold(line))
                if token:
                    words.add(token)
        _DEFAULT_STOPWORDS = frozenset(words)
    return _DEFAULT_STOPWORDS


@dataclass(frozen=True)
class TokenizerConfig:
    """Tokenizer settings that must match between index build and query time."""

    stopwords: frozenset[str] = field(default_factory=frozenset)

    @classmethod
    def default(cls) -> "TokenizerConfig":
        return cls(stopwords=default_stopwords())

    def tokenize(self, text: str) -> list[str]:
        return tokenize(text, self.stopwords)

    def config_hash(self) -> str:
        """Stable digest of the folding algorithm plus the stopword list."""
        digest = hashlib.sha256()
        digest.update(_FOLD_ALGORITHM.encode("utf-8"))
        for word in sorted(self.stopwords):
            digest.update(b"\x00")
            digest.update(word.encode("utf-8"))
        return digest.hexdigest()
