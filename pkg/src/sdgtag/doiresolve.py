"""Resolve DOIs to abstract text through a pluggable metadata client.

Two clients ship: an HTTP client for Crossref-style JSON metadata APIs
(configurable base URL, timeout, polite identification header, optional
inter-request delay) and a fixture client backed by a JSONL file or an
in-memory mapping, so tests and demos never touch the network.
"""

from __future__ import annotations

import html
import json
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import requests

from .errors import (
    InvalidDoiError,
    NoAbstractError,
    NotFoundError,
    ParseError,
    ResolveError,
    TransportError,
)

_DOI_SHAPE = re.compile(r"^10\.\d{4,}/\S+$")
_URL_PREFIXES = (
    "https://doi.org/",
    "http://doi.org/",
    "https://dx.doi.org/",
    "http://dx.doi.org/",
)
_MARKUP = re.compile(r"<[^>]+>")

DEFAULT_BASE_URL = "https://api.crossref.org/works"
DEFAULT_USER_AGENT = "sdgtag/0.1 (mailto:sdgtag@example.org)"


@dataclass(frozen=True)
class Doi:
    """A validated DOI of form ``10.<registrant>/<suffix>``."""

    value: str

    def __str__(self) -> str:
        return self.value


@dataclass
class ResolvedAbstract:
    doi: Doi
    abstract_text: str
    title: str | None = None
    source: str = "unknown"


def validate_doi(raw: str) -> Doi:
    """Normalize and validate a DOI string.

    Trims whitespace, strips a leading resolver URL, lowercases the
    registrant part and checks the ``10.<digits>/<suffix>`` shape.
    """
    value = raw.strip()
    lowered = value.lower()
    for prefix in _URL_PREFIXES:
        if lowered.startswith(prefix):
            value = value[len(prefix):]
            break
    if "/" in value:
        registrant, suffix = value.split("/", 1)
        value = registrant.lower() + "/" + suffix
    if not _DOI_SHAPE.match(value):
        raise InvalidDoiError(
            f"{raw!r} is not a DOI: expected 10.<registrant>/<suffix> "
            "with a registrant of at least four digits"
        )
    return Doi(value)


def strip_markup(text: str) -> str:
    """Drop XML/HTML tags some metadata services wrap abstracts in."""
    return " ".join(html.unescape(_MARKUP.sub(" ", text)).split())


class MetadataClient:
    """Looks up the metadata record behind a DOI."""

    source = "abstract-metadata"

    def lookup(self, doi: Doi) -> ResolvedAbstract:
        raise NotImplementedError


@dataclass
class HttpClientConfig:
    base_url: str = DEFAULT_BASE_URL
    timeout_ms: int = 10000
    user_agent: str = DEFAULT_USER_AGENT
    max_in_flight: int = 4
    inter_request_delay_ms: int = 0


class HttpMetadataClient(MetadataClient):
    """Client for a Crossref-style REST API returning JSON work records.

    Expects ``GET <base_url>/<doi>`` to answer either
    ``{"message": {"title": [...], "abstract": "..."}}`` or the same fields
    at the top level. Abstract markup is stripped to plain text.
    """

    source = "http"

    def __init__(self, config: HttpClientConfig | None = None):
        self.config = config or HttpClientConfig()
        self._session = requests.Session()
        self._session.headers.update(
            {"User-Agent": self.config.user_agent, "Accept": "application/json"}
        )
        self._pace_lock = threading.Lock()
        self._last_request = 0.0

    def _pace(self) -> None:
        delay = self.config.inter_request_delay_ms / 1000.0
        if delay <= 0:
            return
        with self._pace_lock:
            wait = self._last_request + delay - time.monotonic()
            if wait > 0:
                time.sleep(wait)
            self._last_request = time.monotonic()

    def lookup(self, doi: Doi) -> ResolvedAbstract:
        self._pace()
        url = f"{self.config.base_url.rstrip('/')}/{doi.value}"
        try:
            response = self._session.get(url, timeout=self.config.timeout_ms / 1000.0)
        except requests.RequestException as exc:
            raise TransportError(f"request for {doi} failed: {exc}") from exc
        if response.status_code == 404:
            raise NotFoundError(f"no metadata record for {doi}")
        if response.status_code != 200:
            raise TransportError(
                f"metadata service answered {response.status_code} for {doi}"
            )
        try:
            payload = response.json()
        except ValueError as exc:
            raise TransportError(f"non-JSON response for {doi}") from exc
        record = payload.get("message", payload) if isinstance(payload, dict) else {}
        abstract = record.get("abstract") or ""
        abstract = strip_markup(abstract) if abstract else ""
        if not abstract:
            raise NoAbstractError(f"record for {doi} has no abstract")
        title = record.get("title")
        if isinstance(title, list):
            title = title[0] if title else None
        return ResolvedAbstract(
            doi=doi, abstract_text=abstract, title=title, source=self.source
        )


class FixtureMetadataClient(MetadataClient):
    """Deterministic in-process resolver backed by a mapping or JSONL file.

    Tracks in-flight calls so tests can assert the bulk resolver's
    concurrency bound; ``delay_s`` forces calls to overlap.
    """

    source = "fixture"

    def __init__(self, records: dict[str, dict], delay_s: float = 0.0):
        self._records = records
        self.delay_s = delay_s
        self._lock = threading.Lock()
        self._in_flight = 0
        self.peak_in_flight = 0

    @classmethod
    def from_mapping(cls, abstracts: dict[str, str], **kwargs) -> "FixtureMetadataClient":
        records = {
            validate_doi(doi).value: {"abstract": text, "title": None}
            for doi, text in abstracts.items()
        }
        return cls(records, **kwargs)

    @classmethod
    def from_jsonl(cls, path: str | Path, **kwargs) -> "FixtureMetadataClient":
        """Load fixture records: one ``{"doi", "title", "abstract"}`` per line."""
        path = Path(path)
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise ParseError(f"cannot read DOI fixtures {path}: {exc}") from exc
        records = {}
        for line_no, line in enumerate(lines, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
                doi = validate_doi(record["doi"])
            except (json.JSONDecodeError, KeyError, InvalidDoiError) as exc:
                raise ParseError(f"{path}:{line_no}: bad fixture record: {exc}") from exc
            records[doi.value] = {
                "abstract": record.get("abstract", ""),
                "title": record.get("title"),
            }
        return cls(records, **kwargs)

    def lookup(self, doi: Doi) -> ResolvedAbstract:
        with self._lock:
            self._in_flight += 1
            self.peak_in_flight = max(self.peak_in_flight, self._in_flight)
        try:
            if self.delay_s:
                time.sleep(self.delay_s)
            record = self._records.get(doi.value)
            if record is None:
                raise NotFoundError(f"no fixture record for {doi}")
            abstract = (record.get("abstract") or "").strip()
            if not abstract:
                raise NoAbstractError(f"fixture record for {doi} has no abstract")
            return ResolvedAbstract(
                doi=doi,
                abstract_text=abstract,
                title=record.get("title"),
                source=self.source,
            )
        finally:
            with self._lock:
                self._in_flight -= 1


def resolve_doi(doi: Doi, client: MetadataClient) -> ResolvedAbstract:
    """Fetch the abstract behind a validated DOI via the given client."""
    resolved = client.lookup(doi)
    if not resolved.abstract_text:
        raise NoAbstractError(f"record for {doi} has no abstract")
    return resolved


def resolve_bulk(
    dois: Sequence[Doi],
    client: MetadataClient,
    max_in_flight: int = 4,
) -> list[Union[ResolvedAbstract, ResolveError]]:
    """Resolve many DOIs with bounded concurrency.

    Results align with the input order; failures come back as per-item
    ResolveError values and never abort the batch.
    """
    if max_in_flight < 1:
        raise ValueError(f"max_in_flight must be >= 1, got {max_in_flight}")
    if not dois:
        return []

    def worker(doi: Doi) -> Union[ResolvedAbstract, ResolveError]:
        try:
            return resolve_doi(doi, client)
        except ResolveError as exc:
            return exc

    with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
        return list(pool.map(worker, dois))
