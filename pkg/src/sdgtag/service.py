"""HTTP service: short-text tagging, DOI tagging, feedback and stats.

Routes: POST /tag, POST /tag-doi, POST /feedback, GET /stats, GET /health.
All classification artifacts load once at startup and are shared read-only
across request handlers; classification endpoints answer 503 until the
load completes. The feedback store is the only mutable state and appends
are serialized through a single lock.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import ENGINE_VERSION
from .doiresolve import (
    FixtureMetadataClient,
    HttpClientConfig,
    HttpMetadataClient,
    InvalidDoiError,
    MetadataClient,
    ResolveError,
    resolve_bulk,
    validate_doi,
)
from .fostag import load_index
from .fuzzylink import load_link_table, load_sdg_fos_map
from .ontology import load_ontology, ontology_stats
from .sdgscore import classify_text, load_threshold_config
from .textprep import TokenizerConfig, load_stopwords


@dataclass
class ServiceConfig:
    ontology_path: Path
    index_path: Path
    sdg_fos_map_path: Path
    thresholds_path: Path
    feedback_path: Path
    links_path: Optional[Path] = None
    stopwords_path: Optional[Path] = None
    doi_fixture_path: Optional[Path] = None
    doi_http: HttpClientConfig = field(default_factory=HttpClientConfig)
    doi_max_in_flight: int = 4
    doi_batch_cap: int = 100
    max_text_length: int = 20000
    top_k: int = 20
    min_sim: float = 0.1
    static_dir: Optional[Path] = None


class Artifacts:
    """Everything the handlers need, loaded once and self-validated."""

    def __init__(self, config: ServiceConfig):
        for name in ("ontology_path", "index_path", "sdg_fos_map_path", "thresholds_path"):
            path = getattr(config, name)
            if not Path(path).exists():
                raise FileNotFoundError(f"{name} does not exist: {path}")
        tokenizer = None
        if config.stopwords_path:
            tokenizer = TokenizerConfig(stopwords=load_stopwords(config.stopwords_path))
        self.ontology = load_ontology(config.ontology_path)
        self.index = load_index(config.index_path, expected=tokenizer)
        self.sdg_fos_map = load_sdg_fos_map(config.sdg_fos_map_path)
        self.thresholds = load_threshold_config(config.thresholds_path)
        self.link_count = (
            len(load_link_table(config.links_path))
            if config.links_path and Path(config.links_path).exists()
            else None
        )
        self.digests = {
            name: _file_digest(getattr(config, name))
            for name in ("ontology_path", "index_path", "sdg_fos_map_path", "thresholds_path")
        }

    def classify(self, text: str, config: ServiceConfig):
        return classify_text(
            text,
            self.index,
            self.sdg_fos_map,
            self.thresholds,
            top_k=config.top_k,
            min_sim=config.min_sim,
            engine_version=ENGINE_VERSION,
        )


def _file_digest(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


class FeedbackStore:
    """Append-only JSONL store; one record per accepted feedback post."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._count = 0
        if self.path.exists():
            with self.path.open("r", encoding="utf-8") as handle:
                self._count = sum(1 for line in handle if line.strip())

    def append(self, record: dict) -> int:
        """Write one record, returning its 1-based line number."""
        line = json.dumps(record, ensure_ascii=False)
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as handle:
                handle.write(line + "\n")
                handle.flush()
            self._count += 1
            return self._count

    def __len__(self) -> int:
        return self._count

    def records(self) -> list[dict]:
        if not self.path.exists():
            return []
        return [
            json.loads(line)
            for line in self.path.read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]


class TagRequest(BaseModel):
    text: str


class TagDoiRequest(BaseModel):
    dois: list[str]


class FeedbackRequest(BaseModel):
    input_digest: str
    suggested_sdgs: list[int]
    free_text: Optional[str] = None


def build_doi_client(config: ServiceConfig) -> MetadataClient:
    if config.doi_fixture_path:
        return FixtureMetadataClient.from_jsonl(config.doi_fixture_path)
    return HttpMetadataClient(config.doi_http)


def create_app(
    config: ServiceConfig,
    doi_client: MetadataClient | None = None,
) -> FastAPI:
    """Build the service; artifacts load when the app's lifespan starts."""
    from contextlib import asynccontextmanager

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        app.state.artifacts = Artifacts(config)
        yield

    app = FastAPI(title="sdgtag", version=ENGINE_VERSION, lifespan=lifespan)
    app.state.artifacts = None
    app.state.config = config
    app.state.feedback = FeedbackStore(config.feedback_path)
    app.state.doi_client = doi_client or build_doi_client(config)

    def not_ready() -> JSONResponse:
        return JSONResponse(
            status_code=503, content={"error": "artifacts not loaded yet"}
        )

    @app.post("/tag")
    def handle_tag(request: Request, body: TagRequest):
        artifacts: Artifacts = request.app.state.artifacts
        if artifacts is None:
            return not_ready()
        text = body.text
        if not text.strip():
            return JSONResponse(status_code=400, content={"error": "text is empty"})
        if len(text) > config.max_text_length:
            return JSONResponse(
                status_code=400,
                content={
                    "error": f"text exceeds max length {config.max_text_length}"
                },
            )
        return artifacts.classify(text, config).to_dict()

    @app.post("/tag-doi")
    def handle_tag_doi(request: Request, body: TagDoiRequest):
        artifacts: Artifacts = request.app.state.artifacts
        if artifacts is None:
            return not_ready()
        if not body.dois:
            return JSONResponse(status_code=400, content={"error": "dois is empty"})
        if len(body.dois) > config.doi_batch_cap:
            return JSONResponse(
                status_code=400,
                content={"error": f"batch exceeds cap of {config.doi_batch_cap}"},
            )

        validated = []
        items: list[dict | None] = []
        for raw in body.dois:
            try:
                doi = validate_doi(raw)
            except InvalidDoiError as exc:
                items.append({"doi": raw, "status": "invalid_doi", "error": str(exc)})
                continue
            validated.append((len(items), doi))
            items.append(None)

        resolved = resolve_bulk(
            [doi for _, doi in validated],
            request.app.state.doi_client,
            max_in_flight=config.doi_max_in_flight,
        )
        for (position, doi), outcome in zip(validated, resolved):
            raw = body.dois[position]
            if isinstance(outcome, ResolveError):
                items[position] = {
                    "doi": raw,
                    "status": outcome.code,
                    "error": str(outcome),
                }
            else:
                classification = artifacts.classify(outcome.abstract_text, config)
                items[position] = {
                    "doi": raw,
                    "status": "ok",
                    "title": outcome.title,
                    "classification": classification.to_dict(),
                }
        return {"results": items}

    @app.post("/feedback", status_code=201)
    def handle_feedback(request: Request, body: FeedbackRequest):
        sdgs = sorted(set(body.suggested_sdgs))
        if not sdgs or any(not 1 <= sdg <= 17 for sdg in sdgs):
            return JSONResponse(
                status_code=400,
                content={"error": "suggested_sdgs must be a nonempty set of SDGs in 1..17"},
            )
        if not body.input_digest.strip():
            return JSONResponse(
                status_code=400, content={"error": "input_digest is empty"}
            )
        record = {
            "input_digest": body.input_digest,
            "suggested_sdgs": sdgs,
            "free_text": body.free_text,
            "submitted_at": datetime.now(timezone.utc).isoformat(),
            "engine_version": ENGINE_VERSION,
        }
        try:
            record_id = request.app.state.feedback.append(record)
        except OSError as exc:
            return JSONResponse(
                status_code=500, content={"error": f"feedback store write failed: {exc}"}
            )
        return {"record_id": record_id}

    @app.get("/stats")
    def handle_stats(request: Request):
        artifacts: Artifacts = request.app.state.artifacts
        if artifacts is None:
            return not_ready()
        return {
            "engine_version": ENGINE_VERSION,
            "ontology": ontology_stats(artifacts.ontology).to_dict(),
            "fos_index_size": len(artifacts.index),
            "vocabulary_size": len(artifacts.index.vocabulary),
            "link_table_size": artifacts.link_count,
            "sdg_fos_map_sizes": {
                str(sdg): len(ids) for sdg, ids in sorted(artifacts.sdg_fos_map.items())
            },
            "threshold_digest": artifacts.thresholds.digest(),
        }

    @app.get("/health")
    def handle_health(request: Request):
        artifacts: Artifacts = request.app.state.artifacts
        return {
            "status": "ready" if artifacts is not None else "loading",
            "engine_version": ENGINE_VERSION,
            "artifacts": artifacts.digests if artifacts is not None else {},
        }

    if config.static_dir and Path(config.static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app
