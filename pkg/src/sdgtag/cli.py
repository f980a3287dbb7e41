"""Command-line driver for the whole pipeline.

Subcommands: build-ontology, link-fos, build-index, tag, tag-doi, serve,
stats. A pipeline manifest (JSON) names every input and the chosen knobs;
stage flags override it. All artifacts are plain CSV/JSON/JSONL files, so
two runs from the same manifest produce byte-identical outputs.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import ENGINE_VERSION
from .doiresolve import (
    FixtureMetadataClient,
    HttpClientConfig,
    HttpMetadataClient,
    InvalidDoiError,
    ResolveError,
    resolve_bulk,
    validate_doi,
)
from .errors import SdgTagError
from .fostag import build_fos_index, load_fos_corpus, load_index, write_index
from .fuzzylink import (
    build_sdg_fos_map,
    link_ontology_to_fos,
    load_fos_catalog,
    load_link_table,
    load_sdg_fos_map,
    write_link_table,
    write_sdg_fos_map,
)
from .ontology import (
    load_ontology,
    merge_sources,
    ontology_stats,
    parse_source_dataset,
    write_ontology,
)
from .sdgscore import classify_text, load_threshold_config
from .textprep import TokenizerConfig, load_stopwords

ENV_DOI_BASE_URL = "SDGTAG_DOI_BASE_URL"

ONTOLOGY_FILE = "ontology.json"
LINKS_FILE = "links.csv"
MAP_FILE = "sdg_fos_map.json"
INDEX_FILE = "index.json"
FEEDBACK_FILE = "feedback.jsonl"


@dataclass
class PipelineManifest:
    """Everything one pipeline run needs, loaded from a JSON manifest."""

    sources: list[dict]
    fos_catalog: Path
    fos_corpus: Path
    thresholds: Path
    output_dir: Path
    stopwords: Optional[Path] = None
    link_threshold: float = 0.85
    top_k: int = 20
    min_sim: float = 0.1
    doi_fixtures: Optional[Path] = None
    doi_base_url: Optional[str] = None
    max_text_length: int = 20000
    doi_batch_cap: int = 100
    engine_version: str = ENGINE_VERSION

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineManifest":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise SdgTagError(f"cannot load manifest {path}: {exc}") from exc
        base = path.parent

        def resolve(value):
            return (base / value).resolve() if value else None

        try:
            sources = [
                {**entry, "path": str(resolve(entry["path"]))}
                for entry in data["sources"]
            ]
            return cls(
                sources=sources,
                fos_catalog=resolve(data["fos_catalog"]),
                fos_corpus=resolve(data["fos_corpus"]),
                thresholds=resolve(data["thresholds"]),
                output_dir=resolve(data.get("output_dir", "out")),
                stopwords=resolve(data.get("stopwords")),
                link_threshold=float(data.get("link_threshold", 0.85)),
                top_k=int(data.get("top_k", 20)),
                min_sim=float(data.get("min_sim", 0.1)),
                doi_fixtures=resolve(data.get("doi_fixtures")),
                doi_base_url=data.get("doi_base_url"),
                max_text_length=int(data.get("max_text_length", 20000)),
                doi_batch_cap=int(data.get("doi_batch_cap", 100)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SdgTagError(f"{path}: malformed manifest: {exc}") from exc

    def tokenizer(self) -> TokenizerConfig:
        if self.stopwords:
            return TokenizerConfig(stopwords=load_stopwords(self.stopwords))
        return TokenizerConfig.default()

    def artifact(self, name: str) -> Path:
        return self.output_dir / name


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="sdgtag", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="pipeline manifest JSON")
        p.add_argument("--output-dir", help="override the manifest output directory")
        return p

    add("build-ontology", "merge source datasets into the ontology JSON")

    p = add("link-fos", "link ontology terms to FOS; writes link CSV and SDG->FOS map")
    p.add_argument("--threshold", type=float, help="similarity ratio threshold (strict)")
    p.add_argument("--no-blocking", action="store_true", help="disable the length-band filter")

    add("build-index", "build the FOS tf-idf index snapshot")

    p = add("tag", "classify text from --text, --input or stdin")
    p.add_argument("--text", help="text to classify")
    p.add_argument("--input", help="file containing the text")
    p.add_argument("--top-k", type=int, help="max FOS tags to keep")
    p.add_argument("--min-sim", type=float, help="min cosine similarity for a tag")

    p = add("tag-doi", "resolve DOIs to abstracts, then classify them")
    p.add_argument("dois", nargs="*", help="DOIs to resolve")
    p.add_argument("--input", help="file with one DOI per line")
    p.add_argument("--top-k", type=int)
    p.add_argument("--min-sim", type=float)

    p = add("serve", "start the HTTP service over the built artifacts")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--static-dir", help="directory of web UI assets to serve at /")

    p = add("stats", "print the ontology/index stats report")
    p.add_argument(
        "--report-dir",
        help="also render stats.csv and figures into this directory",
    )
    return parser


def _require(path: Path, hint: str) -> Path:
    if not Path(path).exists():
        raise SdgTagError(f"missing {hint}: {path} (run the earlier pipeline stages first)")
    return Path(path)


def _read_text_argument(args) -> str:
    if args.text is not None:
        return args.text
    if args.input:
        return Path(_require(Path(args.input), "input file")).read_text(encoding="utf-8")
    return sys.stdin.read()


def _cmd_build_ontology(manifest: PipelineManifest) -> int:
    datasets = []
    for entry in manifest.sources:
        path = _require(Path(entry["path"]), "source dataset")
        metadata = {k: v for k, v in entry.items() if k not in ("path", "source_id", "format")}
        datasets.append(
            parse_source_dataset(
                path,
                format=entry.get("format"),
                source_id=entry.get("source_id"),
                metadata=metadata,
            )
        )
    ontology = merge_sources(datasets)
    for dataset in datasets:
        for warning in dataset.warnings:
            print(f"warning: {warning}", file=sys.stderr)
    for warning in ontology.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    manifest.output_dir.mkdir(parents=True, exist_ok=True)
    out = manifest.artifact(ONTOLOGY_FILE)
    write_ontology(ontology, out)
    print(f"wrote {out} ({len(ontology)} items)", file=sys.stderr)
    return 0


def _cmd_link_fos(manifest: PipelineManifest, threshold, no_blocking: bool) -> int:
    ontology = load_ontology(_require(manifest.artifact(ONTOLOGY_FILE), "ontology"))
    catalog = load_fos_catalog(_require(manifest.fos_catalog, "FOS catalog"))
    links = link_ontology_to_fos(
        ontology,
        catalog,
        threshold=manifest.link_threshold if threshold is None else threshold,
        use_blocking=not no_blocking,
    )
    manifest.output_dir.mkdir(parents=True, exist_ok=True)
    links_path = manifest.artifact(LINKS_FILE)
    map_path = manifest.artifact(MAP_FILE)
    write_link_table(links, links_path)
    write_sdg_fos_map(build_sdg_fos_map(links), map_path)
    print(f"wrote {links_path} ({len(links)} links) and {map_path}", file=sys.stderr)
    return 0


def _cmd_build_index(manifest: PipelineManifest) -> int:
    docs = load_fos_corpus(_require(manifest.fos_corpus, "FOS corpus"))
    index = build_fos_index(docs, tokenizer=manifest.tokenizer())
    manifest.output_dir.mkdir(parents=True, exist_ok=True)
    out = manifest.artifact(INDEX_FILE)
    write_index(index, out)
    print(
        f"wrote {out} ({len(index)} FOS, {len(index.vocabulary)} vocabulary terms)",
        file=sys.stderr,
    )
    return 0


def _load_tagging_artifacts(manifest: PipelineManifest):
    index = load_index(
        _require(manifest.artifact(INDEX_FILE), "index snapshot"),
        expected=manifest.tokenizer(),
    )
    sdg_map = load_sdg_fos_map(_require(manifest.artifact(MAP_FILE), "SDG->FOS map"))
    thresholds = load_threshold_config(_require(manifest.thresholds, "threshold config"))
    return index, sdg_map, thresholds


def _cmd_tag(manifest: PipelineManifest, args) -> int:
    index, sdg_map, thresholds = _load_tagging_artifacts(manifest)
    text = _read_text_argument(args)
    classification = classify_text(
        text,
        index,
        sdg_map,
        thresholds,
        top_k=manifest.top_k if args.top_k is None else args.top_k,
        min_sim=manifest.min_sim if args.min_sim is None else args.min_sim,
        engine_version=ENGINE_VERSION,
    )
    json.dump(classification.to_dict(), sys.stdout, ensure_ascii=False, indent=2)
    print()
    return 0


def _make_doi_client(manifest: PipelineManifest):
    if manifest.doi_fixtures:
        return FixtureMetadataClient.from_jsonl(_require(manifest.doi_fixtures, "DOI fixtures"))
    base_url = os.environ.get(ENV_DOI_BASE_URL) or manifest.doi_base_url
    config = HttpClientConfig()
    if base_url:
        config.base_url = base_url
    return HttpMetadataClient(config)


def _cmd_tag_doi(manifest: PipelineManifest, args) -> int:
    raw_dois = list(args.dois)
    if args.input:
        lines = Path(_require(Path(args.input), "DOI list file")).read_text(
            encoding="utf-8"
        ).splitlines()
        raw_dois.extend(line.strip() for line in lines if line.strip())
    if not raw_dois:
        raise _UsageError("tag-doi needs at least one DOI (positional or --input)")

    index, sdg_map, thresholds = _load_tagging_artifacts(manifest)
    client = _make_doi_client(manifest)

    validated = []
    items: list[dict | None] = []
    for raw in raw_dois:
        try:
            doi = validate_doi(raw)
        except InvalidDoiError as exc:
            items.append({"doi": raw, "status": "invalid_doi", "error": str(exc)})
            continue
        validated.append((len(items), doi))
        items.append(None)

    outcomes = resolve_bulk([doi for _, doi in validated], client)
    top_k = manifest.top_k if args.top_k is None else args.top_k
    min_sim = manifest.min_sim if args.min_sim is None else args.min_sim
    for (position, _doi), outcome in zip(validated, outcomes):
        raw = raw_dois[position]
        if isinstance(outcome, ResolveError):
            items[position] = {"doi": raw, "status": outcome.code, "error": str(outcome)}
        else:
            classification = classify_text(
                outcome.abstract_text,
                index,
                sdg_map,
                thresholds,
                top_k=top_k,
                min_sim=min_sim,
                engine_version=ENGINE_VERSION,
            )
            items[position] = {
                "doi": raw,
                "status": "ok",
                "title": outcome.title,
                "classification": classification.to_dict(),
            }
    json.dump({"results": items}, sys.stdout, ensure_ascii=False, indent=2)
    print()
    return 0


def _cmd_serve(manifest: PipelineManifest, args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    base_url = os.environ.get(ENV_DOI_BASE_URL) or manifest.doi_base_url
    http_config = HttpClientConfig()
    if base_url:
        http_config.base_url = base_url
    config = ServiceConfig(
        ontology_path=_require(manifest.artifact(ONTOLOGY_FILE), "ontology"),
        index_path=_require(manifest.artifact(INDEX_FILE), "index snapshot"),
        sdg_fos_map_path=_require(manifest.artifact(MAP_FILE), "SDG->FOS map"),
        thresholds_path=_require(manifest.thresholds, "threshold config"),
        links_path=manifest.artifact(LINKS_FILE),
        feedback_path=manifest.artifact(FEEDBACK_FILE),
        stopwords_path=manifest.stopwords,
        doi_fixture_path=manifest.doi_fixtures,
        doi_http=http_config,
        doi_batch_cap=manifest.doi_batch_cap,
        max_text_length=manifest.max_text_length,
        top_k=manifest.top_k,
        min_sim=manifest.min_sim,
        static_dir=Path(args.static_dir) if args.static_dir else None,
    )
    uvicorn.run(create_app(config), host=args.host, port=args.port)
    return 0


def _cmd_stats(manifest: PipelineManifest, args) -> int:
    ontology = load_ontology(_require(manifest.artifact(ONTOLOGY_FILE), "ontology"))
    stats = ontology_stats(ontology)
    links = None
    sdg_map = None
    if manifest.artifact(LINKS_FILE).exists():
        links = load_link_table(manifest.artifact(LINKS_FILE))
    if manifest.artifact(MAP_FILE).exists():
        sdg_map = load_sdg_fos_map(manifest.artifact(MAP_FILE))
    report = {
        "engine_version": ENGINE_VERSION,
        "ontology": stats.to_dict(),
        "link_table_size": len(links) if links is not None else None,
        "sdg_fos_map_sizes": (
            {str(sdg): len(ids) for sdg, ids in sorted(sdg_map.items())}
            if sdg_map is not None
            else None
        ),
    }
    json.dump(report, sys.stdout, ensure_ascii=False, indent=2)
    print()
    if args.report_dir:
        from .report import render_stats_report

        written = render_stats_report(stats, args.report_dir, links=links, sdg_fos_map=sdg_map)
        for path in written:
            print(f"wrote {path}", file=sys.stderr)
    return 0


def run_command(argv: list[str] | None = None) -> int:
    """Dispatch one CLI invocation; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise _UsageError("a subcommand is required")
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1

    try:
        manifest = PipelineManifest.from_file(args.config)
        if args.output_dir:
            manifest.output_dir = Path(args.output_dir).resolve()
        if args.command == "build-ontology":
            return _cmd_build_ontology(manifest)
        if args.command == "link-fos":
            return _cmd_link_fos(manifest, args.threshold, args.no_blocking)
        if args.command == "build-index":
            return _cmd_build_index(manifest)
        if args.command == "tag":
            return _cmd_tag(manifest, args)
        if args.command == "tag-doi":
            return _cmd_tag_doi(manifest, args)
        if args.command == "serve":
            return _cmd_serve(manifest, args)
        if args.command == "stats":
            return _cmd_stats(manifest, args)
        raise _UsageError(f"unknown command {args.command!r}")
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SdgTagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
