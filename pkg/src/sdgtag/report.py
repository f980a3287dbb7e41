"""Render the stats report to a delimited file plus matplotlib figures."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .fuzzylink import FosLink
from .ontology import ALL_SDGS, StatsReport


def write_stats_csv(stats: StatsReport, path: Path) -> None:
    """Flat metric,key,value rows covering every stats section."""
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["metric", "key", "value"])
        writer.writerow(["total_items", "", stats.total_items])
        writer.writerow(["multi_provenance_items", "", stats.multi_provenance_items])
        for sdg in sorted(stats.per_sdg):
            writer.writerow(["per_sdg", sdg, stats.per_sdg[sdg]])
        for source_id in sorted(stats.per_source):
            writer.writerow(["per_source", source_id, stats.per_source[source_id]])


def _bar_figure(labels, values, title, xlabel, ylabel, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(9, 4.5))
    ax.bar(range(len(labels)), values, color="#2a7ab9")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_stats_report(
    stats: StatsReport,
    out_dir: str | Path,
    links: Optional[Iterable[FosLink]] = None,
    sdg_fos_map: Optional[dict[int, set[str]]] = None,
) -> list[Path]:
    """Write stats.csv and the companion figures; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    csv_path = out_dir / "stats.csv"
    write_stats_csv(stats, csv_path)
    written.append(csv_path)

    sdg_path = out_dir / "ontology_terms_per_sdg.png"
    _bar_figure(
        [str(sdg) for sdg in ALL_SDGS],
        [stats.per_sdg.get(sdg, 0) for sdg in ALL_SDGS],
        "Ontology terms per SDG",
        "SDG",
        "terms",
        sdg_path,
    )
    written.append(sdg_path)

    if stats.per_source:
        source_path = out_dir / "ontology_terms_per_source.png"
        sources = sorted(stats.per_source)
        _bar_figure(
            sources,
            [stats.per_source[s] for s in sources],
            "Ontology terms per source",
            "source",
            "terms",
            source_path,
        )
        written.append(source_path)

    if links is not None:
        links = list(links)
        if links:
            hist_path = out_dir / "link_ratio_histogram.png"
            fig, ax = plt.subplots(figsize=(7, 4.5))
            ax.hist([link.ratio for link in links], bins=20, color="#2a7ab9")
            ax.set_title("Term-to-FOS similarity ratios")
            ax.set_xlabel("ratio")
            ax.set_ylabel("links")
            fig.tight_layout()
            fig.savefig(hist_path, dpi=150)
            plt.close(fig)
            written.append(hist_path)

    if sdg_fos_map is not None:
        map_path = out_dir / "fos_per_sdg.png"
        _bar_figure(
            [str(sdg) for sdg in ALL_SDGS],
            [len(sdg_fos_map.get(sdg, set())) for sdg in ALL_SDGS],
            "Linked FOS per SDG",
            "SDG",
            "FOS",
            map_path,
        )
        written.append(map_path)

    return written
