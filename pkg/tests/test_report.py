import json
import shutil
from pathlib import Path

from sdgtag.cli import run_command
from sdgtag.fuzzylink import FosLink
from sdgtag.ontology import SourceDataset, merge_sources, ontology_stats
from sdgtag.report import render_stats_report, write_stats_csv

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def small_stats():
    ontology = merge_sources(
        [
            SourceDataset("A", [("solar energy", 7), ("poverty", 1)]),
            SourceDataset("B", [("solar energy", 7)]),
        ]
    )
    return ontology_stats(ontology)


def test_stats_csv_rows(tmp_path):
    path = tmp_path / "stats.csv"
    write_stats_csv(small_stats(), path)
    lines = path.read_text().splitlines()
    assert lines[0] == "metric,key,value"
    assert "total_items,,2" in lines
    assert "per_sdg,7,1" in lines
    assert "per_source,A,2" in lines


def test_render_writes_figures_and_csv(tmp_path):
    links = [FosLink("solar energy", 7, "f1", 1.0), FosLink("solr energy", 7, "f1", 0.9167)]
    sdg_map = {7: {"f1"}}
    written = render_stats_report(small_stats(), tmp_path, links=links, sdg_fos_map=sdg_map)
    names = {p.name for p in written}
    assert "stats.csv" in names
    assert "ontology_terms_per_sdg.png" in names
    assert "link_ratio_histogram.png" in names
    assert "fos_per_sdg.png" in names
    for path in written:
        assert path.exists() and path.stat().st_size > 0


def test_cli_stats_report_dir(tmp_path, capsys):
    root = tmp_path / "fixtures"
    shutil.copytree(FIXTURES, root)
    manifest = json.loads((root / "manifest.json").read_text())
    manifest["output_dir"] = str(tmp_path / "out")
    (root / "manifest.json").write_text(json.dumps(manifest))
    for command in ("build-ontology", "link-fos"):
        assert run_command([command, "--config", str(root / "manifest.json")]) == 0
    report_dir = tmp_path / "report"
    assert run_command(
        ["stats", "--config", str(root / "manifest.json"), "--report-dir", str(report_dir)]
    ) == 0
    assert (report_dir / "stats.csv").exists()
    assert (report_dir / "ontology_terms_per_sdg.png").stat().st_size > 0
    assert (report_dir / "link_ratio_histogram.png").exists()
