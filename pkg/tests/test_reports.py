"""Report renderers: txt, html, tex, csv and json shapes for all three reports."""
from __future__ import annotations

import csv
import io
import json
import math
import xml.etree.ElementTree as ET

import pytest

from scg_cli.crucial import CrucialReport, Metric, MetricRanking
from scg_cli.partition import PartitionResult, QualityScores
from scg_cli.reports import (
    REPORT_FORMATS,
    ReportError,
    render_crucial,
    render_partitions,
    render_summary,
)
from scg_cli.summary import SummaryStats


@pytest.fixture()
def stats() -> SummaryStats:
    return SummaryStats(
        node_count=7,
        edge_count=9,
        total_loc=120,
        node_kind_distribution={"CLASS": 2, "METHOD": 3, "FILE": 2},
        edge_kind_distribution={"CALL": 4, "DECLARATION": 5},
        density=0.2142857,
        avg_in_degree=1.2857,
        avg_out_degree=1.2857,
        global_clustering_coefficient=0.5,
        degree_assortativity=-0.25,
    )


@pytest.fixture()
def report() -> CrucialReport:
    rankings = {
        m: MetricRanking(m, [(f"pa.A.m{i}().", float(3 - i)) for i in range(3)])
        for m in Metric
    }
    return CrucialReport(rankings, n=3, warnings=["Katz alpha reduced to 0.05"])


@pytest.fixture()
def sweep() -> list[PartitionResult]:
    q1 = QualityScores(12.5, 0.25, 90.0, 85.0, 80.0, 75.0, 0.1234, [45, 55])
    q2 = QualityScores(float("inf"), 0.0, 100.0, 100.0, 100.0, 100.0, 0.0, [50, 50])
    return [
        PartitionResult("mlv-fm", 2, {"a": 0, "b": 1}, q1, cut=4, internal=50),
        PartitionResult("mlv-greedy", 2, {"a": 0, "b": 1}, q2, cut=0, internal=54),
    ]


class TestSummary:
    @pytest.mark.parametrize("fmt", REPORT_FORMATS)
    def test_renders_all_formats(self, stats, fmt):
        out = render_summary(stats, fmt)
        assert out.endswith("\n")
        assert "120" in out  # total loc appears everywhere

    def test_json_is_lossless(self, stats):
        doc = json.loads(render_summary(stats, "json"))
        assert doc == stats.as_dict()

    def test_csv_shape(self, stats):
        rows = list(csv.reader(io.StringIO(render_summary(stats, "csv"))))
        assert rows[0] == ["metric", "value"]
        labels = [r[0] for r in rows[1:]]
        assert "Nodes" in labels and "nodes[CLASS]" in labels and "edges[CALL]" in labels

    def test_txt_contains_distributions(self, stats):
        out = render_summary(stats, "txt")
        assert "Node kinds:" in out and "Edge kinds:" in out
        assert "CLASS" in out and "DECLARATION" in out

    def test_html_well_formed(self, stats):
        ET.fromstring(render_summary(stats, "html"))

    def test_tex_table_delimiters(self, stats):
        out = render_summary(stats, "tex")
        assert out.startswith(r"\begin{tabular}")
        assert out.rstrip().endswith(r"\end{tabular}")

    def test_missing_assortativity_rendered_na(self, stats):
        stats.degree_assortativity = None
        assert "n/a" in render_summary(stats, "txt")

    def test_unknown_format_rejected(self, stats):
        with pytest.raises(ReportError):
            render_summary(stats, "pdf")


class TestCrucial:
    def test_txt_has_all_nine_sections(self, report):
        out = render_crucial(report, "txt")
        for title in (
            "Lines of code",
            "Node out-degree",
            "Node in-degree",
            "PageRank",
            "Eigenvector centrality",
            "Katz centrality",
            "Betweenness centrality",
            "Harmonic centrality",
            "Combined importance",
        ):
            assert title in out
        assert "warning: Katz alpha reduced" in out

    def test_json_round_trip(self, report):
        doc = json.loads(render_crucial(report, "json"))
        assert doc["n"] == 3
        assert set(doc["rankings"]) == {m.value for m in Metric}
        assert doc["rankings"]["PAGERANK"][0] == {"id": "pa.A.m0().", "score": 3.0}

    def test_csv_shape(self, report):
        rows = list(csv.reader(io.StringIO(render_crucial(report, "csv"))))
        assert rows[0] == ["metric", "rank", "id", "score"]
        assert len(rows) == 1 + 9 * 3
        assert rows[1] == ["LOC", "1", "pa.A.m0().", "3"]

    def test_html_well_formed(self, report):
        ET.fromstring(render_crucial(report, "html"))

    def test_tex_escapes_underscores(self, report):
        report.rankings[Metric.LOC].entries[0] = ("pa.A_B", 3.0)
        assert r"pa.A\_B" in render_crucial(report, "tex")

    def test_unknown_format_rejected(self, report):
        with pytest.raises(ReportError):
            render_crucial(report, "md")


class TestPartitions:
    def test_csv_columns(self, sweep):
        rows = list(csv.reader(io.StringIO(render_partitions(sweep, "csv"))))
        assert rows[0] == [
            "Algorithm",
            "NPart",
            "Modularity",
            "ACC",
            "F. W.",
            "F. A.",
            "P. W.",
            "P. A.",
            "Variance",
            "Distribution %",
        ]
        assert rows[1][0] == "mlv-fm" and rows[1][1] == "2"
        assert rows[1][-1] == "[45,55]"

    def test_infinite_modularity_rendered(self, sweep):
        out = render_partitions(sweep, "txt")
        assert "inf" in out

    def test_json_inf_safe_and_complete(self, sweep):
        doc = json.loads(render_partitions(sweep, "json"))
        assert len(doc) == 2
        assert doc[0]["quality"]["modularityRatio"] == 12.5
        assert doc[1]["quality"]["modularityRatio"] == "inf"
        assert doc[0]["assignment"] == {"a": 0, "b": 1}
        assert doc[0]["cut"] == 4 and doc[0]["internal"] == 50

    def test_txt_aligned_table(self, sweep):
        lines = render_partitions(sweep, "txt").splitlines()
        assert lines[0].split()[:2] == ["Algorithm", "NPart"]
        assert set(lines[1]) <= {"-", " "}
        assert len(lines) == 4

    def test_html_well_formed(self, sweep):
        ET.fromstring(render_partitions(sweep, "html"))

    def test_tex_row_count(self, sweep):
        out = render_partitions(sweep, "tex")
        assert out.count(r" \\") == 1 + len(sweep)

    def test_unknown_format_rejected(self, sweep):
        with pytest.raises(ReportError):
            render_partitions(sweep, "yaml")
