"""Rendering of analysis results as txt, html, tex, csv and json documents."""
from __future__ import annotations

import csv
import html
import io
import json
import math

from .crucial import CrucialReport, Metric
from .partition import PartitionResult
from .summary import SummaryStats

REPORT_FORMATS = ("txt", "html", "tex", "csv", "json")

_METRIC_TITLES = {
    Metric.LOC: "Lines of code",
    Metric.OUT_DEGREE: "Node out-degree",
    Metric.IN_DEGREE: "Node in-degree",
    Metric.PAGERANK: "PageRank",
    Metric.EIGENVECTOR: "Eigenvector centrality",
    Metric.KATZ: "Katz centrality",
    Metric.BETWEENNESS: "Betweenness centrality",
    Metric.HARMONIC: "Harmonic centrality",
    Metric.COMBINED: "Combined importance",
}

_PARTITION_COLUMNS = [
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


class ReportError(ValueError):
    pass


def _fmt_num(value: float | int | None) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        if value == int(value) and abs(value) < 1e15:
            return str(int(value))
        return f"{value:.6g}"
    return str(value)


def _score(value: float) -> str:
    if math.isinf(value):
        return "inf"
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return f"{value:.3f}"


def _tex_escape(s: str) -> str:
    replacements = {
        "\\": r"\textbackslash{}",
        "&": r"\&",
        "%": r"\%",
        "$": r"\$",
        "#": r"\#",
        "_": r"\_",
        "{": r"\{",
        "}": r"\}",
        "~": r"\textasciitilde{}",
        "^": r"\textasciicircum{}",
    }
    return "".join(replacements.get(c, c) for c in s)


# -- summary ---------------------------------------------------------------

def _summary_rows(stats: SummaryStats) -> list[tuple[str, str]]:
    return [
        ("Nodes", str(stats.node_count)),
        ("Edges", str(stats.edge_count)),
        ("Total lines of code", str(stats.total_loc)),
        ("Density", _fmt_num(stats.density)),
        ("Average in-degree", _fmt_num(stats.avg_in_degree)),
        ("Average out-degree", _fmt_num(stats.avg_out_degree)),
        ("Global clustering coefficient", _fmt_num(stats.global_clustering_coefficient)),
        ("Degree assortativity", _fmt_num(stats.degree_assortativity)),
    ]


def render_summary(stats: SummaryStats, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(stats.as_dict(), indent=2, sort_keys=True) + "\n"
    rows = _summary_rows(stats)
    node_dist = sorted(stats.node_kind_distribution.items())
    edge_dist = sorted(stats.edge_kind_distribution.items())
    if fmt == "txt":
        out = ["Project summary", "==============="]
        width = max(len(name) for name, _ in rows)
        out += [f"{name:<{width}}  {value}" for name, value in rows]
        out.append("")
        out.append("Node kinds:")
        out += [f"  {kind:<16} {count}" for kind, count in node_dist]
        out.append("Edge kinds:")
        out += [f"  {kind:<16} {count}" for kind, count in edge_dist]
        return "\n".join(out) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["metric", "value"])
        for name, value in rows:
            w.writerow([name, value])
        for kind, count in node_dist:
            w.writerow([f"nodes[{kind}]", count])
        for kind, count in edge_dist:
            w.writerow([f"edges[{kind}]", count])
        return buf.getvalue()
    if fmt == "html":
        out = ["<html><body><h1>Project summary</h1>", "<table border='1'>"]
        out += [
            f"<tr><td>{html.escape(name)}</td><td>{html.escape(value)}</td></tr>"
            for name, value in rows
        ]
        out.append("</table>")
        out.append("<h2>Node kind distribution</h2><table border='1'>")
        out.append("<tr><th>kind</th><th>count</th></tr>")
        out += [f"<tr><td>{html.escape(k)}</td><td>{c}</td></tr>" for k, c in node_dist]
        out.append("</table>")
        out.append("<h2>Edge kind distribution</h2><table border='1'>")
        out.append("<tr><th>kind</th><th>count</th></tr>")
        out += [f"<tr><td>{html.escape(k)}</td><td>{c}</td></tr>" for k, c in edge_dist]
        out.append("</table></body></html>")
        return "\n".join(out) + "\n"
    if fmt == "tex":
        out = [r"\begin{tabular}{l|l}", r"\hline", r"Metric & Value \\", r"\hline"]
        out += [f"{_tex_escape(name)} & {_tex_escape(value)} \\\\" for name, value in rows]
        out += [r"\hline"]
        out += [f"nodes[{_tex_escape(k)}] & {c} \\\\" for k, c in node_dist]
        out += [f"edges[{_tex_escape(k)}] & {c} \\\\" for k, c in edge_dist]
        out += [r"\hline", r"\end{tabular}"]
        return "\n".join(out) + "\n"
    raise ReportError(f"unknown report format {fmt!r}")


# -- crucial ---------------------------------------------------------------

def render_crucial(report: CrucialReport, fmt: str) -> str:
    ordered = [m for m in Metric if m in report.rankings]
    if fmt == "json":
        doc = {
            "n": report.n,
            "warnings": report.warnings,
            "rankings": {
                m.value: [{"id": nid, "score": score} for nid, score in report.rankings[m].entries]
                for m in ordered
            },
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["metric", "rank", "id", "score"])
        for m in ordered:
            for rank, (nid, score) in enumerate(report.rankings[m].entries, start=1):
                w.writerow([m.value, rank, nid, _score(score)])
        return buf.getvalue()
    if fmt == "txt":
        out = []
        for m in ordered:
            out.append(_METRIC_TITLES[m])
            out.append("-" * len(_METRIC_TITLES[m]))
            for nid, score in report.rankings[m].entries:
                out.append(f"  {nid}  {_score(score)}")
            out.append("")
        for warning in report.warnings:
            out.append(f"warning: {warning}")
        return "\n".join(out).rstrip("\n") + "\n"
    if fmt == "html":
        out = ["<html><body><h1>Crucial code entities</h1>"]
        for m in ordered:
            out.append(f"<h2>{html.escape(_METRIC_TITLES[m])}</h2><table border='1'>")
            out.append("<tr><th>entity</th><th>score</th></tr>")
            for nid, score in report.rankings[m].entries:
                out.append(f"<tr><td>{html.escape(nid)}</td><td>{_score(score)}</td></tr>")
            out.append("</table>")
        out.append("</body></html>")
        return "\n".join(out) + "\n"
    if fmt == "tex":
        out = [r"\begin{tabular}{l|l}"]
        for m in ordered:
            out.append(r"\hline")
            out.append(f"{_tex_escape(_METRIC_TITLES[m])} & Score \\\\")
            out.append(r"\hline")
            for nid, score in report.rankings[m].entries:
                out.append(f"{_tex_escape(nid)} & {_score(score)} \\\\")
        out.append(r"\end{tabular}")
        return "\n".join(out) + "\n"
    raise ReportError(f"unknown report format {fmt!r}")


# -- partition sweep -------------------------------------------------------

def _partition_row(r: PartitionResult) -> list[str]:
    q = r.quality
    return [
        r.algorithm,
        str(r.k),
        _fmt_num(round(q.modularity_ratio, 3) if math.isfinite(q.modularity_ratio) else q.modularity_ratio),
        f"{q.avg_clustering_coefficient:.3f}",
        str(round(q.file_weighted_accuracy)),
        str(round(q.file_average_accuracy)),
        str(round(q.package_weighted_accuracy)),
        str(round(q.package_average_accuracy)),
        f"{q.partition_variance:.3f}",
        "[" + ",".join(str(p) for p in q.distribution_percent) + "]",
    ]


def render_partitions(results: list[PartitionResult], fmt: str) -> str:
    if fmt == "json":
        doc = [
            {
                "algorithm": r.algorithm,
                "k": r.k,
                "cut": r.cut,
                "internal": r.internal,
                "quality": _json_safe(r.quality.as_dict()),
                "assignment": dict(sorted(r.assignment.items())),
            }
            for r in results
        ]
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    rows = [_partition_row(r) for r in results]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(_PARTITION_COLUMNS)
        w.writerows(rows)
        return buf.getvalue()
    if fmt == "txt":
        widths = [
            max(len(_PARTITION_COLUMNS[c]), *(len(r[c]) for r in rows)) if rows else len(_PARTITION_COLUMNS[c])
            for c in range(len(_PARTITION_COLUMNS))
        ]
        def line(cells: list[str]) -> str:
            return "  ".join(cell.ljust(widths[c]) for c, cell in enumerate(cells)).rstrip()
        out = [line(_PARTITION_COLUMNS), line(["-" * w for w in widths])]
        out += [line(r) for r in rows]
        return "\n".join(out) + "\n"
    if fmt == "html":
        out = ["<html><body><h1>Partitioning quality</h1>", "<table border='1'>"]
        out.append("<tr>" + "".join(f"<th>{html.escape(c)}</th>" for c in _PARTITION_COLUMNS) + "</tr>")
        for r in rows:
            out.append("<tr>" + "".join(f"<td>{html.escape(c)}</td>" for c in r) + "</tr>")
        out.append("</table></body></html>")
        return "\n".join(out) + "\n"
    if fmt == "tex":
        out = [
            r"\begin{tabular}{|r|r|r|r|r|r|r|r|r|l|}",
            r"\hline",
            " & ".join(_tex_escape(c) for c in _PARTITION_COLUMNS) + r" \\",
            r"\hline",
        ]
        out += [" & ".join(_tex_escape(c) for c in r) + r" \\" for r in rows]
        out += [r"\hline", r"\end{tabular}"]
        return "\n".join(out) + "\n"
    raise ReportError(f"unknown report format {fmt!r}")


def _json_safe(doc: dict) -> dict:
    out = {}
    for key, value in doc.items():
        if isinstance(value, float) and math.isinf(value):
            out[key] = "inf"
        else:
            out[key] = value
    return out
