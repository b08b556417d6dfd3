"""Graph serialization to interchange formats and the notebook bundle.

All writers emit nodes sorted by id and edges sorted by (from, to, type),
so exports are deterministic and stable under input permutation.
"""
from __future__ import annotations

import json
import shutil
from pathlib import Path
from xml.sax.saxutils import escape as xml_escape
from xml.sax.saxutils import quoteattr as xml_attr

from .model import SemanticCodeGraph, SemanticEdge, SemanticNode
from .storage import METADATA_DIR

GRAPH_FORMATS = ("gdf", "dot", "graphml", "gml")


class ExportError(Exception):
    pass


def _sorted_nodes(graph: SemanticCodeGraph) -> list[SemanticNode]:
    return [graph.nodes[i] for i in sorted(graph.nodes)]


def _sorted_edges(graph: SemanticCodeGraph) -> list[SemanticEdge]:
    return sorted(graph.edges, key=lambda e: e.key)


def _partition_attr(k: int, algorithm: str) -> str:
    return f"npart_{k}_{algorithm}".replace("-", "_")


PartitionAttrs = dict[str, dict[str, int]]  # attr name -> node id -> partition


# -- GDF --------------------------------------------------------------------

def _gdf_quote(value: str) -> str:
    return "'" + str(value).replace("'", "''") + "'"


def write_gdf(graph: SemanticCodeGraph) -> str:
    lines = ["nodedef>name VARCHAR,label VARCHAR,kind VARCHAR,loc INT,package VARCHAR,file VARCHAR"]
    for n in _sorted_nodes(graph):
        lines.append(
            ",".join(
                _gdf_quote(v)
                for v in (n.id, n.display_name, str(n.kind), n.loc, n.package_name, n.file_uri)
            )
        )
    lines.append("edgedef>node1 VARCHAR,node2 VARCHAR,type VARCHAR,directed BOOLEAN")
    for e in _sorted_edges(graph):
        lines.append(
            ",".join((_gdf_quote(e.from_id), _gdf_quote(e.to_id), _gdf_quote(str(e.type)), "true"))
        )
    return "\n".join(lines) + "\n"


# -- DOT --------------------------------------------------------------------

def _dot_quote(value: str) -> str:
    return '"' + str(value).replace("\\", "\\\\").replace('"', '\\"') + '"'


def write_dot(graph: SemanticCodeGraph) -> str:
    lines = [f"digraph {_dot_quote(graph.project_name or 'scg')} {{"]
    for n in _sorted_nodes(graph):
        attrs = (
            f"label={_dot_quote(n.display_name or n.id)}, "
            f"kind={_dot_quote(str(n.kind))}, loc={n.loc}, "
            f"package={_dot_quote(n.package_name)}, file={_dot_quote(n.file_uri)}"
        )
        lines.append(f"  {_dot_quote(n.id)} [{attrs}];")
    for e in _sorted_edges(graph):
        lines.append(
            f"  {_dot_quote(e.from_id)} -> {_dot_quote(e.to_id)} [label={_dot_quote(str(e.type))}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- GraphML ----------------------------------------------------------------

_GRAPHML_NODE_KEYS = [("kind", "string"), ("loc", "int"), ("package", "string"), ("file", "string")]


def write_graphml(graph: SemanticCodeGraph, partitions: PartitionAttrs | None = None) -> str:
    partitions = partitions or {}
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns"',
        '         xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance"',
        '         xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns'
        ' http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">',
    ]
    for name, typ in _GRAPHML_NODE_KEYS:
        lines.append(
            f'  <key id="{name}" for="node" attr.name="{name}" attr.type="{typ}"/>'
        )
    for attr in sorted(partitions):
        lines.append(f'  <key id="{attr}" for="node" attr.name="{attr}" attr.type="int"/>')
    lines.append('  <key id="type" for="edge" attr.name="type" attr.type="string"/>')
    lines.append('  <graph id="G" edgedefault="directed">')
    for n in _sorted_nodes(graph):
        lines.append(f"    <node id={xml_attr(n.id)}>")
        for name, value in (
            ("kind", str(n.kind)),
            ("loc", n.loc),
            ("package", n.package_name),
            ("file", n.file_uri),
        ):
            lines.append(f'      <data key="{name}">{xml_escape(str(value))}</data>')
        for attr in sorted(partitions):
            if n.id in partitions[attr]:
                lines.append(f'      <data key="{attr}">{partitions[attr][n.id]}</data>')
        lines.append("    </node>")
    for e in _sorted_edges(graph):
        lines.append(
            f"    <edge source={xml_attr(e.from_id)} target={xml_attr(e.to_id)}>"
            f'<data key="type">{xml_escape(str(e.type))}</data></edge>'
        )
    lines.append("  </graph>")
    lines.append("</graphml>")
    return "\n".join(lines) + "\n"


# -- GML --------------------------------------------------------------------

def _gml_quote(value: str) -> str:
    return '"' + str(value).replace("\\", "\\\\").replace('"', "'") + '"'


def write_gml(graph: SemanticCodeGraph, partitions: PartitionAttrs | None = None) -> str:
    partitions = partitions or {}
    nodes = _sorted_nodes(graph)
    index = {n.id: i for i, n in enumerate(nodes)}
    lines = ["graph [", "  directed 1"]
    for n in nodes:
        lines.append("  node [")
        lines.append(f"    id {index[n.id]}")
        lines.append(f"    label {_gml_quote(n.id)}")
        lines.append(f"    kind {_gml_quote(str(n.kind))}")
        lines.append(f"    loc {n.loc}")
        lines.append(f"    package {_gml_quote(n.package_name)}")
        lines.append(f"    file {_gml_quote(n.file_uri)}")
        for attr in sorted(partitions):
            if n.id in partitions[attr]:
                lines.append(f"    {attr} {partitions[attr][n.id]}")
        lines.append("  ]")
    for e in _sorted_edges(graph):
        lines.append("  edge [")
        lines.append(f"    source {index[e.from_id]}")
        lines.append(f"    target {index[e.to_id]}")
        lines.append(f"    type {_gml_quote(str(e.type))}")
        lines.append("  ]")
    lines.append("]")
    return "\n".join(lines) + "\n"


# -- file-level API ---------------------------------------------------------

_WRITERS = {
    "gdf": lambda g, p: write_gdf(g),
    "dot": lambda g, p: write_dot(g),
    "graphml": write_graphml,
    "gml": write_gml,
}


def export_graph(
    graph: SemanticCodeGraph,
    fmt: str,
    output_dir: Path,
    partitions: PartitionAttrs | None = None,
) -> Path:
    """Write the graph in one interchange format; returns the written path."""
    if fmt not in _WRITERS:
        raise ExportError(f"unknown graph format {fmt!r}; choose from {GRAPH_FORMATS}")
    output_dir = Path(output_dir)
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
        path = output_dir / f"{graph.project_name or 'scg'}.{fmt}"
        path.write_text(_WRITERS[fmt](graph, partitions), encoding="utf-8")
    except OSError as exc:
        raise ExportError(f"cannot write to {output_dir}: {exc}") from exc
    return path


# -- notebook bundle --------------------------------------------------------

_NOTEBOOK_CELLS = [
    # Bootstrap: read records, build graph, build node table.
    """\
import pandas as pd
import scg

scg_files = scg.read_scg(".")
G = scg.create_graph(scg_files)
nodes_df = scg.create_nodes_df(scg_files)
print(f"records: {len(scg_files.records)}  nodes: {len(nodes_df)}  edges: {G.number_of_edges()}")
nodes_df.head()
""",
    """\
# Join node table with a partitioning result, when one is bundled.
import glob

npart_csvs = sorted(glob.glob("*-npart-*.csv"))
if npart_csvs:
    scg_df = pd.merge(nodes_df, pd.read_csv(npart_csvs[0]), on="id")
    print(f"joined {npart_csvs[0]}: {len(scg_df)} rows")
else:
    scg_df = None
    print("no partition csv bundled; run `scg-cli partition -o csv <workspace> <n>`")
""",
    """\
# Methods assigned to a different partition than their declaring parent.
def find_parent_and_parent_npart(m):
    parent = next(
        p
        for p, _, data in G.in_edges(m["id"], data=True)
        if data["type"] == "DECLARATION"
    )
    p = scg_df.query("id == @parent")
    return pd.concat([p["id"], p["npart"]], ignore_index=True)

if scg_df is not None:
    m_df = scg_df.query('kind == "METHOD"').copy()
    if len(m_df):
        m_df[["parent", "parent_npart"]] = m_df.apply(find_parent_and_parent_npart, axis=1)
        outstanding = m_df[m_df["npart"] != m_df["parent_npart"]].groupby("parent").size()
        print(outstanding)
""",
]

_BUNDLE_README = """\
# Semantic code graph analysis bundle

Self-contained snapshot for interactive analysis:

- `.semanticgraphs/`  the extracted graph metadata
- `scg/`              helper package (`import scg`) to load the data
- `analysis.ipynb`    starter notebook

Run from this directory so `import scg` resolves:

    pip install pandas networkx jupyter
    jupyter notebook analysis.ipynb
"""


def _helper_source_dir() -> Path:
    """Locate the `scg` notebook-helper package source."""
    try:
        import scg  # noqa: F401

        return Path(scg.__file__).resolve().parent
    except ImportError:
        pass
    here = Path(__file__).resolve()
    for base in here.parents:
        candidate = base / "notebook_helper" / "scg"
        if (candidate / "__init__.py").is_file():
            return candidate
    raise ExportError(
        "notebook helper package `scg` not found; install it or keep "
        "notebook_helper/ next to the scg-cli sources"
    )


def _starter_notebook() -> str:
    cells = [
        {
            "cell_type": "code",
            "execution_count": None,
            "metadata": {},
            "outputs": [],
            "source": src.splitlines(keepends=True),
        }
        for src in _NOTEBOOK_CELLS
    ]
    doc = {
        "cells": cells,
        "metadata": {"language_info": {"name": "python"}},
        "nbformat": 4,
        "nbformat_minor": 5,
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def export_jupyter_bundle(
    graph: SemanticCodeGraph, workspace: Path, output_dir: Path
) -> Path:
    """Emit a self-contained analysis bundle directory."""
    workspace = Path(workspace)
    meta = workspace / METADATA_DIR
    if not meta.is_dir():
        raise ExportError(
            f"no {METADATA_DIR} data under {workspace}; run `scg-cli generate` first"
        )
    bundle = Path(output_dir) / f"{graph.project_name or 'scg'}-jupyter"
    if bundle.exists():
        shutil.rmtree(bundle)
    bundle.mkdir(parents=True)
    shutil.copytree(meta, bundle / METADATA_DIR)

    helper_src = _helper_source_dir()
    dest = bundle / "scg"
    dest.mkdir()
    for src_file in sorted(helper_src.glob("*.py")):
        shutil.copy(src_file, dest / src_file.name)

    (bundle / "analysis.ipynb").write_text(_starter_notebook(), encoding="utf-8")
    (bundle / "README.md").write_text(_BUNDLE_README, encoding="utf-8")
    return bundle
