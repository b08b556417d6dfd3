"""Notebook helper API for semantic code graph data.

Typical workflow::

    import scg
    scg_files = scg.read_scg("my-project")
    G = scg.create_graph(scg_files)
    nodes_df = scg.create_nodes_df(scg_files)
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import networkx as nx
import pandas as pd

from ._records import RecordError, read_record_file  # noqa: F401

METADATA_DIR = ".semanticgraphs"
_SUFFIXES = (".semanticgraphdb", ".json")

__all__ = ["ScgFiles", "read_scg", "create_graph", "create_nodes_df", "RecordError"]


@dataclass
class ScgFiles:
    """Parsed per-source-file records, one entry per metadata file."""

    records: list[dict]

    def __len__(self) -> int:
        return len(self.records)


def read_scg(workspace: str | Path) -> ScgFiles:
    """Read every metadata record under ``<workspace>/.semanticgraphs``."""
    root = Path(workspace)
    meta = root / METADATA_DIR
    if not meta.is_dir():
        raise FileNotFoundError(
            f"no {METADATA_DIR} directory under {root}; generate SCG data first"
        )
    records = [
        read_record_file(path)
        for path in sorted(p for p in meta.rglob("*") if p.is_file() and p.suffix in _SUFFIXES)
    ]
    return ScgFiles(records)


def _merged_nodes(scg_files: ScgFiles) -> dict[str, dict]:
    """Unique nodes by id; a located occurrence wins over stubs."""
    nodes: dict[str, dict] = {}
    for record in scg_files.records:
        for node in record["nodes"]:
            existing = nodes.get(node["id"])
            if existing is None or ("location" not in existing and "location" in node):
                nodes[node["id"]] = node
    return nodes


def create_graph(scg_files: ScgFiles) -> nx.MultiDiGraph:
    """Directed graph with node attrs (kind, loc, package, file), edge attr type."""
    G = nx.MultiDiGraph()
    for node in _merged_nodes(scg_files).values():
        G.add_node(
            node["id"],
            kind=node.get("kind", ""),
            loc=node.get("loc", 0),
            package=node.get("packageName", ""),
            file=node.get("fileUri", ""),
        )
    seen: set[tuple[str, str, str]] = set()
    for record in scg_files.records:
        for edge in record["edges"]:
            key = (edge["from"], edge["to"], edge["type"])
            if key in seen:
                continue
            seen.add(key)
            G.add_edge(edge["from"], edge["to"], type=edge["type"])
    return G


def create_nodes_df(scg_files: ScgFiles) -> pd.DataFrame:
    """One row per node: id, kind, displayName, package, file, loc."""
    nodes = _merged_nodes(scg_files)
    rows = [
        {
            "id": node["id"],
            "kind": node.get("kind", ""),
            "displayName": node.get("displayName", ""),
            "package": node.get("packageName", ""),
            "file": node.get("fileUri", ""),
            "loc": node.get("loc", 0),
        }
        for node in (nodes[i] for i in sorted(nodes))
    ]
    return pd.DataFrame(rows, columns=["id", "kind", "displayName", "package", "file", "loc"])
