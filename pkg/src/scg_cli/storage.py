"""On-disk persistence of the semantic code graph.

One metadata record file per source file, stored under
``<workspace>/.semanticgraphs/`` mirroring the source tree.  Two encodings
are supported, selected by extension: ``.semanticgraphdb`` (length-prefixed
binary, little-endian) and ``.json``.  The binary layout is documented
bit-exactly in ``docs/format.md``.
"""
from __future__ import annotations

import json
import struct
from pathlib import Path

from .model import Location, SemanticCodeGraph, SemanticEdge, SemanticNode

METADATA_DIR = ".semanticgraphs"
BINARY_SUFFIX = ".semanticgraphdb"
JSON_SUFFIX = ".json"

_MAGIC = b"SCGF"
_VERSION = 1
_TAG_NODE = 1
_TAG_EDGE = 2


class StorageError(Exception):
    pass


class MissingMetadataError(StorageError):
    """No .semanticgraphs directory; the user has to run `generate` first."""


class MalformedRecordError(StorageError):
    def __init__(self, path: Path, offset: int, reason: str) -> None:
        super().__init__(f"{path}: malformed record at byte {offset}: {reason}")
        self.path = path
        self.offset = offset


# -- binary primitives -----------------------------------------------------

def _pack_str(s: str) -> bytes:
    raw = s.encode("utf-8")
    return struct.pack("<I", len(raw)) + raw


def _pack_location(loc: Location | None) -> bytes:
    if loc is None:
        return b"\x00"
    return b"\x01" + struct.pack("<IIII", *loc.as_tuple())


def _pack_node(n: SemanticNode) -> bytes:
    parts = [
        _pack_str(n.id),
        _pack_str(str(n.kind)),
        _pack_str(n.display_name),
        _pack_str(n.package_name),
        _pack_str(n.file_uri),
        _pack_location(n.location),
        struct.pack("<I", n.loc),
        struct.pack("<I", len(n.properties)),
    ]
    for k, v in sorted(n.properties):
        parts.append(_pack_str(k))
        parts.append(_pack_str(v))
    return b"".join(parts)


def _pack_edge(e: SemanticEdge) -> bytes:
    return (
        _pack_str(e.from_id)
        + _pack_str(e.to_id)
        + _pack_str(str(e.type))
        + _pack_location(e.location)
    )


class _Reader:
    def __init__(self, data: bytes, path: Path) -> None:
        self.data = data
        self.pos = 0
        self.path = path

    def fail(self, reason: str) -> MalformedRecordError:
        return MalformedRecordError(self.path, self.pos, reason)

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise self.fail(f"need {n} bytes, {len(self.data) - self.pos} left")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def u8(self) -> int:
        return self.take(1)[0]

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def string(self) -> str:
        n = self.u32()
        try:
            return self.take(n).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise self.fail(f"invalid utf-8: {exc}") from exc

    def location(self) -> Location | None:
        if self.u8() == 0:
            return None
        return Location(self.u32(), self.u32(), self.u32(), self.u32())

    @property
    def exhausted(self) -> bool:
        return self.pos >= len(self.data)


def _read_node(r: _Reader) -> SemanticNode:
    nid = r.string()
    kind = r.string()
    display = r.string()
    package = r.string()
    file_uri = r.string()
    loc_range = r.location()
    loc = r.u32()
    nprops = r.u32()
    props = tuple((r.string(), r.string()) for _ in range(nprops))
    return SemanticNode(
        id=nid,
        kind=kind,
        display_name=display,
        package_name=package,
        file_uri=file_uri,
        location=loc_range,
        loc=loc,
        properties=props,
    )


def _read_edge(r: _Reader) -> SemanticEdge:
    return SemanticEdge(r.string(), r.string(), r.string(), r.location())


# -- per-record (de)serialization ------------------------------------------

def encode_record_binary(nodes: list[SemanticNode], edges: list[SemanticEdge]) -> bytes:
    out = [_MAGIC, struct.pack("<H", _VERSION)]
    for n in sorted(nodes, key=lambda n: n.id):
        payload = _pack_node(n)
        out.append(struct.pack("<BI", _TAG_NODE, len(payload)))
        out.append(payload)
    for e in sorted(edges, key=lambda e: e.key):
        payload = _pack_edge(e)
        out.append(struct.pack("<BI", _TAG_EDGE, len(payload)))
        out.append(payload)
    return b"".join(out)


def decode_record_binary(data: bytes, path: Path) -> tuple[list[SemanticNode], list[SemanticEdge]]:
    r = _Reader(data, path)
    if r.take(4) != _MAGIC:
        r.pos = 0
        raise r.fail("bad magic")
    version = struct.unpack("<H", r.take(2))[0]
    if version != _VERSION:
        raise r.fail(f"unsupported version {version}")
    nodes: list[SemanticNode] = []
    edges: list[SemanticEdge] = []
    while not r.exhausted:
        record_start = r.pos
        tag = r.u8()
        length = r.u32()
        start = r.pos
        if tag not in (_TAG_NODE, _TAG_EDGE):
            r.pos = record_start
            raise r.fail(f"unknown record tag {tag}")
        sub = _Reader(r.take(length), path)
        try:
            if tag == _TAG_NODE:
                nodes.append(_read_node(sub))
            else:
                edges.append(_read_edge(sub))
        except MalformedRecordError:
            raise MalformedRecordError(path, start + sub.pos, "truncated record") from None
        except ValueError as exc:
            raise MalformedRecordError(path, start + sub.pos, str(exc)) from exc
        if not sub.exhausted:
            raise MalformedRecordError(path, start + sub.pos, "trailing bytes in record")
    return nodes, edges


def _node_to_json(n: SemanticNode) -> dict:
    d: dict = {
        "id": n.id,
        "kind": str(n.kind),
        "displayName": n.display_name,
        "packageName": n.package_name,
        "fileUri": n.file_uri,
        "loc": n.loc,
        "properties": {k: v for k, v in sorted(n.properties)},
    }
    if n.location is not None:
        d["location"] = list(n.location.as_tuple())
    return d


def _edge_to_json(e: SemanticEdge) -> dict:
    d: dict = {"from": e.from_id, "to": e.to_id, "type": str(e.type)}
    if e.location is not None:
        d["location"] = list(e.location.as_tuple())
    return d


def encode_record_json(nodes: list[SemanticNode], edges: list[SemanticEdge]) -> bytes:
    doc = {
        "nodes": [_node_to_json(n) for n in sorted(nodes, key=lambda n: n.id)],
        "edges": [_edge_to_json(e) for e in sorted(edges, key=lambda e: e.key)],
    }
    return (json.dumps(doc, indent=1, sort_keys=True) + "\n").encode("utf-8")


def decode_record_json(data: bytes, path: Path) -> tuple[list[SemanticNode], list[SemanticEdge]]:
    try:
        doc = json.loads(data)
        nodes = [
            SemanticNode(
                id=d["id"],
                kind=d["kind"],
                display_name=d.get("displayName", ""),
                package_name=d.get("packageName", ""),
                file_uri=d.get("fileUri", ""),
                location=Location(*d["location"]) if "location" in d else None,
                loc=d.get("loc", 0),
                properties=tuple(sorted(d.get("properties", {}).items())),
            )
            for d in doc["nodes"]
        ]
        edges = [
            SemanticEdge(
                d["from"],
                d["to"],
                d["type"],
                Location(*d["location"]) if "location" in d else None,
            )
            for d in doc["edges"]
        ]
    except MalformedRecordError:
        raise
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        offset = getattr(exc, "pos", 0)
        raise MalformedRecordError(path, offset, str(exc)) from exc
    return nodes, edges


# -- whole-graph save / load -----------------------------------------------

def _assign_records(
    graph: SemanticCodeGraph,
) -> dict[str, tuple[list[SemanticNode], list[SemanticEdge]]]:
    """Group nodes and edges by source file record.

    A located node belongs to its own file's record; external stubs are
    replicated into every record whose edges reference them.
    """
    records: dict[str, tuple[list[SemanticNode], list[SemanticEdge]]] = {}
    for n in graph.nodes.values():
        if not n.file_uri:
            if not n.is_stub:
                raise StorageError(f"node {n.id!r} has no fileUri and is not a stub")
            continue
        records.setdefault(n.file_uri, ([], []))[0].append(n)

    for e in graph.edges:
        src = graph.nodes[e.from_id]
        dst = graph.nodes[e.to_id]
        owner = src.file_uri or dst.file_uri
        if not owner:
            continue  # stub-to-stub edge; nothing to anchor it to
        records.setdefault(owner, ([], []))[1].append(e)

    # replicate referenced stubs into each mentioning record
    for file_uri, (nodes, edges) in records.items():
        present = {n.id for n in nodes}
        for e in edges:
            for endpoint in (e.from_id, e.to_id):
                node = graph.nodes[endpoint]
                if not node.file_uri and endpoint not in present:
                    nodes.append(node)
                    present.add(endpoint)
    return records


def record_path(workspace: Path, file_uri: str, fmt: str = "binary") -> Path:
    suffix = BINARY_SUFFIX if fmt == "binary" else JSON_SUFFIX
    return workspace / METADATA_DIR / (file_uri + suffix)


def save_graph(graph: SemanticCodeGraph, workspace: Path, fmt: str = "binary") -> list[Path]:
    """Write one record per source file; returns written paths sorted.

    Deterministic: re-saving an unchanged graph is byte-identical.
    """
    if fmt not in ("binary", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    workspace = Path(workspace)
    records = _assign_records(graph)
    written: list[Path] = []
    for file_uri in sorted(records):
        nodes, edges = records[file_uri]
        path = record_path(workspace, file_uri, fmt)
        path.parent.mkdir(parents=True, exist_ok=True)
        if fmt == "binary":
            payload = encode_record_binary(nodes, edges)
        else:
            payload = encode_record_json(nodes, edges)
        try:
            path.write_bytes(payload)
        except OSError as exc:
            raise StorageError(f"cannot write {path}: {exc}") from exc
        written.append(path)
    return written


def load_graph(workspace: Path, project_name: str | None = None) -> SemanticCodeGraph:
    """Union of all per-file records under ``.semanticgraphs``.

    Duplicate node ids are merged; a located occurrence wins over
    location-less stubs.
    """
    workspace = Path(workspace)
    meta = workspace / METADATA_DIR
    if not meta.is_dir():
        raise MissingMetadataError(
            f"no {METADATA_DIR} directory under {workspace}; run `scg-cli generate` first"
        )
    nodes: dict[str, SemanticNode] = {}
    edges: dict[tuple[str, str, str], SemanticEdge] = {}
    paths = sorted(
        p for p in meta.rglob("*") if p.suffix in (BINARY_SUFFIX, JSON_SUFFIX) and p.is_file()
    )
    for path in paths:
        data = path.read_bytes()
        if path.suffix == BINARY_SUFFIX:
            rec_nodes, rec_edges = decode_record_binary(data, path)
        else:
            rec_nodes, rec_edges = decode_record_json(data, path)
        for n in rec_nodes:
            existing = nodes.get(n.id)
            if existing is None or (existing.is_stub and not n.is_stub):
                nodes[n.id] = n
        for e in rec_edges:
            edges.setdefault(e.key, e)
    if project_name is None:
        project_name = workspace.resolve().name
    return SemanticCodeGraph(nodes, list(edges.values()), project_name=project_name)
