"""Readers for the on-disk semantic code graph record formats.

Standalone implementation of the record layout (see the scg-cli repository's
``docs/format.md``): binary ``.semanticgraphdb`` files are a ``SCGF`` magic,
a little-endian u16 version, then a stream of records, each ``u8 tag``
(1 = node, 2 = edge), ``u32 length``, payload.  ``.json`` files hold the
same data as ``{"nodes": [...], "edges": [...]}``.
"""
from __future__ import annotations

import json
import struct
from pathlib import Path

MAGIC = b"SCGF"
VERSION = 1
TAG_NODE = 1
TAG_EDGE = 2


class RecordError(ValueError):
    pass


class _Buf:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise RecordError(f"truncated record at byte {self.pos}")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return struct.unpack("<H", self.take(2))[0]

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def string(self) -> str:
        return self.take(self.u32()).decode("utf-8")

    def location(self) -> list[int] | None:
        if self.u8() == 0:
            return None
        return [self.u32() for _ in range(4)]

    @property
    def done(self) -> bool:
        return self.pos >= len(self.data)


def _read_node(buf: _Buf) -> dict:
    node = {
        "id": buf.string(),
        "kind": buf.string(),
        "displayName": buf.string(),
        "packageName": buf.string(),
        "fileUri": buf.string(),
    }
    location = buf.location()
    node["loc"] = buf.u32()
    if location is not None:
        node["location"] = location
    node["properties"] = {buf.string(): buf.string() for _ in range(buf.u32())}
    return node


def _read_edge(buf: _Buf) -> dict:
    edge = {"from": buf.string(), "to": buf.string(), "type": buf.string()}
    location = buf.location()
    if location is not None:
        edge["location"] = location
    return edge


def parse_binary(data: bytes) -> dict:
    buf = _Buf(data)
    if buf.take(4) != MAGIC:
        raise RecordError("bad magic; not a semanticgraphdb file")
    if buf.u16() != VERSION:
        raise RecordError("unsupported record version")
    nodes: list[dict] = []
    edges: list[dict] = []
    while not buf.done:
        tag = buf.u8()
        length = buf.u32()
        payload = _Buf(buf.take(length))
        if tag == TAG_NODE:
            nodes.append(_read_node(payload))
        elif tag == TAG_EDGE:
            edges.append(_read_edge(payload))
        else:
            raise RecordError(f"unknown record tag {tag}")
    return {"nodes": nodes, "edges": edges}


def parse_json(data: bytes) -> dict:
    try:
        doc = json.loads(data)
    except ValueError as exc:
        raise RecordError(f"malformed JSON record: {exc}") from exc
    if not isinstance(doc, dict):
        raise RecordError("JSON record must be an object with nodes/edges")
    return {"nodes": doc.get("nodes", []), "edges": doc.get("edges", [])}


def read_record_file(path: Path) -> dict:
    data = path.read_bytes()
    if path.suffix == ".json":
        record = parse_json(data)
    else:
        record = parse_binary(data)
    record["path"] = str(path)
    return record
