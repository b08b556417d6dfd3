"""Java source extraction: builds the project's semantic code graph.

Two-phase, single pass over the tree: phase 1 parses every file and indexes
all declared symbols; phase 2 resolves supertypes, declared types, calls and
references against that index.  References that cannot be resolved either
bind to external stubs (when the receiver type is known) or are dropped and
counted.

Supported subset: Java 8 syntax.  Lambda bodies contribute to the enclosing
method; anonymous class bodies are skipped; calls resolve by name and arity
(no overload resolution by argument types).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

from ..model import (
    EdgeKind,
    Location,
    NodeKind,
    SemanticCodeGraph,
    SemanticEdge,
    SemanticNode,
)
from .lexer import IDENT, KEYWORD, LexError, PRIMITIVES, Token, tokenize
from .jparser import (
    CompilationUnit,
    FieldDecl,
    MethodDecl,
    ParamDecl,
    ParseError,
    TypeDecl,
    parse_type_ref,
    parse_unit,
    _Cursor,
)

SKIP_DIRS = {"target", "build", ".git", ".semanticgraphs"}

_TYPE_KINDS = {"class": NodeKind.CLASS, "interface": NodeKind.INTERFACE, "enum": NodeKind.ENUM}


@dataclass
class ExtractionReport:
    files_parsed: int = 0
    files_failed: int = 0
    unresolved_references: int = 0
    elapsed_ms: int = 0


@dataclass
class _MethodInfo:
    id: str
    decl: MethodDecl
    owner: "_TypeInfo"
    arity: int
    return_type: str | None
    params: dict[str, tuple[str, str | None]] = field(default_factory=dict)  # name -> (node id, type)
    type_params: dict[str, str] = field(default_factory=dict)  # name -> node id


@dataclass
class _TypeInfo:
    id: str
    decl: TypeDecl
    unit: CompilationUnit
    file_uri: str
    enclosing: "_TypeInfo | None" = None
    nested: dict[str, "_TypeInfo"] = field(default_factory=dict)
    fields: dict[str, tuple[str, str | None]] = field(default_factory=dict)  # name -> (node id, type)
    methods: dict[str, list[_MethodInfo]] = field(default_factory=dict)     # declaration order
    type_params: dict[str, str] = field(default_factory=dict)
    resolved_supertypes: list[tuple[str, bool]] = field(default_factory=list)  # (id, in_project)


class _Builder:
    """Accumulates nodes and edges with (from, to, type) dedup."""

    def __init__(self) -> None:
        self.nodes: dict[str, SemanticNode] = {}
        self.edges: dict[tuple[str, str, str], SemanticEdge] = {}
        self.unresolved = 0

    def add_node(self, node: SemanticNode) -> None:
        existing = self.nodes.get(node.id)
        if existing is None or (existing.is_stub and not node.is_stub):
            self.nodes[node.id] = node

    def add_edge(self, from_id: str, to_id: str, type_: str, location: Location | None = None) -> None:
        key = (from_id, to_id, type_)
        if key not in self.edges:
            self.edges[key] = SemanticEdge(from_id, to_id, type_, location)

    def stub(self, node_id: str, kind: str = NodeKind.CLASS) -> str:
        if node_id not in self.nodes:
            display = node_id.rstrip(".").split(".")[-1].split("(")[0] or node_id
            self.add_node(SemanticNode(id=node_id, kind=kind, display_name=display))
        return node_id


def _span(start: Token, end: Token) -> tuple[Location, int]:
    loc = Location(start.line, start.col, end.line, end.end_col)
    return loc, loc.end_line - loc.start_line + 1


def _token_loc(tok: Token) -> Location:
    return Location(tok.line, tok.col, tok.line, tok.end_col)


# -- phase 1: declaration ---------------------------------------------------

class _Extraction:
    def __init__(self, project_name: str) -> None:
        self.project_name = project_name
        self.builder = _Builder()
        self.index: dict[str, _TypeInfo] = {}  # fq type id -> info
        self.units: list[tuple[str, CompilationUnit, list[_TypeInfo]]] = []

    # node id helpers ------------------------------------------------------

    @staticmethod
    def _method_id(owner_id: str, name: str, ordinal: int) -> str:
        suffix = f"(+{ordinal})" if ordinal else "()"
        return f"{owner_id}.{name}{suffix}."

    def declare_file(self, file_uri: str, text: str, unit: CompilationUnit) -> None:
        lines = text.split("\n")
        end_line = len(lines) - 1
        file_loc = Location(0, 0, end_line, len(lines[-1]))
        self.builder.add_node(
            SemanticNode(
                id=file_uri,
                kind=NodeKind.FILE,
                display_name=Path(file_uri).name,
                package_name=unit.package,
                file_uri=file_uri,
                location=file_loc,
                loc=end_line + 1,
            )
        )
        infos = [self._declare_type(t, unit, file_uri, None) for t in unit.types]
        self.units.append((file_uri, unit, infos))

    def _declare_type(
        self, decl: TypeDecl, unit: CompilationUnit, file_uri: str, enclosing: _TypeInfo | None
    ) -> _TypeInfo:
        if enclosing is not None:
            type_id = f"{enclosing.id}.{decl.name}"
            parent_id = enclosing.id
        else:
            type_id = f"{unit.package}.{decl.name}" if unit.package else decl.name
            parent_id = file_uri
        info = _TypeInfo(type_id, decl, unit, file_uri, enclosing=enclosing)
        self.index[type_id] = info
        assert decl.start is not None and decl.end is not None
        loc, span = _span(decl.start, decl.end)
        self.builder.add_node(
            SemanticNode(
                id=type_id,
                kind=_TYPE_KINDS[decl.kind],
                display_name=decl.name,
                package_name=unit.package,
                file_uri=file_uri,
                location=loc,
                loc=span,
            )
        )
        self.builder.add_edge(parent_id, type_id, EdgeKind.DECLARATION)

        for name, tok in decl.type_params:
            tp_id = f"{type_id}.{name}"
            info.type_params[name] = tp_id
            self._leaf(tp_id, NodeKind.TYPE_PARAMETER, name, unit, file_uri, tok, tok)
            self.builder.add_edge(type_id, tp_id, EdgeKind.DECLARATION)

        for fdecl in decl.fields:
            fid = f"{type_id}.{fdecl.name}."
            info.fields.setdefault(fdecl.name, (fid, fdecl.type_name))
            self._leaf(fid, NodeKind.FIELD, fdecl.name, unit, file_uri, fdecl.start, fdecl.end)
            self.builder.add_edge(type_id, fid, EdgeKind.DECLARATION)
        for cname, ctok in decl.enum_constants:
            cid = f"{type_id}.{cname}."
            info.fields.setdefault(cname, (cid, decl.name))
            self._leaf(cid, NodeKind.FIELD, cname, unit, file_uri, ctok, ctok)
            self.builder.add_edge(type_id, cid, EdgeKind.DECLARATION)

        name_counts: dict[str, int] = {}
        for mdecl in decl.methods:
            ordinal = name_counts.get(mdecl.name, 0)
            name_counts[mdecl.name] = ordinal + 1
            mid = self._method_id(type_id, mdecl.name, ordinal)
            minfo = _MethodInfo(mid, mdecl, info, len(mdecl.params), mdecl.return_type)
            info.methods.setdefault(mdecl.name, []).append(minfo)
            kind = NodeKind.CONSTRUCTOR if mdecl.is_constructor else NodeKind.METHOD
            loc2, span2 = _span(mdecl.start, mdecl.end)
            self.builder.add_node(
                SemanticNode(
                    id=mid,
                    kind=kind,
                    display_name=f"{mdecl.name}()",
                    package_name=unit.package,
                    file_uri=file_uri,
                    location=loc2,
                    loc=span2,
                )
            )
            self.builder.add_edge(type_id, mid, EdgeKind.DECLARATION)
            for name, tok in mdecl.type_params:
                tp_id = f"{mid}{name}"
                minfo.type_params[name] = tp_id
                self._leaf(tp_id, NodeKind.TYPE_PARAMETER, name, unit, file_uri, tok, tok)
                self.builder.add_edge(mid, tp_id, EdgeKind.DECLARATION)
            for p in mdecl.params:
                pid = f"{mid}{p.name}?{p.token.line}"
                minfo.params[p.name] = (pid, p.type_name)
                self._leaf(pid, NodeKind.PARAMETER, p.name, unit, file_uri, p.token, p.token)
                self.builder.add_edge(mid, pid, EdgeKind.DECLARATION)

        for nested in decl.nested:
            info.nested[nested.name] = self._declare_type(nested, unit, file_uri, info)
        return info

    def _leaf(
        self,
        node_id: str,
        kind: str,
        name: str,
        unit: CompilationUnit,
        file_uri: str,
        start: Token,
        end: Token,
    ) -> None:
        loc, span = _span(start, end)
        self.builder.add_node(
            SemanticNode(
                id=node_id,
                kind=kind,
                display_name=name,
                package_name=unit.package,
                file_uri=file_uri,
                location=loc,
                loc=span,
            )
        )

    # phase 2: resolution --------------------------------------------------

    def resolve_all(self) -> None:
        for _, _, infos in self.units:
            for info in infos:
                self._resolve_supertypes_rec(info)
        for _, _, infos in self.units:
            for info in infos:
                self._resolve_type_rec(info)

    def _resolve_supertypes_rec(self, info: _TypeInfo) -> None:
        for name in info.decl.supertypes:
            resolved = self.resolve_type_name(name, info, None)
            if resolved is None:
                self.builder.unresolved += 1
                continue
            type_id, in_project = resolved
            if not in_project:
                self.builder.stub(type_id)
            info.resolved_supertypes.append((type_id, in_project))
            self.builder.add_edge(info.id, type_id, EdgeKind.EXTEND)
        for nested in info.nested.values():
            self._resolve_supertypes_rec(nested)

    def _resolve_type_rec(self, info: _TypeInfo) -> None:
        for fname, (fid, ftype) in info.fields.items():
            self._type_edge(fid, ftype, info, None)
        for overloads in info.methods.values():
            for minfo in overloads:
                if not minfo.decl.is_constructor:
                    self._type_edge(minfo.id, minfo.return_type, info, minfo)
                for pname, (pid, ptype) in minfo.params.items():
                    self._type_edge(pid, ptype, info, minfo)
                self._resolve_override(minfo, info)
                if minfo.decl.body:
                    _BodyScanner(self, info, minfo).scan(minfo.decl.body)
        for nested in info.nested.values():
            self._resolve_type_rec(nested)

    def _type_edge(
        self, from_id: str, type_name: str | None, info: _TypeInfo, minfo: _MethodInfo | None
    ) -> None:
        if type_name is None or type_name in PRIMITIVES or type_name == "var":
            return
        resolved = self.resolve_type_name(type_name, info, minfo)
        if resolved is None:
            self.builder.unresolved += 1
            return
        type_id, in_project = resolved
        if not in_project:
            self.builder.stub(type_id)
        self.builder.add_edge(from_id, type_id, EdgeKind.TYPE)

    def _resolve_override(self, minfo: _MethodInfo, info: _TypeInfo) -> None:
        if minfo.decl.is_constructor:
            return
        for sup in self._project_supertype_chain(info):
            for cand in sup.methods.get(minfo.decl.name, []):
                if cand.arity == minfo.arity:
                    self.builder.add_edge(minfo.id, cand.id, EdgeKind.OVERRIDE)
                    return

    def _project_supertype_chain(self, info: _TypeInfo) -> list[_TypeInfo]:
        """Project supertypes in BFS order, nearest first."""
        out: list[_TypeInfo] = []
        seen = {info.id}
        frontier = [info]
        while frontier:
            nxt: list[_TypeInfo] = []
            for t in frontier:
                for sid, in_project in t.resolved_supertypes:
                    if in_project and sid not in seen:
                        seen.add(sid)
                        sup = self.index[sid]
                        out.append(sup)
                        nxt.append(sup)
            frontier = nxt
        return out

    # name resolution ------------------------------------------------------

    def resolve_type_name(
        self, name: str, info: _TypeInfo, minfo: _MethodInfo | None
    ) -> tuple[str, bool] | None:
        """Resolve a type name as written; (id, in_project) or None."""
        if "." in name:
            if name in self.index:
                return name, True
            pkg = info.unit.package
            if pkg and f"{pkg}.{name}" in self.index:
                return f"{pkg}.{name}", True
            head, rest = name.split(".", 1)
            base = self._resolve_simple(head, info, minfo)
            if base is not None:
                base_id, in_project = base
                candidate = f"{base_id}.{rest}"
                if candidate in self.index:
                    return candidate, True
                return candidate, False
            return name, False
        return self._resolve_simple(name, info, minfo)

    def _resolve_simple(
        self, name: str, info: _TypeInfo, minfo: _MethodInfo | None
    ) -> tuple[str, bool] | None:
        if minfo is not None and name in minfo.type_params:
            return minfo.type_params[name], True
        cur: _TypeInfo | None = info
        while cur is not None:
            if name in cur.type_params:
                return cur.type_params[name], True
            if name == cur.decl.name:
                return cur.id, True
            if name in cur.nested:
                return cur.nested[name].id, True
            cur = cur.enclosing
        # inherited nested types
        for sup in self._project_supertype_chain(info):
            if name in sup.nested:
                return sup.nested[name].id, True
        unit = info.unit
        for imp in unit.imports:
            if imp.rsplit(".", 1)[-1] == name:
                return imp, imp in self.index
        for pkg in unit.wildcard_imports:
            candidate = f"{pkg}.{name}"
            if candidate in self.index:
                return candidate, True
        pkg = unit.package
        if pkg:
            candidate = f"{pkg}.{name}"
            if candidate in self.index:
                return candidate, True
        elif name in self.index:
            return name, True
        # other top-level types in the same file (different package corner case)
        if name in self.index:
            return name, True
        return name, False

    # member lookup (with project inheritance) -----------------------------

    def find_field(self, name: str, owner: _TypeInfo) -> tuple[str, str | None] | None:
        for t in [owner, *self._project_supertype_chain(owner)]:
            if name in t.fields:
                return t.fields[name]
        return None

    def find_method(self, name: str, arity: int, owner: _TypeInfo) -> _MethodInfo | None:
        """Name+arity lookup; ambiguity resolves to the first declaration."""
        for t in [owner, *self._project_supertype_chain(owner)]:
            overloads = t.methods.get(name, [])
            for cand in overloads:
                if cand.arity == arity:
                    return cand
            if overloads:
                return overloads[0]
        return None


# -- phase 2: body scanning -------------------------------------------------

_STATEMENT_PREV = {";", "{", "}", "(", ":"}
_DECL_FOLLOW = {"=", ";", ",", ":", ")"}


class _BodyScanner:
    def __init__(self, ext: _Extraction, info: _TypeInfo, minfo: _MethodInfo) -> None:
        self.ext = ext
        self.builder = ext.builder
        self.info = info
        self.minfo = minfo
        self.scopes: list[dict[str, tuple[str, str | None]]] = [dict(minfo.params)]
        self.local_ids: set[str] = set()
        self.skip_positions: set[int] = set()

    # scope helpers --------------------------------------------------------

    def _lookup_var(self, name: str) -> tuple[str, str | None] | None:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return None

    def _register_local(self, name_tok: Token, type_name: str | None) -> None:
        base = f"{self.minfo.id}{name_tok.text}?{name_tok.line}"
        local_id = base
        bump = 1
        while local_id in self.local_ids:
            local_id = f"{base}+{bump}"
            bump += 1
        self.local_ids.add(local_id)
        self.ext._leaf(
            local_id,
            NodeKind.LOCAL_VARIABLE,
            name_tok.text,
            self.info.unit,
            self.info.file_uri,
            name_tok,
            name_tok,
        )
        self.builder.add_edge(self.minfo.id, local_id, EdgeKind.DECLARATION)
        self.ext._type_edge(local_id, type_name, self.info, self.minfo)
        self.scopes[-1][name_tok.text] = (local_id, type_name)

    # main loop ------------------------------------------------------------

    def scan(self, tokens: list[Token]) -> None:
        i = 0
        n = len(tokens)
        in_decl_stmt = False
        decl_type: str | None = None
        depth_stack = 0
        decl_depth = 0
        while i < n:
            tok = tokens[i]
            text = tok.text
            if text == "{":
                self.scopes.append({})
                i += 1
                continue
            if text == "}":
                if len(self.scopes) > 1:
                    self.scopes.pop()
                i += 1
                continue
            if text == "(":
                depth_stack += 1
                i += 1
                continue
            if text == ")":
                depth_stack -= 1
                i += 1
                continue
            if text == ";" :
                in_decl_stmt = False
                i += 1
                continue
            if text == "new":
                i = self._handle_new(tokens, i)
                continue
            if in_decl_stmt and text == "," and depth_stack == decl_depth:
                nxt = tokens[i + 1] if i + 1 < n else None
                after = tokens[i + 2] if i + 2 < n else None
                if nxt is not None and nxt.kind == IDENT and after is not None and after.text in ("=", ",", ";"):
                    self._register_local(nxt, decl_type)
                    self.skip_positions.add(i + 1)
                i += 1
                continue
            if tok.kind == KEYWORD and text in PRIMITIVES:
                prev = tokens[i - 1] if i > 0 else None
                decl = self._try_local_decl(tokens, i, prev)
                if decl is not None:
                    i, decl_type = decl
                    in_decl_stmt = True
                    decl_depth = depth_stack
                else:
                    i += 1
                continue
            if tok.kind == KEYWORD and text in ("this", "super"):
                nxt = tokens[i + 1] if i + 1 < n else None
                if nxt is not None and nxt.text in (".", "("):
                    i = self._handle_chain(tokens, i)
                    continue
                i += 1
                continue
            if tok.kind == IDENT:
                if i in self.skip_positions:
                    i += 1
                    continue
                prev = tokens[i - 1] if i > 0 else None
                if prev is not None and prev.text == ".":
                    i += 1
                    continue
                if prev is not None and prev.text == ":" and i > 1 and tokens[i - 2].text == ":":
                    i += 1  # method reference target
                    continue
                # lambda parameter: `x -> ...`
                if (
                    i + 2 < n
                    and tokens[i + 1].text == "-"
                    and tokens[i + 2].text == ">"
                ):
                    self.scopes[-1][text] = (f"{self.minfo.id}{text}?{tok.line}", None)
                    i += 3
                    continue
                decl = self._try_local_decl(tokens, i, prev)
                if decl is not None:
                    i, decl_type = decl
                    in_decl_stmt = True
                    decl_depth = depth_stack
                    continue
                i = self._handle_chain(tokens, i)
                continue
            i += 1

    # declaration detection -------------------------------------------------

    def _try_local_decl(
        self, tokens: list[Token], i: int, prev: Token | None
    ) -> tuple[int, str | None] | None:
        if prev is not None and prev.text not in _STATEMENT_PREV and prev.text not in ("final", "else", "do"):
            return None
        cur = _Cursor(tokens)
        cur.i = i
        try:
            type_name = parse_type_ref(cur)
        except ParseError:
            return None
        if type_name is None:
            return None
        name_tok = cur.peek()
        if name_tok is None or name_tok.kind != IDENT:
            return None
        follow = cur.peek(1)
        if follow is None or follow.text not in _DECL_FOLLOW:
            return None
        cur.next()
        while cur.at("[") and cur.peek(1) is not None and cur.peek(1).text == "]":
            cur.next()
            cur.next()
        self._register_local(name_tok, type_name)
        return cur.i, type_name

    # new-expressions -------------------------------------------------------

    def _handle_new(self, tokens: list[Token], i: int) -> int:
        cur = _Cursor(tokens)
        cur.i = i + 1
        type_name = None
        try:
            type_name = parse_type_ref(cur)
        except ParseError:
            pass
        if type_name is None:
            return i + 1
        # keep the main loop off the type-name tokens
        for pos in range(i + 1, cur.i):
            self.skip_positions.add(pos)
        nxt = cur.peek()
        if nxt is None:
            return cur.i
        if nxt.text == "[":
            return cur.i  # array creation; brackets scanned normally
        if nxt.text != "(":
            return cur.i
        arity = self._call_arity(tokens, cur.i)
        close = self._matching_paren(tokens, cur.i)
        resolved = self.ext.resolve_type_name(type_name, self.info, self.minfo)
        loc = _token_loc(tokens[i])
        if resolved is not None:
            type_id, in_project = resolved
            if in_project and type_id in self.ext.index:
                target = self.ext.index[type_id]
                simple = target.decl.name
                ctor = None
                for cand in target.methods.get(simple, []):
                    if cand.decl.is_constructor and cand.arity == arity:
                        ctor = cand
                        break
                if ctor is None:
                    ctor = next(
                        (c for c in target.methods.get(simple, []) if c.decl.is_constructor),
                        None,
                    )
                if ctor is not None:
                    self.builder.add_edge(self.minfo.id, ctor.id, EdgeKind.CALL, loc)
            elif not in_project:
                simple = type_id.split(".")[-1]
                stub_id = self.builder.stub(f"{type_id}.{simple}().", NodeKind.CONSTRUCTOR)
                self.builder.stub(type_id)
                self.builder.add_edge(self.minfo.id, stub_id, EdgeKind.CALL, loc)
        # anonymous class body: skip it entirely
        j = close + 1
        if j < len(tokens) and tokens[j].text == "{":
            depth = 0
            while j < len(tokens):
                if tokens[j].text == "{":
                    depth += 1
                elif tokens[j].text == "}":
                    depth -= 1
                    if depth == 0:
                        return j + 1
                j += 1
            return j
        return i + 1  # args scanned by the main loop

    # chains ----------------------------------------------------------------

    @staticmethod
    def _matching_paren(tokens: list[Token], open_i: int) -> int:
        depth = 0
        for j in range(open_i, len(tokens)):
            if tokens[j].text == "(":
                depth += 1
            elif tokens[j].text == ")":
                depth -= 1
                if depth == 0:
                    return j
        return len(tokens) - 1

    @classmethod
    def _call_arity(cls, tokens: list[Token], open_i: int) -> int:
        close = cls._matching_paren(tokens, open_i)
        if close == open_i + 1:
            return 0
        arity = 1
        depth = 0
        for j in range(open_i, close):
            t = tokens[j].text
            if t in "([{":
                depth += 1
            elif t in ")]}":
                depth -= 1
            elif t == "," and depth == 1:
                arity += 1
        return arity

    def _chain_segments(
        self, tokens: list[Token], i: int
    ) -> tuple[list[tuple[Token, bool, int]], int]:
        """Maximal `a.b(...).c` lookahead from i; returns segments and resume index."""
        segments: list[tuple[Token, bool, int]] = []
        j = i
        n = len(tokens)
        while j < n and (tokens[j].kind == IDENT or tokens[j].text in ("this", "super")):
            tok = tokens[j]
            is_call = j + 1 < n and tokens[j + 1].text == "("
            arity = self._call_arity(tokens, j + 1) if is_call else 0
            segments.append((tok, is_call, arity))
            j = self._matching_paren(tokens, j + 1) + 1 if is_call else j + 1
            if j < n and tokens[j].text == "." and j + 1 < n and tokens[j + 1].kind == IDENT:
                j += 1
            else:
                break
        return segments, i + 1

    def _handle_chain(self, tokens: list[Token], i: int) -> int:
        segments, resume = self._chain_segments(tokens, i)
        if not segments:
            return i + 1
        ctx: _TypeInfo | str | None = None  # project info, external id, or unknown
        for idx, (tok, is_call, arity) in enumerate(segments):
            first = idx == 0
            loc = _token_loc(tok)
            if first and tok.text == "this":
                ctx = self.info
                if is_call:  # this(...) constructor delegation
                    self._emit_call(self.info, tok.text, arity, loc, ctor=True)
                continue
            if first and tok.text == "super":
                proj = [s for s, in_p in self.info.resolved_supertypes if in_p]
                ctx = self.ext.index[proj[0]] if proj else None
                if ctx is None:
                    ext_sup = [s for s, in_p in self.info.resolved_supertypes if not in_p]
                    ctx = ext_sup[0] if ext_sup else None
                continue
            if first:
                if is_call:
                    ctx = self._emit_call(self.info, tok.text, arity, loc, enclosing_walk=True)
                    continue
                var = self._lookup_var(tok.text)
                if var is not None:
                    var_id, var_type = var
                    if var_id in self.builder.nodes:
                        self.builder.add_edge(self.minfo.id, var_id, EdgeKind.REFERENCE, loc)
                    ctx = self._resolve_ctx(var_type)
                    continue
                fld = self._find_field_enclosing(tok.text)
                if fld is not None:
                    fld_id, fld_type = fld
                    self.builder.add_edge(self.minfo.id, fld_id, EdgeKind.REFERENCE, loc)
                    ctx = self._resolve_ctx(fld_type)
                    continue
                resolved = self.ext._resolve_simple(tok.text, self.info, self.minfo)
                if resolved is not None and resolved[1]:
                    ctx = self.ext.index.get(resolved[0])
                    continue
                ctx = self._resolve_dotted_head(segments, idx)
                if ctx is None and len(segments) == 1:
                    self.builder.unresolved += 1
                if isinstance(ctx, (str, _TypeInfo)):
                    continue
                if ctx is None and len(segments) > 1:
                    self.builder.unresolved += 1
                    break
                continue
            # subsequent segments
            if ctx is None:
                break
            if isinstance(ctx, str):  # external receiver type
                if is_call:
                    stub_id = self.builder.stub(f"{ctx}.{tok.text}().", NodeKind.METHOD)
                    self.builder.add_edge(self.minfo.id, stub_id, EdgeKind.CALL, loc)
                ctx = None
                continue
            if is_call:
                ctx = self._emit_call(ctx, tok.text, arity, loc)
            else:
                fld = self.ext.find_field(tok.text, ctx)
                if fld is not None:
                    self.builder.add_edge(self.minfo.id, fld[0], EdgeKind.REFERENCE, loc)
                    ctx = self._resolve_ctx(fld[1])
                else:
                    nested = ctx.nested.get(tok.text)
                    if nested is not None:
                        ctx = nested
                    else:
                        ctx = None
        return resume

    def _resolve_dotted_head(
        self, segments: list[tuple[Token, bool, int]], idx: int
    ) -> _TypeInfo | str | None:
        """Try `pkg.path.Type` prefixes for fully-qualified references."""
        names = []
        for tok, is_call, _ in segments:
            if is_call:
                break
            names.append(tok.text)
        for end in range(len(names), 0, -1):
            dotted = ".".join(names[:end])
            if dotted in self.ext.index:
                return self.ext.index[dotted]
        # assume external when some segment looks like a class name
        for end, seg in enumerate(names, start=1):
            if seg[:1].isupper():
                return ".".join(names[:end])
        return None

    def _resolve_ctx(self, type_name: str | None) -> _TypeInfo | str | None:
        if type_name is None or type_name in PRIMITIVES:
            return None
        resolved = self.ext.resolve_type_name(type_name, self.info, self.minfo)
        if resolved is None:
            return None
        type_id, in_project = resolved
        if in_project:
            return self.ext.index.get(type_id)  # type params resolve to None ctx
        return type_id

    def _find_field_enclosing(self, name: str) -> tuple[str, str | None] | None:
        cur: _TypeInfo | None = self.info
        while cur is not None:
            found = self.ext.find_field(name, cur)
            if found is not None:
                return found
            cur = cur.enclosing
        return None

    def _emit_call(
        self,
        owner: _TypeInfo,
        name: str,
        arity: int,
        loc: Location,
        ctor: bool = False,
        enclosing_walk: bool = False,
    ) -> _TypeInfo | str | None:
        if ctor:
            name = owner.decl.name
        if enclosing_walk:
            cur: _TypeInfo | None = owner
            target = None
            while cur is not None:
                target = self.ext.find_method(name, arity, cur)
                if target is not None:
                    break
                cur = cur.enclosing
        else:
            target = self.ext.find_method(name, arity, owner)
        if target is None:
            self.builder.unresolved += 1
            return None
        self.builder.add_edge(self.minfo.id, target.id, EdgeKind.CALL, loc)
        return self._resolve_ctx(target.return_type)


# -- driver -----------------------------------------------------------------

def _java_files(workspace: Path) -> list[Path]:
    out = []
    for path in sorted(workspace.rglob("*.java")):
        rel = path.relative_to(workspace)
        if any(part in SKIP_DIRS for part in rel.parts):
            continue
        out.append(path)
    return out


def extract_project(workspace: Path) -> tuple[SemanticCodeGraph, ExtractionReport]:
    """Parse every .java file under workspace into one semantic code graph."""
    workspace = Path(workspace)
    started = time.monotonic()
    report = ExtractionReport()
    ext = _Extraction(workspace.resolve().name)
    parsed_units: list[tuple[str, str, CompilationUnit]] = []
    for path in _java_files(workspace):
        file_uri = path.relative_to(workspace).as_posix()
        try:
            text = path.read_text(encoding="utf-8", errors="replace")
            unit = parse_unit(tokenize(text))
        except (LexError, ParseError):
            report.files_failed += 1
            continue
        report.files_parsed += 1
        parsed_units.append((file_uri, text, unit))
    for file_uri, text, unit in parsed_units:
        ext.declare_file(file_uri, text, unit)
    ext.resolve_all()
    report.unresolved_references = ext.builder.unresolved
    report.elapsed_ms = int((time.monotonic() - started) * 1000)
    graph = SemanticCodeGraph(
        ext.builder.nodes, list(ext.builder.edges.values()), project_name=workspace.resolve().name
    )
    return graph, report
