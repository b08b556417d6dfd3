"""Structural parser: compilation unit -> declaration tree.

Parses package/import headers and type/member declarations; method bodies
are kept as raw token slices for the resolution pass.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .lexer import IDENT, KEYWORD, MODIFIERS, PRIMITIVES, Token

OPEN_TO_CLOSE = {"{": "}", "(": ")", "[": "]"}


class ParseError(ValueError):
    def __init__(self, token: Token | None, reason: str) -> None:
        where = f"line {token.line + 1}" if token else "end of file"
        super().__init__(f"{where}: {reason}")
        self.token = token


@dataclass
class ParamDecl:
    name: str
    type_name: str | None
    token: Token


@dataclass
class MethodDecl:
    name: str
    is_constructor: bool
    params: list[ParamDecl]
    return_type: str | None
    type_params: list[tuple[str, Token]]
    start: Token
    end: Token
    body: list[Token]  # tokens between the braces, empty for abstract methods


@dataclass
class FieldDecl:
    name: str
    type_name: str | None
    start: Token
    end: Token
    name_token: Token


@dataclass
class TypeDecl:
    name: str
    kind: str  # "class" | "interface" | "enum"
    supertypes: list[str]
    type_params: list[tuple[str, Token]]
    fields: list[FieldDecl] = field(default_factory=list)
    methods: list[MethodDecl] = field(default_factory=list)
    nested: list["TypeDecl"] = field(default_factory=list)
    enum_constants: list[tuple[str, Token]] = field(default_factory=list)
    start: Token | None = None
    end: Token | None = None


@dataclass
class CompilationUnit:
    package: str = ""
    imports: list[str] = field(default_factory=list)          # explicit, fq
    wildcard_imports: list[str] = field(default_factory=list)  # package prefixes
    types: list[TypeDecl] = field(default_factory=list)


class _Cursor:
    def __init__(self, tokens: list[Token]) -> None:
        self.tokens = tokens
        self.i = 0

    def peek(self, offset: int = 0) -> Token | None:
        j = self.i + offset
        return self.tokens[j] if 0 <= j < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError(None, "unexpected end of file")
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.text == text

    def at_kind(self, kind: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == kind

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok is None or tok.text != text:
            raise ParseError(tok, f"expected {text!r}, found {tok.text if tok else 'EOF'!r}")
        return self.next()

    def skip_balanced(self, open_text: str) -> Token:
        """Consume from the opening bracket through its match; returns closer."""
        opener = self.expect(open_text)
        close = OPEN_TO_CLOSE[open_text]
        depth = 1
        while depth:
            tok = self.next()
            if tok.text == open_text:
                depth += 1
            elif tok.text == close:
                depth -= 1
        return tok

    def skip_generics(self) -> None:
        """Consume a balanced <...> group."""
        self.expect("<")
        depth = 1
        while depth:
            tok = self.next()
            if tok.text == "<":
                depth += 1
            elif tok.text == ">":
                depth -= 1

    def skip_annotations_and_modifiers(self) -> None:
        while True:
            tok = self.peek()
            if tok is None:
                return
            if tok.text == "@":
                self.next()
                # dotted annotation name
                self.next()
                while self.at("."):
                    self.next()
                    self.next()
                if self.at("("):
                    self.skip_balanced("(")
                continue
            if tok.text in MODIFIERS:
                self.next()
                continue
            return


def _parse_dotted(cur: _Cursor) -> str:
    parts = [cur.next().text]
    while cur.at(".") and cur.peek(1) is not None and cur.peek(1).kind in (IDENT, KEYWORD):
        cur.next()
        parts.append(cur.next().text)
    return ".".join(parts)


def parse_type_ref(cur: _Cursor) -> str | None:
    """Type name as written, generics and array brackets stripped.

    Returns None for unsupported shapes (e.g. a lone '?').
    """
    tok = cur.peek()
    if tok is None:
        return None
    if tok.kind == KEYWORD and tok.text not in PRIMITIVES:
        return None
    if tok.kind not in (IDENT, KEYWORD):
        return None
    name_parts = [cur.next().text]
    while cur.at(".") and cur.peek(1) is not None and cur.peek(1).kind == IDENT:
        cur.next()
        name_parts.append(cur.next().text)
    if cur.at("<"):
        cur.skip_generics()
    while cur.at("[") and cur.peek(1) is not None and cur.peek(1).text == "]":
        cur.next()
        cur.next()
    # varargs ellipsis
    while cur.at(".") and cur.peek(1) is not None and cur.peek(1).text == ".":
        cur.next()
    return ".".join(name_parts)


def _parse_type_params(cur: _Cursor) -> list[tuple[str, Token]]:
    """Names declared in a <...> group, e.g. <T, K extends X>."""
    out: list[tuple[str, Token]] = []
    cur.expect("<")
    depth = 1
    expect_name = True
    while depth:
        tok = cur.next()
        if tok.text == "<":
            depth += 1
        elif tok.text == ">":
            depth -= 1
        elif depth == 1 and tok.text == ",":
            expect_name = True
        elif depth == 1 and expect_name and tok.kind == IDENT:
            out.append((tok.text, tok))
            expect_name = False
    return out


def _parse_params(cur: _Cursor) -> list[ParamDecl]:
    params: list[ParamDecl] = []
    cur.expect("(")
    while not cur.at(")"):
        cur.skip_annotations_and_modifiers()
        if cur.at(")"):
            break
        type_name = parse_type_ref(cur)
        tok = cur.peek()
        if tok is not None and tok.kind == IDENT:
            cur.next()
            while cur.at("[") and cur.peek(1) is not None and cur.peek(1).text == "]":
                cur.next()
                cur.next()
            params.append(ParamDecl(tok.text, type_name, tok))
        elif type_name is not None and tok is not None and tok.text in (",", ")"):
            # receiver-less shapes like `int` in an interface stub; treat the
            # type as the name-less parameter and skip
            pass
        if cur.at(","):
            cur.next()
        elif not cur.at(")"):
            # unexpected token inside parameter list; skip it defensively
            cur.next()
    cur.expect(")")
    return params


def _collect_body(cur: _Cursor) -> tuple[list[Token], Token]:
    start_i = cur.i
    closer = cur.skip_balanced("{")
    return cur.tokens[start_i + 1 : cur.i - 1], closer


def _parse_enum_constants(cur: _Cursor, decl: TypeDecl) -> None:
    while True:
        tok = cur.peek()
        if tok is None or tok.text in (";", "}"):
            if tok is not None and tok.text == ";":
                cur.next()
            return
        if tok.text == "@":
            cur.skip_annotations_and_modifiers()
            continue
        if tok.kind != IDENT:
            return
        cur.next()
        decl.enum_constants.append((tok.text, tok))
        if cur.at("("):
            cur.skip_balanced("(")
        if cur.at("{"):
            cur.skip_balanced("{")
        if cur.at(","):
            cur.next()
        else:
            if cur.at(";"):
                cur.next()
            return


def _parse_member(cur: _Cursor, decl: TypeDecl) -> None:
    start_tok = cur.peek()
    assert start_tok is not None
    cur.skip_annotations_and_modifiers()
    tok = cur.peek()
    if tok is None:
        return
    if tok.text == ";":
        cur.next()
        return
    if tok.text == "{":  # instance/static initializer
        cur.skip_balanced("{")
        return
    if tok.text in ("class", "interface", "enum"):
        decl.nested.append(parse_type_decl(cur, start_tok))
        return
    type_params: list[tuple[str, Token]] = []
    if tok.text == "<":
        type_params = _parse_type_params(cur)
        cur.skip_annotations_and_modifiers()

    # constructor: Name followed directly by '('
    tok = cur.peek()
    if (
        tok is not None
        and tok.kind == IDENT
        and tok.text == decl.name
        and cur.peek(1) is not None
        and cur.peek(1).text == "("
    ):
        cur.next()
        params = _parse_params(cur)
        end_tok, body = _finish_method(cur)
        decl.methods.append(
            MethodDecl(decl.name, True, params, None, type_params, start_tok, end_tok, body)
        )
        return

    return_type = parse_type_ref(cur)
    if return_type is None:
        # unsupported member shape: skip to end of statement or block
        _skip_statement(cur)
        return
    tok = cur.peek()
    if tok is None:
        return
    if tok.kind == IDENT and cur.peek(1) is not None and cur.peek(1).text == "(":
        name_tok = cur.next()
        params = _parse_params(cur)
        end_tok, body = _finish_method(cur)
        decl.methods.append(
            MethodDecl(
                name_tok.text, False, params, return_type, type_params, start_tok, end_tok, body
            )
        )
        return
    # field declarator list
    while True:
        tok = cur.peek()
        if tok is None or tok.kind != IDENT:
            _skip_statement(cur)
            return
        name_tok = cur.next()
        while cur.at("[") and cur.peek(1) is not None and cur.peek(1).text == "]":
            cur.next()
            cur.next()
        end_tok = name_tok
        if cur.at("="):
            cur.next()
            end_tok = _skip_initializer(cur)
        decl.fields.append(FieldDecl(name_tok.text, return_type, start_tok, end_tok, name_tok))
        if cur.at(","):
            cur.next()
            continue
        if cur.at(";"):
            end = cur.next()
            decl.fields[-1].end = end
            break
        _skip_statement(cur)
        break


def _skip_initializer(cur: _Cursor) -> Token:
    """Consume an initializer expression up to a top-level ',' or ';'."""
    last = cur.peek()
    while True:
        tok = cur.peek()
        if tok is None:
            raise ParseError(None, "unterminated field initializer")
        if tok.text in (",", ";"):
            return last if last is not None else tok
        if tok.text in OPEN_TO_CLOSE:
            last = cur.skip_balanced(tok.text)
        else:
            last = cur.next()


def _skip_statement(cur: _Cursor) -> None:
    while True:
        tok = cur.peek()
        if tok is None:
            return
        if tok.text == ";":
            cur.next()
            return
        if tok.text == "{":
            cur.skip_balanced("{")
            return
        if tok.text == "}":
            return
        if tok.text in ("(", "["):
            cur.skip_balanced(tok.text)
        else:
            cur.next()


def _finish_method(cur: _Cursor) -> tuple[Token, list[Token]]:
    """Consume throws clause and body (or ';') after the parameter list."""
    while True:
        tok = cur.peek()
        if tok is None:
            raise ParseError(None, "unterminated method declaration")
        if tok.text == "{":
            body, closer = _collect_body(cur)
            return closer, body
        if tok.text == ";":
            return cur.next(), []
        if tok.text == "[":  # archaic `int m()[]`
            cur.skip_balanced("[")
            continue
        cur.next()


def parse_type_decl(cur: _Cursor, start_tok: Token) -> TypeDecl:
    kind_tok = cur.next()
    if kind_tok.text not in ("class", "interface", "enum"):
        raise ParseError(kind_tok, f"expected type declaration, found {kind_tok.text!r}")
    name_tok = cur.next()
    decl = TypeDecl(name_tok.text, kind_tok.text, [], [], start=start_tok)
    if cur.at("<"):
        decl.type_params = _parse_type_params(cur)
    while not cur.at("{"):
        tok = cur.peek()
        if tok is None:
            raise ParseError(None, "unterminated type header")
        if tok.text in ("extends", "implements"):
            cur.next()
            while True:
                ref = parse_type_ref(cur)
                if ref is not None:
                    decl.supertypes.append(ref)
                if cur.at(","):
                    cur.next()
                    continue
                break
        else:
            cur.next()
    cur.expect("{")
    if decl.kind == "enum":
        _parse_enum_constants(cur, decl)
    while not cur.at("}"):
        if cur.peek() is None:
            raise ParseError(None, f"unterminated body of {decl.name}")
        _parse_member(cur, decl)
    decl.end = cur.expect("}")
    return decl


def parse_unit(tokens: list[Token]) -> CompilationUnit:
    cur = _Cursor(tokens)
    unit = CompilationUnit()
    while cur.peek() is not None:
        tok = cur.peek()
        if tok.text == "package":
            cur.next()
            unit.package = _parse_dotted(cur)
            if cur.at(";"):
                cur.next()
            continue
        if tok.text == "import":
            cur.next()
            if cur.at("static"):
                cur.next()
            name_parts = [cur.next().text]
            wildcard = False
            while cur.at("."):
                cur.next()
                nxt = cur.next()
                if nxt.text == "*":
                    wildcard = True
                    break
                name_parts.append(nxt.text)
            if cur.at(";"):
                cur.next()
            if wildcard:
                unit.wildcard_imports.append(".".join(name_parts))
            else:
                unit.imports.append(".".join(name_parts))
            continue
        if tok.text == ";":
            cur.next()
            continue
        start_tok = tok
        cur.skip_annotations_and_modifiers()
        nxt = cur.peek()
        if nxt is not None and nxt.text in ("class", "interface", "enum"):
            unit.types.append(parse_type_decl(cur, start_tok))
        else:
            # unsupported top-level construct: skip one token and continue
            cur.next()
    return unit
