"""Tokenizer for the supported Java subset."""
from __future__ import annotations

from dataclasses import dataclass

KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while""".split()
)

PRIMITIVES = frozenset(
    "boolean byte char double float int long short void".split()
)

MODIFIERS = frozenset(
    """public private protected static final abstract synchronized native
    transient volatile strictfp default""".split()
)

IDENT = "ident"
KEYWORD = "keyword"
NUMBER = "number"
STRING = "string"
CHAR = "char"
PUNCT = "punct"


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int  # 0-based
    col: int   # 0-based

    @property
    def end_col(self) -> int:
        return self.col + len(self.text)


class LexError(ValueError):
    def __init__(self, line: int, col: int, reason: str) -> None:
        super().__init__(f"line {line + 1}, col {col + 1}: {reason}")
        self.line = line
        self.col = col


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line = 0
    col = 0
    n = len(text)

    def advance(span: str) -> None:
        nonlocal line, col
        newlines = span.count("\n")
        if newlines:
            line += newlines
            col = len(span) - span.rfind("\n") - 1
        else:
            col += len(span)

    while i < n:
        c = text[i]
        if c in " \t\r\n\f":
            j = i
            while j < n and text[j] in " \t\r\n\f":
                j += 1
            advance(text[i:j])
            i = j
            continue
        if text.startswith("//", i):
            j = text.find("\n", i)
            j = n if j < 0 else j
            advance(text[i:j])
            i = j
            continue
        if text.startswith("/*", i):
            j = text.find("*/", i + 2)
            if j < 0:
                raise LexError(line, col, "unterminated block comment")
            j += 2
            advance(text[i:j])
            i = j
            continue
        if c == '"':
            j = i + 1
            while j < n:
                if text[j] == "\\":
                    j += 2
                    continue
                if text[j] == '"':
                    break
                if text[j] == "\n":
                    raise LexError(line, col, "unterminated string literal")
                j += 1
            if j >= n:
                raise LexError(line, col, "unterminated string literal")
            j += 1
            tokens.append(Token(STRING, text[i:j], line, col))
            advance(text[i:j])
            i = j
            continue
        if c == "'":
            j = i + 1
            while j < n:
                if text[j] == "\\":
                    j += 2
                    continue
                if text[j] == "'":
                    break
                j += 1
            if j >= n:
                raise LexError(line, col, "unterminated char literal")
            j += 1
            tokens.append(Token(CHAR, text[i:j], line, col))
            advance(text[i:j])
            i = j
            continue
        if c.isalpha() or c in "_$":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_$"):
                j += 1
            word = text[i:j]
            kind = KEYWORD if word in KEYWORDS else IDENT
            tokens.append(Token(kind, word, line, col))
            advance(word)
            i = j
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and (text[j].isalnum() or text[j] in "._xXbBlLfFdDeE+-"):
                # stop '+'/'-' unless directly after an exponent marker
                if text[j] in "+-" and text[j - 1] not in "eEpP":
                    break
                j += 1
            tokens.append(Token(NUMBER, text[i:j], line, col))
            advance(text[i:j])
            i = j
            continue
        tokens.append(Token(PUNCT, c, line, col))
        advance(c)
        i += 1
    return tokens
