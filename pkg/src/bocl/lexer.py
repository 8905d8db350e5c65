"""Hand-rolled tokenizer for constraint text."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class TokenKind(Enum):
    IDENT = "identifier"
    INT = "integer"
    REAL = "real"
    STRING = "string"
    KEYWORD = "keyword"
    SYMBOL = "symbol"
    EOF = "end of input"


KEYWORDS = frozenset(
    {
        "context", "inv", "pre", "post",
        "if", "then", "else", "endif",
        "and", "or", "not",
        "true", "false", "self",
    }
)

# Longest match first: two-character symbols before their prefixes.
_TWO_CHAR_SYMBOLS = ("::", "<>", "<=", ">=", "->")
_ONE_CHAR_SYMBOLS = ":()|.=<>+-*/,"

_DIGITS = "0123456789"
_IDENT_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | frozenset(_DIGITS)


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    col: int

    def describe(self) -> str:
        if self.kind is TokenKind.EOF:
            return "end of input"
        return f"{self.kind.value} '{self.text}'"


class ParseError(Exception):
    """Syntax error with a 1-based source position."""

    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(expected)


def tokenize(source: str) -> list[Token]:
    """Split source into tokens, ending with an EOF token.

    Whitespace and -- line comments are skipped. Keywords are matched
    case-insensitively and normalized to lowercase; string tokens carry
    the decoded content ('' inside a literal is a single quote).
    """
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(source)

    def advance() -> str:
        nonlocal i, line, col
        ch = source[i]
        i += 1
        if ch == "\n":
            line += 1
            col = 1
        else:
            col += 1
        return ch

    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            advance()
            continue
        if ch == "-" and source.startswith("--", i):
            while i < n and source[i] != "\n":
                advance()
            continue

        start_line, start_col = line, col

        if ch == "'":
            advance()
            parts: list[str] = []
            while True:
                if i >= n:
                    raise ParseError("unterminated string literal", start_line, start_col)
                ch = advance()
                if ch == "'":
                    if i < n and source[i] == "'":
                        advance()
                        parts.append("'")
                        continue
                    break
                parts.append(ch)
            tokens.append(Token(TokenKind.STRING, "".join(parts), start_line, start_col))
            continue

        if ch in _DIGITS:
            start = i
            while i < n and source[i] in _DIGITS:
                advance()
            kind = TokenKind.INT
            if i + 1 < n and source[i] == "." and source[i + 1] in _DIGITS:
                advance()
                while i < n and source[i] in _DIGITS:
                    advance()
                kind = TokenKind.REAL
            tokens.append(Token(kind, source[start:i], start_line, start_col))
            continue

        if ch in _IDENT_START:
            start = i
            while i < n and source[i] in _IDENT_CONT:
                advance()
            word = source[start:i]
            if word.lower() in KEYWORDS:
                tokens.append(Token(TokenKind.KEYWORD, word.lower(), start_line, start_col))
            else:
                tokens.append(Token(TokenKind.IDENT, word, start_line, start_col))
            continue

        two = source[i : i + 2]
        if two in _TWO_CHAR_SYMBOLS:
            advance()
            advance()
            tokens.append(Token(TokenKind.SYMBOL, two, start_line, start_col))
            continue
        if ch in _ONE_CHAR_SYMBOLS:
            advance()
            tokens.append(Token(TokenKind.SYMBOL, ch, start_line, start_col))
            continue

        raise ParseError(f"illegal character {ch!r}", start_line, start_col)

    tokens.append(Token(TokenKind.EOF, "", line, col))
    return tokens
