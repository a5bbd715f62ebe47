"""Lexer for the mini game description language.

Every token carries a byte span into the original source. Spans are what
make surgical mutation possible: a parenthetical expression is replaced by
cutting ``source[span[0]:span[1]]`` and splicing new text in, so offsets
have to be exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class TokenKind(Enum):
    LPAREN = "("
    RPAREN = ")"
    LBRACE = "{"
    RBRACE = "}"
    IDENT = "ident"
    STRING = "string"
    INT = "int"
    REAL = "real"
    KEYARG = "keyarg"


class GdlError(Exception):
    """Language-level error anchored to a byte offset in the source."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.message = message
        self.offset = offset


class IllegalCharacter(GdlError):
    pass


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    span: tuple[int, int]


_IDENT_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | frozenset("0123456789")
_DIGITS = frozenset("0123456789")
_WS = frozenset(" \t\r\n")

_PUNCT = {
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    "{": TokenKind.LBRACE,
    "}": TokenKind.RBRACE,
}


def tokenize(source: str) -> list[Token]:
    """Lex ``source`` into tokens. ``//`` comments are stripped.

    Joining token texts with the original inter-token whitespace
    reconstructs the (comment-free) source exactly.
    """
    out: list[Token] = []
    i = 0
    n = len(source)
    while i < n:
        c = source[i]
        if c in _WS:
            i += 1
            continue
        if c == "/" and i + 1 < n and source[i + 1] == "/":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if c in _PUNCT:
            out.append(Token(_PUNCT[c], c, (i, i + 1)))
            i += 1
            continue
        if c == '"':
            j = i + 1
            while j < n and source[j] != '"':
                if source[j] == "\n":
                    raise IllegalCharacter("unterminated string", i)
                j += 1
            if j >= n:
                raise IllegalCharacter("unterminated string", i)
            out.append(Token(TokenKind.STRING, source[i : j + 1], (i, j + 1)))
            i = j + 1
            continue
        if c in _DIGITS or (c == "-" and i + 1 < n and source[i + 1] in _DIGITS):
            j = i + 1
            while j < n and source[j] in _DIGITS:
                j += 1
            kind = TokenKind.INT
            if j < n and source[j] == "." and j + 1 < n and source[j + 1] in _DIGITS:
                kind = TokenKind.REAL
                j += 1
                while j < n and source[j] in _DIGITS:
                    j += 1
            out.append(Token(kind, source[i:j], (i, j)))
            i = j
            continue
        if c in _IDENT_START:
            j = i + 1
            while j < n and source[j] in _IDENT_CONT:
                j += 1
            if j < n and source[j] == ":":
                out.append(Token(TokenKind.KEYARG, source[i : j + 1], (i, j + 1)))
                i = j + 1
            else:
                out.append(Token(TokenKind.IDENT, source[i:j], (i, j)))
                i = j
            continue
        raise IllegalCharacter(f"illegal character {c!r}", i)
    return out
