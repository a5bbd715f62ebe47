"""Recursive-descent parser: tokens -> GameTree."""

from __future__ import annotations

from .ast import ArgValue, GameTree, Group, KeyArg, Node, Sym
from .lexer import GdlError, Token, TokenKind, tokenize


class ParseError(GdlError):
    pass


class UnbalancedParens(ParseError):
    pass


class UnexpectedToken(ParseError):
    pass


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise UnbalancedParens("unexpected end of input", self._eof_offset())
        self.pos += 1
        return tok

    def _eof_offset(self) -> int:
        return self.tokens[-1].span[1] if self.tokens else 0

    def parse_node(self) -> Node:
        lparen = self.take()
        if lparen.kind is not TokenKind.LPAREN:
            raise UnexpectedToken(f"expected '(' not {lparen.text!r}", lparen.span[0])
        head_tok = self.take()
        if head_tok.kind is TokenKind.IDENT:
            head, ref = head_tok.text, False
        elif head_tok.kind is TokenKind.STRING:
            head, ref = head_tok.text[1:-1], True
        else:
            raise UnexpectedToken(
                f"expected a head keyword, not {head_tok.text!r}", head_tok.span[0]
            )
        args: list[ArgValue] = []
        while True:
            tok = self.peek()
            if tok is None:
                raise UnbalancedParens("missing ')'", self._eof_offset())
            if tok.kind is TokenKind.RPAREN:
                self.pos += 1
                return Node(head, tuple(args), (lparen.span[0], tok.span[1]), ref)
            args.append(self.parse_arg())

    def parse_group(self) -> Group:
        lbrace = self.take()
        items: list[ArgValue] = []
        while True:
            tok = self.peek()
            if tok is None:
                raise UnbalancedParens("missing '}'", self._eof_offset())
            if tok.kind is TokenKind.RBRACE:
                self.pos += 1
                return Group(tuple(items), (lbrace.span[0], tok.span[1]))
            items.append(self.parse_arg())

    def parse_arg(self) -> ArgValue:
        tok = self.peek()
        assert tok is not None
        if tok.kind is TokenKind.LPAREN:
            return self.parse_node()
        if tok.kind is TokenKind.LBRACE:
            return self.parse_group()
        if tok.kind is TokenKind.KEYARG:
            self.pos += 1
            nxt = self.peek()
            if nxt is None or nxt.kind in (TokenKind.RPAREN, TokenKind.RBRACE):
                raise UnexpectedToken(f"keyword {tok.text!r} has no value", tok.span[0])
            return KeyArg(tok.text[:-1], self.parse_arg())
        self.pos += 1
        if tok.kind is TokenKind.IDENT:
            return Sym(tok.text)
        if tok.kind is TokenKind.STRING:
            return tok.text[1:-1]
        if tok.kind is TokenKind.INT:
            return int(tok.text)
        if tok.kind is TokenKind.REAL:
            return float(tok.text)
        raise UnexpectedToken(f"unexpected {tok.text!r}", tok.span[0])


def parse(tokens: list[Token], source: str = "") -> GameTree:
    """Parse a token stream holding exactly one toplevel expression."""
    parser = _Parser(tokens)
    tok = parser.peek()
    if tok is None:
        raise UnexpectedToken("empty input", 0)
    if tok.kind is not TokenKind.LPAREN:
        raise UnexpectedToken(f"expected '(' not {tok.text!r}", tok.span[0])
    root = parser.parse_node()
    extra = parser.peek()
    if extra is not None:
        if extra.kind is TokenKind.RPAREN:
            raise UnbalancedParens("unmatched ')'", extra.span[0])
        raise UnexpectedToken(f"trailing {extra.text!r}", extra.span[0])
    return GameTree(root, source)


def parse_source(source: str) -> GameTree:
    return parse(tokenize(source), source)
