from .ast import GameTree, Group, KeyArg, Node, Sym, iter_nodes, node_size
from .lexer import GdlError, IllegalCharacter, Token, TokenKind, tokenize
from .parser import ParseError, UnbalancedParens, UnexpectedToken, parse, parse_source
from .printer import print_canonical
from .grammar import DEFAULT_GRAMMAR, Grammar
from .validate import CompileReport, ExpressionSite, extract_expressions, validate
from .preprocess import UnknownMacro, load_macros, preprocess
from .splice import CategoryMismatch, splice

__all__ = [
    "GameTree", "Group", "KeyArg", "Node", "Sym", "iter_nodes", "node_size",
    "GdlError", "IllegalCharacter", "Token", "TokenKind", "tokenize",
    "ParseError", "UnbalancedParens", "UnexpectedToken", "parse", "parse_source",
    "print_canonical",
    "DEFAULT_GRAMMAR", "Grammar",
    "CompileReport", "ExpressionSite", "extract_expressions", "validate",
    "UnknownMacro", "load_macros", "preprocess",
    "CategoryMismatch", "splice",
]
