"""Corpus preprocessing: macro expansion and name anonymization.

Raw game files may use quoted function references like ``("BlockWin")``
that stand for a rule fragment, plus thematic names for the game and its
pieces. Preprocessing splices the fragments in and replaces names with
fixed abstract identifiers so structurally-similar games share vocabulary.
"""

from __future__ import annotations

import re
from pathlib import Path

from .ast import ArgValue, GameTree, Group, KeyArg, Node
from .lexer import GdlError
from .parser import parse_source
from .printer import print_canonical

_ABSTRACT_GAME = "GAME_NAME"
_ABSTRACT_PIECES = ("PIECE_ALPHA", "PIECE_BETA", "PIECE_GAMMA", "PIECE_DELTA")


class UnknownMacro(GdlError):
    pass


def load_macros(directory: str | Path) -> dict[str, Node]:
    """Read a directory of ``<name>.lud`` fragments into a macro table."""
    table: dict[str, Node] = {}
    for path in sorted(Path(directory).glob("*.lud")):
        table[path.stem] = parse_source(path.read_text(encoding="utf-8")).root
    return table


def _expand(value: ArgValue, macros: dict[str, Node]) -> ArgValue:
    if isinstance(value, Node):
        if value.ref:
            if value.head not in macros:
                raise UnknownMacro(f'unknown macro "{value.head}"', value.span[0])
            return _expand(macros[value.head], macros)
        return Node(value.head, tuple(_expand(a, macros) for a in value.args))
    if isinstance(value, Group):
        return Group(tuple(_expand(i, macros) for i in value.items))
    if isinstance(value, KeyArg):
        return KeyArg(value.name, _expand(value.value, macros))
    return value


def _piece_base(name: str) -> tuple[str, str]:
    m = re.match(r"^(.*?)([0-9]*)$", name)
    assert m is not None
    return m.group(1), m.group(2)


def _collect_piece_names(node: Node, order: list[str]) -> None:
    if node.head in ("piece", "place") and node.args and isinstance(node.args[0], str):
        base, _ = _piece_base(node.args[0])
        if base and base not in order:
            order.append(base)
    for a in node.args:
        for child in _child_values(a):
            if isinstance(child, Node):
                _collect_piece_names(child, order)


def _child_values(a: ArgValue) -> list[ArgValue]:
    if isinstance(a, Group):
        return list(a.items)
    if isinstance(a, KeyArg):
        return [a.value]
    return [a]


def _rename(value: ArgValue, mapping: dict[str, str], in_game_head: bool) -> ArgValue:
    if isinstance(value, Node):
        renamed_args = []
        for idx, a in enumerate(value.args):
            if isinstance(a, str):
                if value.head == "game" and idx == 0:
                    renamed_args.append(_ABSTRACT_GAME)
                    continue
                if value.head in ("piece", "place"):
                    base, suffix = _piece_base(a)
                    renamed_args.append(mapping.get(base, base) + suffix)
                    continue
                renamed_args.append(a)
            else:
                renamed_args.append(_rename(a, mapping, False))
        return Node(value.head, tuple(renamed_args))
    if isinstance(value, Group):
        return Group(tuple(_rename(i, mapping, False) for i in value.items))
    if isinstance(value, KeyArg):
        return KeyArg(value.name, _rename(value.value, mapping, False))
    return value


def preprocess(tree: GameTree, macros: dict[str, Node] | None = None) -> GameTree:
    """Expand function references and anonymize game/piece names.

    Idempotent: a tree that is already reference-free and abstractly named
    comes back structurally unchanged.
    """
    root = _expand(tree.root, macros or {})
    assert isinstance(root, Node)
    order: list[str] = []
    _collect_piece_names(root, order)
    mapping: dict[str, str] = {}
    fresh = [p for p in _ABSTRACT_PIECES]
    for base in order:
        if base in _ABSTRACT_PIECES:
            mapping[base] = base
            if base in fresh:
                fresh.remove(base)
    for base in order:
        if base not in mapping:
            if not fresh:
                raise GdlError(f"too many piece names to anonymize ({order})", 0)
            mapping[base] = fresh.pop(0)
    renamed = _rename(root, mapping, True)
    assert isinstance(renamed, Node)
    text = print_canonical(renamed)
    return parse_source(text)
