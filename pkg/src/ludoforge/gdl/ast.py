"""AST for the mini game description language.

All values are immutable. Equality is structural: spans never participate,
so a reprinted-and-reparsed tree compares equal to the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union


@dataclass(frozen=True)
class Sym:
    """A bare identifier in argument position (an enum literal, e.g. ``Each``)."""

    name: str


@dataclass(frozen=True)
class KeyArg:
    """A keyword argument such as ``if:(...)`` or ``at:(between)``."""

    name: str
    value: "ArgValue"


@dataclass(frozen=True)
class Group:
    """A ``{ ... }`` collection argument. Source order is preserved."""

    items: tuple["ArgValue", ...]
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Node:
    """A parenthetical expression ``(head args...)``.

    ``ref`` marks quoted-head function references like ``("BlockWin")``:
    those are placeholders that preprocessing expands away.
    """

    head: str
    args: tuple["ArgValue", ...] = ()
    span: tuple[int, int] = field(default=(0, 0), compare=False)
    ref: bool = False


ArgValue = Union[Node, Group, KeyArg, Sym, str, int, float]


@dataclass(frozen=True)
class GameTree:
    """A parsed game: the root node plus the source text it was parsed from."""

    root: Node
    source: str = field(default="", compare=False)


def iter_nodes(value: ArgValue) -> Iterator[Node]:
    """Yield every Node under ``value`` (inclusive), pre-order, source order."""
    if isinstance(value, Node):
        yield value
        for a in value.args:
            yield from iter_nodes(a)
    elif isinstance(value, Group):
        for item in value.items:
            yield from iter_nodes(item)
    elif isinstance(value, KeyArg):
        yield from iter_nodes(value.value)


def node_size(value: ArgValue) -> int:
    """Count of Nodes under ``value`` (inclusive)."""
    return sum(1 for _ in iter_nodes(value))
