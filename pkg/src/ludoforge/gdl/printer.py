"""Canonical printer.

One fixed layout for any tree: short expressions stay on one line, longer
ones break with two-space indentation. The printed text is the dedup key
for evolved games, so the only requirement that matters is determinism --
structurally equal trees print byte-identically.
"""

from __future__ import annotations

from .ast import ArgValue, GameTree, Group, KeyArg, Node, Sym

_WIDTH = 72


def _inline(value: ArgValue) -> str:
    if isinstance(value, Node):
        head = f'"{value.head}"' if value.ref else value.head
        parts = [head] + [_inline(a) for a in value.args]
        return "(" + " ".join(parts) + ")"
    if isinstance(value, Group):
        inner = " ".join(_inline(i) for i in value.items)
        return "{" + inner + "}" if inner else "{}"
    if isinstance(value, KeyArg):
        return f"{value.name}:{_inline(value.value)}"
    if isinstance(value, Sym):
        return value.name
    if isinstance(value, str):
        return f'"{value}"'
    if isinstance(value, bool):  # guard: bools are ints
        raise TypeError("booleans are not GDL literals")
    return repr(value)


def _render(value: ArgValue, indent: int) -> str:
    flat = _inline(value)
    if indent + len(flat) <= _WIDTH:
        return flat
    pad = " " * (indent + 2)
    if isinstance(value, Node):
        head = f'"{value.head}"' if value.ref else value.head
        if not value.args:
            return f"({head})"
        lines = [f"({head}"]
        for a in value.args:
            lines.append(pad + _render(a, indent + 2))
        lines[-1] += ")"
        return "\n".join(lines)
    if isinstance(value, Group):
        if not value.items:
            return "{}"
        lines = ["{"]
        for item in value.items:
            lines.append(pad + _render(item, indent + 2))
        lines.append(" " * indent + "}")
        return "\n".join(lines)
    if isinstance(value, KeyArg):
        return f"{value.name}:{_render(value.value, indent)}"
    return flat


def print_canonical(tree: GameTree | Node) -> str:
    """Deterministic text form; reparses to a structurally equal tree."""
    node = tree.root if isinstance(tree, GameTree) else tree
    return _render(node, 0) + "\n"
