"""Grammar validation, structural checks, and mutation-site extraction.

``validate`` is total: any tree yields a report, never an exception. The
validator also records the syntactic category of every node it matches;
``extract_expressions`` turns that into the list of spans a mutation
operator may target.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ast import ArgValue, GameTree, Group, KeyArg, Node, Sym, iter_nodes
from .grammar import DEFAULT_GRAMMAR, SELF, Arg, Grammar, Signature


@dataclass(frozen=True)
class CompileReport:
    ok: bool
    violations: tuple[tuple[tuple[int, int], str], ...] = ()

    def messages(self) -> list[str]:
        return [m for _, m in self.violations]


@dataclass(frozen=True)
class ExpressionSite:
    """A balanced parenthetical region of the source, with its category."""

    span: tuple[int, int]
    category: str
    head: str


@dataclass
class _Match:
    errors: list[tuple[tuple[int, int], str]] = field(default_factory=list)
    # child node -> category, keyed by span (spans are unique per node)
    categories: dict[tuple[int, int], str] = field(default_factory=dict)


def _arg_cat(arg: Arg, current: str) -> str:
    return current if arg.cat == SELF else (arg.cat or current)


def _slot_name(arg: Arg) -> str:
    if arg.kind == "cat" or arg.kind == "many":
        return f"({arg.cat} ...)"
    if arg.kind == "enum":
        return "|".join(arg.enum)
    if arg.kind == "key":
        return f"{arg.key}:..."
    if arg.kind == "group":
        return "{...}"
    return arg.kind


def _shallow_ok(arg: Arg, actual: ArgValue, grammar: Grammar, current: str) -> bool:
    """Can ``actual`` possibly fill slot ``arg``? Used to skip optionals."""
    if arg.kind == "cat" or arg.kind == "many":
        return isinstance(actual, Node) and actual.head in grammar.heads_of(
            _arg_cat(arg, current)
        )
    if arg.kind == "enum":
        return isinstance(actual, Sym) and actual.name in arg.enum
    if arg.kind == "int":
        return isinstance(actual, int) and not isinstance(actual, bool)
    if arg.kind == "str":
        return isinstance(actual, str)
    if arg.kind == "key":
        return isinstance(actual, KeyArg) and actual.name == arg.key
    if arg.kind == "group":
        return isinstance(actual, Group)
    return False


class _Validator:
    def __init__(self, grammar: Grammar):
        self.grammar = grammar
        self.errors: list[tuple[tuple[int, int], str]] = []
        self.categories: dict[tuple[int, int], str] = {}

    def check_node(self, node: Node, category: str) -> None:
        self.categories[node.span] = category
        if node.ref:
            self.errors.append(
                (node.span, f'unexpanded function reference "{node.head}"')
            )
            return
        heads = self.grammar.heads_of(category)
        if node.head not in heads:
            expected = "|".join(sorted(heads)) or category
            self.errors.append(
                (node.span, f"'{node.head}' is not valid here (expected {expected})")
            )
            return
        alts = heads[node.head]
        best: _Match | None = None
        for sig in alts:
            match = self._match_signature(node, sig, category)
            if not match.errors:
                best = match
                break
            if best is None or len(match.errors) < len(best.errors):
                best = match
        assert best is not None
        self.errors.extend(best.errors)
        for child in _direct_child_nodes(node):
            child_cat = best.categories.get(child.span)
            if child_cat is not None:
                self.check_node(child, child_cat)
            elif not best.errors:
                # a matched signature must account for every child node
                self.errors.append((child.span, f"unexpected '{child.head}'"))

    def _match_signature(self, node: Node, sig: Signature, category: str) -> _Match:
        m = _Match()
        actuals = list(node.args)
        i = 0
        for arg in sig:
            if arg.kind == "many":
                cat = _arg_cat(arg, category)
                while i < len(actuals) and _shallow_ok(arg, actuals[i], self.grammar, category):
                    m.categories[actuals[i].span] = cat  # type: ignore[union-attr]
                    i += 1
                continue
            if i >= len(actuals):
                if not arg.opt:
                    m.errors.append((node.span, f"'{node.head}': missing {_slot_name(arg)}"))
                continue
            actual = actuals[i]
            if arg.opt and not _shallow_ok(arg, actual, self.grammar, category):
                continue
            err = self._match_one(node, arg, actual, category, m)
            if err:
                m.errors.append(err)
            i += 1
        if i < len(actuals):
            m.errors.append(
                (node.span, f"'{node.head}': {len(actuals) - i} extra argument(s)")
            )
        return m

    def _match_one(
        self, node: Node, arg: Arg, actual: ArgValue, category: str, m: _Match
    ) -> tuple[tuple[int, int], str] | None:
        cat = _arg_cat(arg, category)
        if arg.kind == "cat":
            if not isinstance(actual, Node):
                return (node.span, f"'{node.head}': expected a ({cat} ...) expression")
            m.categories[actual.span] = cat
            return None
        if arg.kind == "enum":
            if not (isinstance(actual, Sym) and actual.name in arg.enum):
                return (node.span, f"'{node.head}': expected one of {'|'.join(arg.enum)}")
            return None
        if arg.kind == "int":
            if not isinstance(actual, int) or isinstance(actual, bool):
                return (node.span, f"'{node.head}': expected an integer")
            if not (arg.lo <= actual <= arg.hi):
                return (node.span, f"'{node.head}': {actual} outside [{arg.lo}, {arg.hi}]")
            return None
        if arg.kind == "str":
            if not isinstance(actual, str):
                return (node.span, f"'{node.head}': expected a quoted name")
            return None
        if arg.kind == "key":
            if not (isinstance(actual, KeyArg) and actual.name == arg.key):
                return (node.span, f"'{node.head}': expected {arg.key}:...")
            if not isinstance(actual.value, Node):
                return (node.span, f"'{node.head}': {arg.key}: needs an expression")
            m.categories[actual.value.span] = cat
            return None
        if arg.kind == "group":
            if not isinstance(actual, Group):
                return (node.span, f"'{node.head}': expected {{...}}")
            if not actual.items:
                return (actual.span, f"'{node.head}': empty {{...}}")
            for item in actual.items:
                if arg.enum:
                    if not (isinstance(item, Sym) and item.name in arg.enum):
                        return (actual.span, f"'{node.head}': bad item in {{...}}")
                else:
                    if not isinstance(item, Node) or item.head not in self.grammar.heads_of(cat):
                        return (actual.span, f"'{node.head}': bad item in {{...}}")
                    m.categories[item.span] = cat
            return None
        raise AssertionError(arg.kind)


def _direct_child_nodes(node: Node) -> list[Node]:
    out: list[Node] = []
    for a in node.args:
        if isinstance(a, Node):
            out.append(a)
        elif isinstance(a, Group):
            out.extend(i for i in a.items if isinstance(i, Node))
        elif isinstance(a, KeyArg) and isinstance(a.value, Node):
            out.append(a.value)
    return out


def _structural_checks(tree: GameTree) -> list[tuple[tuple[int, int], str]]:
    errors: list[tuple[tuple[int, int], str]] = []
    boards = [n for n in iter_nodes(tree.root) if n.head == "board" and not n.ref]
    if not boards:
        errors.append((tree.root.span, "does not define a board"))
    elif len(boards) > 1:
        errors.append((boards[1].span, "defines more than one board"))
    return errors


def validate(tree: GameTree, grammar: Grammar = DEFAULT_GRAMMAR) -> CompileReport:
    """Check ``tree`` against the grammar plus structural requirements.

    Violations are data, not exceptions, and all of them are reported.
    """
    v = _Validator(grammar)
    v.check_node(tree.root, grammar.root_category)
    errors = v.errors + _structural_checks(tree)
    return CompileReport(ok=not errors, violations=tuple(errors))


def node_categories(
    tree: GameTree, grammar: Grammar = DEFAULT_GRAMMAR
) -> dict[tuple[int, int], str]:
    """span -> category for every matched node (valid trees cover all nodes)."""
    v = _Validator(grammar)
    v.check_node(tree.root, grammar.root_category)
    return v.categories


def extract_expressions(
    tree: GameTree, grammar: Grammar = DEFAULT_GRAMMAR
) -> list[ExpressionSite]:
    """One site per node of the tree (root included), in source order."""
    report = validate(tree, grammar)
    if not report.ok:
        raise ValueError(f"cannot extract sites from an invalid tree: {report.messages()[:3]}")
    cats = node_categories(tree, grammar)
    return [
        ExpressionSite(n.span, cats[n.span], n.head) for n in iter_nodes(tree.root)
    ]
