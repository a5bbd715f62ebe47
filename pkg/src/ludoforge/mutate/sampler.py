"""Grammar-guided mutation: regenerate one expression, category-correct.

Replacements come from two sources: subtrees harvested from a reference
corpus at the same syntactic category (recombination of existing
mechanics), or fresh top-down sampling from the grammar with a depth
budget.

Sampling is environment-aware: the operator inspects the parent game for
its board shape, piece vocabulary, and region definitions, and restricts
enum/name pools so that a grammatical replacement is almost always a
compilable one (side-swapping a hex board or placing a piece the game
never defined would be wasted evaluations).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace as dc_replace

import numpy as np

from ..gdl import (
    DEFAULT_GRAMMAR,
    GameTree,
    Grammar,
    Node,
    print_canonical,
    splice,
)
from ..gdl.ast import ArgValue, Group, KeyArg, Sym, iter_nodes
from ..gdl.grammar import SELF, Arg, Signature
from ..gdl.validate import node_categories
from .request import MutationRequest


class GenerationBudgetExceeded(Exception):
    pass


SQUARE_ONLY_REGIONS = frozenset({"Top", "Bottom", "Left", "Right"})
SQUARE_ONLY_DIRECTIONS = frozenset(
    {"N", "S", "Forward", "Backward", "FL", "FR", "BL", "BR"}
)
STATIC_SITE_NAMES = frozenset(
    {"Top", "Bottom", "Left", "Right", "Corners", "SidesNoCorners", "Board"}
)


@dataclass(frozen=True)
class GrammarSamplerParams:
    max_depth: int = 6
    subtree_library_p: float = 0.5
    optional_p: float = 0.4
    node_budget: int = 160


@dataclass(frozen=True)
class SamplerEnv:
    """Static facts about the game being mutated, plus the mutation site's
    enclosing context (a condition under ``(to ...)`` may only talk about
    the candidate destination, a region definition needs resolvable sites)."""

    board_shape: str = "square"
    piece_names: tuple[str, ...] = ("PIECE_ALPHA",)
    has_player_regions: bool = False
    site_head: str = ""  # head of the expression being replaced
    static_sites: bool = False
    clause_var: str | None = None
    site_regions_owner: str | None = None  # occupant owner when replacing a regions def
    requires_square: bool = False  # rules elsewhere use square-only names

    @classmethod
    def of(
        cls,
        tree: GameTree,
        site_head: str = "",
        site_span: tuple[int, int] | None = None,
    ) -> "SamplerEnv":
        shape = "square"
        pieces: list[str] = []
        has_regions = False
        requires_square = False
        for node in iter_nodes(tree.root):
            if node.head in ("square", "hex"):
                shape = node.head
            elif node.head == "piece" and node.args and isinstance(node.args[0], str):
                if node.args[0] not in pieces:
                    pieces.append(node.args[0])
            elif node.head == "regions":
                has_regions = True
            if node.head in ("sites", "directions"):
                names = {a.name for a in node.args if isinstance(a, Sym)}
                for a in node.args:
                    if isinstance(a, Group):
                        names |= {i.name for i in a.items if isinstance(i, Sym)}
                if names & (SQUARE_ONLY_REGIONS | SQUARE_ONLY_DIRECTIONS):
                    requires_square = True
        static_sites = False
        clause_var: str | None = None
        regions_owner: str | None = None
        if site_span is not None:
            ancestors = [
                n.head
                for n in iter_nodes(tree.root)
                if n.span[0] < site_span[0] and site_span[1] <= n.span[1]
            ]
            static_sites = any(h in ("place", "regions", "expand") for h in ancestors)
            for head in reversed(ancestors):  # innermost clause wins
                if head in ("to", "between"):
                    clause_var = head
                    break
                if head in ("end", "endrule"):
                    break
            occupant = next(
                (n for n in iter_nodes(tree.root) if n.span == site_span), None
            )
            if occupant is not None and occupant.head == "regions":
                owners = [a.name for a in occupant.args if isinstance(a, Sym)]
                regions_owner = owners[0] if owners else None
        return cls(
            board_shape=shape,
            piece_names=tuple(pieces) or ("PIECE_ALPHA",),
            has_player_regions=has_regions,
            site_head=site_head,
            static_sites=static_sites,
            clause_var=clause_var,
            site_regions_owner=regions_owner,
            requires_square=requires_square,
        )

    def allowed_enum(self, names: tuple[str, ...]) -> tuple[str, ...]:
        if self.board_shape != "hex":
            return names
        out = tuple(
            n for n in names
            if n not in SQUARE_ONLY_REGIONS and n not in SQUARE_ONLY_DIRECTIONS
        )
        return out or names


@dataclass(frozen=True)
class _Ctx:
    env: SamplerEnv | None
    static_sites: bool = False  # inside place/regions/expand: resolvable sets only
    clause_var: str | None = None  # 'to' | 'between' for site-condition refs


@dataclass
class SubtreeLibrary:
    by_category: dict[str, list[Node]] = field(default_factory=dict)

    @classmethod
    def harvest(
        cls, trees: list[GameTree], grammar: Grammar = DEFAULT_GRAMMAR
    ) -> "SubtreeLibrary":
        lib = cls()
        seen: set[tuple[str, str]] = set()
        for tree in trees:
            cats = node_categories(tree, grammar)
            for node in iter_nodes(tree.root):
                cat = cats.get(node.span)
                if cat is None or cat == grammar.root_category:
                    continue
                key = (cat, print_canonical(node))
                if key not in seen:
                    seen.add(key)
                    lib.by_category.setdefault(cat, []).append(node)
        return lib

    def compatible(self, category: str, ctx: _Ctx) -> list[Node]:
        entries = self.by_category.get(category, [])
        if ctx.env is None:
            return entries
        return [e for e in entries if not _env_rejects(e, ctx)]


def _env_rejects(node: Node, ctx: _Ctx) -> bool:
    env = ctx.env
    assert env is not None
    for n in iter_nodes(node):
        if env.requires_square and n.head == "hex":
            return True
        syms = {a.name for a in n.args if isinstance(a, Sym)}
        if env.board_shape == "hex":
            if n.head == "sites" and syms & SQUARE_ONLY_REGIONS:
                return True
            if n.head == "directions":
                names = set(syms)
                for a in n.args:
                    if isinstance(a, Group):
                        names |= {i.name for i in a.items if isinstance(i, Sym)}
                if names & SQUARE_ONLY_DIRECTIONS:
                    return True
        if ctx.static_sites and n.head == "sites" and not (syms & STATIC_SITE_NAMES):
            return True
        if not env.has_player_regions:
            if n.head == "sites" and syms & {"Mover", "Next", "P1", "P2"}:
                return True
            if n.head == "is" and "Connected" in syms and "Mover" in syms:
                return True
        if n.head in ("piece", "place") and n.args and isinstance(n.args[0], str):
            base = n.args[0].rstrip("12")
            if base not in env.piece_names:
                return True
        if ctx.clause_var and n.head in ("to", "from", "between") and not n.args:
            if n.head != ctx.clause_var:
                return True
    return False


class GrammarSampler:
    def __init__(
        self,
        grammar: Grammar = DEFAULT_GRAMMAR,
        library: SubtreeLibrary | None = None,
        params: GrammarSamplerParams = GrammarSamplerParams(),
    ):
        self.grammar = grammar
        self.library = library or SubtreeLibrary()
        self.params = params

    def sample(
        self,
        category: str,
        rng: np.random.Generator,
        env: SamplerEnv | None = None,
    ) -> Node:
        budget = [self.params.node_budget]
        ctx = _Ctx(
            env=env,
            static_sites=bool(env and env.static_sites),
            clause_var=env.clause_var if env else None,
        )
        if env is not None and category == "equip_item" and env.site_head:
            return self._sample_head(category, env.site_head, rng, 0, budget, ctx)
        if category == "siteref":
            return self._sample_siteref("", rng, ctx)
        return self._sample_cat(category, rng, 0, budget, ctx)

    # -- internals ----------------------------------------------------------

    def _signature_cost(self, sig: Signature) -> int:
        return sum(
            1 for a in sig if a.kind in ("cat", "many", "key", "group") and not a.opt
        )

    def _choices(self, category: str, ctx: _Ctx) -> list[tuple[str, Signature]]:
        heads = self.grammar.heads_of(category)
        out: list[tuple[str, Signature]] = []
        for head in sorted(heads):
            if (
                category == "shape"
                and head == "hex"
                and ctx.env is not None
                and ctx.env.requires_square
            ):
                continue
            if category == "sites" and ctx.static_sites and head == "sites":
                # only the named-region alternative stays resolvable
                out.extend(
                    (head, sig)
                    for sig in heads[head]
                    if sig and sig[0].kind == "enum" and "Top" in sig[0].enum
                )
                continue
            for sig in heads[head]:
                if (
                    ctx.env is not None
                    and not ctx.env.has_player_regions
                    and category == "endcond"
                    and head == "is"
                    and any(a.kind == "enum" and a.enum == ("Mover",) for a in sig)
                ):
                    continue
                out.append((head, sig))
        return out

    def _sample_cat(
        self,
        category: str,
        rng: np.random.Generator,
        depth: int,
        budget: list[int],
        ctx: _Ctx,
    ) -> Node:
        budget[0] -= 1
        if budget[0] <= 0 or depth > 3 * self.params.max_depth:
            raise GenerationBudgetExceeded(f"budget exhausted inside '{category}'")
        lib = self.library.compatible(category, ctx)
        if lib and rng.random() < self.params.subtree_library_p:
            return lib[int(rng.integers(len(lib)))]
        choices = self._choices(category, ctx)
        if not choices:
            raise GenerationBudgetExceeded(f"no viable alternative for '{category}'")
        if depth >= self.params.max_depth:
            min_cost = min(self._signature_cost(s) for _, s in choices)
            choices = [c for c in choices if self._signature_cost(c[1]) == min_cost]
        head, sig = choices[int(rng.integers(len(choices)))]
        return self._build(category, head, sig, rng, depth, budget, ctx)

    def _sample_head(
        self,
        category: str,
        head: str,
        rng: np.random.Generator,
        depth: int,
        budget: list[int],
        ctx: _Ctx,
    ) -> Node:
        sigs = self.grammar.heads_of(category).get(head)
        if not sigs:
            return self._sample_cat(category, rng, depth, budget, ctx)
        sig = sigs[int(rng.integers(len(sigs)))]
        return self._build(category, head, sig, rng, depth, budget, ctx)

    def _build(
        self,
        category: str,
        head: str,
        sig: Signature,
        rng: np.random.Generator,
        depth: int,
        budget: list[int],
        ctx: _Ctx,
    ) -> Node:
        inner = ctx
        if head in ("place", "regions", "expand"):
            inner = dc_replace(ctx, static_sites=True)
        if head == "to":
            inner = dc_replace(ctx, clause_var="to")
        elif head == "between":
            inner = dc_replace(ctx, clause_var="between")
        elif category in ("endcond", "endrule", "end"):
            inner = dc_replace(ctx, clause_var=None)
        if head == "equipment":
            # exactly one board, then non-board gear
            items: list[ArgValue] = [
                self._sample_head("equip_item", "board", rng, depth + 1, budget, inner)
            ]
            for _ in range(1 + int(rng.integers(0, 2))):
                items.append(
                    self._sample_head("equip_item", "piece", rng, depth + 1, budget, inner)
                )
            return Node(head, (Group(tuple(items)),))
        args: list[ArgValue] = []
        for i, arg in enumerate(sig):
            args.extend(self._sample_arg(arg, category, head, i, rng, depth, budget, inner))
        return Node(head, tuple(args))

    def _sample_arg(
        self,
        arg: Arg,
        category: str,
        head: str,
        pos: int,
        rng: np.random.Generator,
        depth: int,
        budget: list[int],
        ctx: _Ctx,
    ) -> list[ArgValue]:
        if arg.opt and (
            depth >= self.params.max_depth or rng.random() > self.params.optional_p
        ):
            return []
        cat = category if arg.cat == SELF else arg.cat
        if arg.kind == "cat":
            if cat == "siteref":
                return [self._sample_siteref(head, rng, ctx)]
            return [self._sample_cat(cat, rng, depth + 1, budget, ctx)]  # type: ignore[arg-type]
        if arg.kind == "many":
            extra = int(rng.integers(0, 2))
            return [
                self._sample_cat(cat, rng, depth + 1, budget, ctx)  # type: ignore[arg-type]
                for _ in range(1 + extra)
            ]
        if arg.kind == "enum":
            if head == "piece" and "Each" in arg.enum:
                # one-sided pieces orphan the start placements of the other
                return [Sym("Each")]
            if head == "regions" and ctx.env and ctx.env.site_regions_owner in arg.enum:
                return [Sym(ctx.env.site_regions_owner)]
            pool = ctx.env.allowed_enum(arg.enum) if ctx.env else arg.enum
            if ctx.static_sites and head == "sites":
                static = tuple(n for n in pool if n in STATIC_SITE_NAMES)
                pool = static or pool
            return [Sym(pool[int(rng.integers(len(pool)))])]
        if arg.kind == "int":
            lo = arg.sample_lo if arg.sample_lo is not None else arg.lo
            hi = arg.sample_hi if arg.sample_hi is not None else arg.hi
            return [int(rng.integers(lo, hi + 1))]
        if arg.kind == "str":
            return [self._sample_name(head, rng, ctx)]
        if arg.kind == "key":
            value = self._sample_cat(cat, rng, depth + 1, budget, ctx)  # type: ignore[arg-type]
            return [KeyArg(arg.key or "", value)]
        if arg.kind == "group":
            count = 1 + int(rng.integers(0, 3))
            items: list[ArgValue] = []
            for _ in range(count):
                if arg.enum:
                    pool = ctx.env.allowed_enum(arg.enum) if ctx.env else arg.enum
                    items.append(Sym(pool[int(rng.integers(len(pool)))]))
                else:
                    items.append(self._sample_cat(cat, rng, depth + 1, budget, ctx))  # type: ignore[arg-type]
            return [Group(tuple(items))]
        raise AssertionError(arg.kind)

    def _sample_siteref(self, head: str, rng: np.random.Generator, ctx: _Ctx) -> Node:
        if head in ("sites", "from"):
            # neighborhoods and enclosure anchors are last-move relative
            return Node("last", (Sym("To"),))
        if head == "remove" and ctx.clause_var:
            return Node(ctx.clause_var, ())
        if ctx.clause_var is not None:
            options = [Node(ctx.clause_var, ()), Node("last", (Sym("To"),))]
            return options[int(rng.integers(len(options)))]
        options = [
            Node("last", (Sym("To"),)),
            Node("last", (Sym("From"),)),
            Node("to", ()),
        ]
        return options[int(rng.integers(len(options)))]

    def _sample_name(self, head: str, rng: np.random.Generator, ctx: _Ctx) -> str:
        pieces = ctx.env.piece_names if ctx.env else ("PIECE_ALPHA", "PIECE_BETA")
        if head == "place":
            base = pieces[int(rng.integers(len(pieces)))]
            return f"{base}{1 + int(rng.integers(2))}"
        if head == "piece":
            return pieces[int(rng.integers(len(pieces)))]
        return "GAME_NAME"


def grammar_mutate(
    request: MutationRequest,
    tree: GameTree,
    sampler: GrammarSampler,
    rng: np.random.Generator,
) -> str:
    """Regenerate the requested expression; returns canonical candidate text."""
    env = SamplerEnv.of(tree, site_head=request.site.head, site_span=request.site.span)
    replacement = sampler.sample(request.site.category, rng, env=env)
    mutated = splice(tree, request.site, replacement, sampler.grammar)
    return print_canonical(mutated)
