"""Compile a validated game tree into an executable form.

Compilation resolves everything that can be resolved statically: board
topology, region site sets, per-player direction indices, piece tables,
and the Zobrist hash table. Anything grammatical that falls outside the
engine's semantics raises ``UnsupportedConstruct`` -- for evaluation
purposes such games count as uncompilable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..gdl.ast import ArgValue, GameTree, Group, KeyArg, Node, Sym
from ..gdl.lexer import GdlError
from .board import BoardGraph, build_hex, build_square

_ZOBRIST_SEED = 0x5EED_B0A2D


class UnsupportedConstruct(GdlError):
    pass


# --- intermediate representation ----------------------------------------

@dataclass(frozen=True)
class SitesIR:
    kind: str  # 'static' | 'empty' | 'around' | 'player'
    static: tuple[int, ...] = ()
    ref: str | None = None  # site reference for 'around'
    player: str | None = None  # 'Mover' | 'Next' | 'P1' | 'P2'


@dataclass(frozen=True)
class CondIR:
    kind: str  # 'is' | 'in' | 'line' | 'connected' | 'no_moves' | 'not' | 'and' | 'or'
    pred: str | None = None  # Empty|Occupied|Enemy|Friend for 'is'
    ref: str | None = None
    sites: SitesIR | None = None
    n: int = 0
    ortho: bool = False
    relation: str = "Adjacent"
    region_class: str | None = None  # SidesNoCorners | Corners
    mover_regions: bool = False
    who: str | None = None  # Mover | Next for no_moves
    items: tuple["CondIR", ...] = ()


@dataclass(frozen=True)
class EffectIR:
    kind: str  # 'remove' | 'enclose'
    ref: str | None = None
    relation: str = "Orthogonal"
    cond: CondIR | None = None  # enclose group predicate (between-bound)


@dataclass(frozen=True)
class ClauseIR:
    sites: SitesIR | None = None
    cond: CondIR | None = None
    effect: EffectIR | None = None


@dataclass(frozen=True)
class MoveIR:
    kind: str  # 'Add' | 'Step' | 'Slide' | 'Hop' | 'or' | 'forEach'
    dirs: tuple[str, ...] | None = None
    to: ClauseIR | None = None
    between: ClauseIR | None = None
    then: EffectIR | None = None
    items: tuple["MoveIR", ...] = ()


@dataclass(frozen=True)
class PieceType:
    name: str
    owner: int  # 1 or 2
    move: MoveIR | None
    index: int


@dataclass(frozen=True)
class PlacementIR:
    ptype: int
    sites: tuple[int, ...]


@dataclass(eq=False)
class CompiledGame:
    name: str
    players: int
    board: BoardGraph
    ptypes: tuple[PieceType, ...]
    add_ptype: tuple[int, int]  # ptype index placed by Add, per player (-1 none)
    start_rules: tuple[PlacementIR, ...]
    play: MoveIR
    end_rules: tuple[tuple[CondIR, tuple[str, str]], ...]
    no_repeat: bool
    player_regions: tuple[tuple[np.ndarray, ...], tuple[np.ndarray, ...]]
    zobrist: np.ndarray = field(repr=False)  # (T, S) uint64
    mover_keys: np.ndarray = field(repr=False)  # (2,) uint64
    source: str = ""

    # resolved direction-id cache: (names tuple | None, player) -> int32 array
    def dir_ids(self, names: tuple[str, ...] | None, player: int) -> np.ndarray:
        key = (names, player)
        cache = self.__dict__.setdefault("_dir_cache", {})
        if key not in cache:
            if names is None:
                cache[key] = self.board.all_dirs()
            else:
                ids = [self.board.direction_index(n, player) for n in names]
                cache[key] = np.array([i for i in ids if i is not None], dtype=np.int32)
        return cache[key]


# --- tree navigation helpers --------------------------------------------

def _nodes_arg(args: tuple[ArgValue, ...]) -> list[Node]:
    out = []
    for a in args:
        if isinstance(a, Node):
            out.append(a)
        elif isinstance(a, Group):
            out.extend(i for i in a.items if isinstance(i, Node))
    return out


def _find(node: Node, head: str) -> Node | None:
    for child in _nodes_arg(node.args):
        if child.head == head:
            return child
    return None


def _keyarg(node: Node, name: str) -> Node | None:
    for a in node.args:
        if isinstance(a, KeyArg) and a.name == name and isinstance(a.value, Node):
            return a.value
    return None


def _syms(node: Node) -> list[str]:
    return [a.name for a in node.args if isinstance(a, Sym)]


# --- the compiler ---------------------------------------------------------

class _Compiler:
    def __init__(self, tree: GameTree):
        self.tree = tree
        self.root = tree.root

    def fail(self, msg: str, node: Node) -> UnsupportedConstruct:
        return UnsupportedConstruct(msg, node.span[0])

    def run(self) -> CompiledGame:
        root = self.root
        if root.head != "game":
            raise self.fail("root must be a game", root)
        name = root.args[0] if root.args and isinstance(root.args[0], str) else "?"
        players_node = _find(root, "players")
        n_players = players_node.args[0] if players_node else 0
        if n_players != 2:
            raise self.fail("engine supports exactly 2 players", players_node or root)

        equipment = _find(root, "equipment")
        assert equipment is not None
        board_node = _find(equipment, "board")
        assert board_node is not None
        self.board = self.compile_shape(board_node.args[0])

        self.player_regions: tuple[list[np.ndarray], list[np.ndarray]] = ([], [])
        for rnode in (n for n in _nodes_arg(equipment.args) if n.head == "regions"):
            who = _syms(rnode)[0]
            player = 1 if who == "P1" else 2
            for sn in _nodes_arg(rnode.args):
                ir = self.compile_sites(sn)
                if ir.kind != "static":
                    raise self.fail("player regions must be static site sets", sn)
                self.player_regions[player - 1].append(
                    np.array(ir.static, dtype=np.int32)
                )

        self.ptypes: list[PieceType] = []
        for pnode in (n for n in _nodes_arg(equipment.args) if n.head == "piece"):
            pname = pnode.args[0]
            owner_sym = _syms(pnode)[0]
            move_node = _find(pnode, "move") or _find(pnode, "or") or _find(pnode, "forEach")
            move_ir = self.compile_move(move_node) if move_node is not None else None
            owners = (1, 2) if owner_sym == "Each" else (int(owner_sym[1]),)
            for ow in owners:
                self.ptypes.append(PieceType(str(pname), ow, move_ir, len(self.ptypes)))

        add_ptype = [-1, -1]
        for player in (1, 2):
            for pt in self.ptypes:
                if pt.owner == player:
                    add_ptype[player - 1] = pt.index
                    break

        rules = _find(root, "rules")
        assert rules is not None
        no_repeat = False
        meta = _find(rules, "meta")
        if meta is not None:
            flag = _nodes_arg(meta.args)[0]
            no_repeat = flag.head == "no" and _syms(flag) == ["Repeat"]

        start_rules: list[PlacementIR] = []
        start = _find(rules, "start")
        if start is not None:
            for place in _nodes_arg(start.args):
                start_rules.append(self.compile_place(place))

        play = _find(rules, "play")
        assert play is not None
        play_ir = self.compile_move(_nodes_arg(play.args)[0])

        end_rules: list[tuple[CondIR, tuple[str, str]]] = []
        end = _find(rules, "end")
        if end is not None:
            for rule in _nodes_arg(end.args):
                cond = self.compile_cond(_nodes_arg(rule.args)[0], scalar=True)
                result = _find(rule, "result")
                assert result is not None
                who, kind = _syms(result)
                end_rules.append((cond, (who, kind)))

        t = max(1, len(self.ptypes))
        rng = np.random.Generator(np.random.PCG64(_ZOBRIST_SEED))
        zobrist = rng.integers(0, 2**64, size=(t, self.board.n_sites), dtype=np.uint64)
        mover_keys = rng.integers(0, 2**64, size=2, dtype=np.uint64)

        return CompiledGame(
            name=str(name),
            players=2,
            board=self.board,
            ptypes=tuple(self.ptypes),
            add_ptype=(add_ptype[0], add_ptype[1]),
            start_rules=tuple(start_rules),
            play=play_ir,
            end_rules=tuple(end_rules),
            no_repeat=no_repeat,
            player_regions=(tuple(self.player_regions[0]), tuple(self.player_regions[1])),
            zobrist=zobrist,
            mover_keys=mover_keys,
            source=self.tree.source,
        )

    def compile_shape(self, node: ArgValue) -> BoardGraph:
        assert isinstance(node, Node)
        if node.head == "square":
            return build_square(int(node.args[0]))
        if node.head == "hex":
            return build_hex(int(node.args[0]))
        if node.head == "rotate":
            deg = int(node.args[0])
            inner = self.compile_shape(node.args[1])
            inner.rotation = deg
            inner.coords = _rotated(inner.coords, deg)
            return inner
        raise self.fail(f"unknown board shape '{node.head}'", node)

    def compile_sites(self, node: Node) -> SitesIR:
        if node.head == "expand":
            inner = self.compile_sites(_nodes_arg(node.args)[0])
            if inner.kind != "static":
                raise self.fail("expand needs a static site set", node)
            base = np.array(inner.static, dtype=np.int32)
            mask = np.zeros(self.board.n_sites, dtype=bool)
            mask[base] = True
            for s in base:
                for nb in self.board.neighbors_of(int(s)):
                    mask[nb] = True
            return SitesIR("static", tuple(int(i) for i in np.flatnonzero(mask)))
        assert node.head == "sites"
        syms = _syms(node)
        if syms and syms[0] == "Around":
            return SitesIR("around", ref=self.compile_siteref(_nodes_arg(node.args)[0], node))
        name = syms[0]
        if name == "Empty":
            return SitesIR("empty")
        if name in ("Mover", "Next", "P1", "P2"):
            return SitesIR("player", player=name)
        region = self.board.regions.get(name)
        if region is None:
            raise self.fail(f"region '{name}' undefined on a {self.board.shape} board", node)
        return SitesIR("static", tuple(int(i) for i in region))

    def compile_siteref(self, node: Node, parent: Node) -> str:
        if node.head in ("to", "from", "between"):
            return node.head
        if node.head == "last":
            which = _syms(node)[0]
            return "last_to" if which == "To" else "last_from"
        raise self.fail(f"bad site reference '{node.head}'", parent)

    def compile_cond(self, node: Node, scalar: bool, var: str | None = None) -> CondIR:
        if node.head == "not":
            return CondIR("not", items=(self.compile_cond(_nodes_arg(node.args)[0], scalar, var),))
        if node.head in ("and", "or"):
            return CondIR(
                node.head,
                items=tuple(self.compile_cond(c, scalar, var) for c in _nodes_arg(node.args)),
            )
        if node.head == "no":
            if not scalar:
                raise self.fail("move-count conditions are only usable in end rules", node)
            return CondIR("no_moves", who=_syms(node)[1])
        assert node.head == "is"
        syms = _syms(node)
        tag = syms[0]
        if tag in ("Empty", "Occupied"):
            ref = self.compile_siteref(_nodes_arg(node.args)[0], node)
            self._check_mask_ref(ref, scalar, var, node)
            return CondIR("is", pred=tag, ref=ref)
        if tag in ("Enemy", "Friend"):
            who = _nodes_arg(node.args)[0]
            at = _keyarg(who, "at")
            assert at is not None
            ref = self.compile_siteref(at, node)
            self._check_mask_ref(ref, scalar, var, node)
            return CondIR("is", pred=tag, ref=ref)
        if tag == "In":
            ref = self.compile_siteref(_nodes_arg(node.args)[0], node)
            self._check_mask_ref(ref, scalar, var, node)
            sites = self.compile_sites(_nodes_arg(node.args)[1])
            if not scalar and sites.kind == "around" and sites.ref not in (
                "last_to", "last_from"
            ):
                raise self.fail("per-candidate neighborhoods are not supported", node)
            return CondIR("in", ref=ref, sites=sites)
        if tag == "Line":
            if not scalar:
                raise self.fail("line conditions are only usable in end rules", node)
            n = next(a for a in node.args if isinstance(a, int))
            return CondIR("line", n=int(n), ortho="Orthogonal" in syms[1:])
        if tag == "Connected":
            if not scalar:
                raise self.fail("connectivity conditions are only usable in end rules", node)
            ints = [a for a in node.args if isinstance(a, int)]
            if ints:
                cls = syms[-1]
                return CondIR("connected", n=int(ints[0]), region_class=cls)
            relation = "Adjacent"
            for s in syms[1:]:
                if s in ("Orthogonal", "Diagonal", "Adjacent"):
                    relation = s
            if not self.player_regions[0] or not self.player_regions[1]:
                raise self.fail("connected-regions goal needs per-player regions", node)
            return CondIR("connected", mover_regions=True, relation=relation)
        raise self.fail(f"unknown condition 'is {tag}'", node)

    def _check_mask_ref(self, ref: str, scalar: bool, var: str | None, node: Node) -> None:
        if scalar:
            return
        if ref not in (var, "last_to", "last_from"):
            raise self.fail(
                f"condition on '{var}' may not reference '({ref})'", node
            )

    def compile_clause(self, node: Node, var: str) -> ClauseIR:
        sites = None
        for child in _nodes_arg(node.args):
            if child.head in ("sites", "expand"):
                sites = self.compile_sites(child)
        cond_node = _keyarg(node, "if")
        cond = self.compile_cond(cond_node, scalar=False, var=var) if cond_node else None
        effect = None
        apply_node = _find(node, "apply")
        if apply_node is not None:
            effect = self.compile_effect(_nodes_arg(apply_node.args)[0])
        return ClauseIR(sites=sites, cond=cond, effect=effect)

    def compile_effect(self, node: Node) -> EffectIR:
        if node.head == "remove":
            return EffectIR("remove", ref=self.compile_siteref(_nodes_arg(node.args)[0], node))
        if node.head == "enclose":
            from_node = _find(node, "from")
            assert from_node is not None
            ref = self.compile_siteref(_nodes_arg(from_node.args)[0], node)
            if ref != "last_to":
                raise self.fail("enclosure must start from (last To)", node)
            relation = next(
                s for s in _syms(node) if s in ("Orthogonal", "Diagonal", "Adjacent")
            )
            between = _find(node, "between")
            assert between is not None
            cond_node = _keyarg(between, "if")
            assert cond_node is not None
            cond = self.compile_cond(cond_node, scalar=False, var="between")
            return EffectIR("enclose", relation=relation, cond=cond)
        raise self.fail(f"unknown effect '{node.head}'", node)

    def compile_directions(self, node: Node) -> tuple[str, ...]:
        names = []
        for a in node.args:
            if isinstance(a, Sym):
                names.append(a.name)
            elif isinstance(a, Group):
                names.extend(i.name for i in a.items if isinstance(i, Sym))
        for n in names:
            for player in (1, 2):
                if self.board.direction_index(n, player) is None:
                    raise self.fail(
                        f"direction '{n}' undefined on a {self.board.shape} board", node
                    )
        return tuple(names)

    def compile_move(self, node: Node) -> MoveIR:
        if node.head == "forEach":
            return MoveIR("forEach")
        if node.head == "or":
            return MoveIR(
                "or", items=tuple(self.compile_move(m) for m in _nodes_arg(node.args))
            )
        assert node.head == "move"
        kind = _syms(node)[0]
        dirs = None
        dnode = _find(node, "directions")
        if dnode is not None:
            dirs = self.compile_directions(dnode)
        to_node = _find(node, "to")
        to = self.compile_clause(to_node, var="to") if to_node is not None else None
        between_node = _find(node, "between")
        between = (
            self.compile_clause(between_node, var="between")
            if between_node is not None
            else None
        )
        then = None
        then_node = _find(node, "then")
        if then_node is not None:
            then = self.compile_effect(_nodes_arg(then_node.args)[0])
        return MoveIR(kind, dirs=dirs, to=to, between=between, then=then)

    def compile_place(self, node: Node) -> PlacementIR:
        refname = node.args[0]
        assert isinstance(refname, str)
        if not refname or refname[-1] not in "12":
            raise self.fail(f'placement "{refname}" must name a player piece', node)
        base, owner = refname[:-1], int(refname[-1])
        ptype = next(
            (p for p in self.ptypes if p.name == base and p.owner == owner), None
        )
        if ptype is None:
            raise self.fail(f'placement references unknown piece "{refname}"', node)
        sites = self.compile_sites(_nodes_arg(node.args)[0])
        if sites.kind != "static":
            raise self.fail("start placements need a static site set", node)
        return PlacementIR(ptype.index, sites.static)


def _rotated(coords: np.ndarray, degrees: int) -> np.ndarray:
    from .board import _rotate_coords

    return _rotate_coords(coords, degrees)


def compile_game(tree: GameTree) -> CompiledGame:
    """Build the executable game. Precondition: ``validate(tree)`` is ok."""
    return _Compiler(tree).run()
