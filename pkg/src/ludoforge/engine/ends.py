"""End-rule evaluation.

Rules run in listed order against the post-move position, with the mover
still bound to the player who just moved; the first satisfied rule decides
the outcome. Line detection anchors on the placed piece, connectivity runs
component labeling against region sets, and move-starvation conditions
share the next player's (lazily computed) move list with the caller.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .compile import CompiledGame, CondIR
from . import kernels
from . import moves as _moves


@dataclass(frozen=True)
class Outcome:
    winner: int  # 0 = draw
    reason: str  # "rule:<index>" | "move-limit" | "no-moves"


@dataclass
class EndContext:
    game: CompiledGame
    owner: np.ndarray
    ptype: np.ndarray
    mover: int  # the player who just moved
    last_to: int
    last_from: int
    hash: int
    history: frozenset[int]
    _moves: dict[int, tuple] = field(default_factory=dict)

    def moves_for(self, player: int) -> tuple:
        if player not in self._moves:
            self._moves[player] = _moves.gen_moves(
                self.game, self.owner, self.ptype, player,
                self.last_to, self.last_from, self.history, self.hash,
            )
        return self._moves[player]

    def ref_site(self, ref: str) -> int:
        if ref in ("last_to", "to"):
            return self.last_to
        if ref in ("last_from", "from"):
            return self.last_from
        return -1


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _region_bits(ctx: EndContext, cond: CondIR, who: int) -> tuple[np.ndarray, int, int]:
    """Per-site region bit masks for a connectivity goal (cached per game)."""
    cache = ctx.game.__dict__.setdefault("_conn_bits", {})
    key = (cond, who)
    if key not in cache:
        board = ctx.game.board
        if cond.mover_regions:
            regions = list(ctx.game.player_regions[who - 1])
        else:
            regions = list(board.region_classes.get(cond.region_class or "", []))
        bits = np.zeros(board.n_sites, dtype=np.uint32)
        for i, region in enumerate(regions[:32]):
            if len(region):
                bits[region] |= np.uint32(1 << i)
        cache[key] = (bits, len(regions), (1 << len(regions)) - 1)
    return cache[key]


def _connected(ctx: EndContext, cond: CondIR) -> bool:
    board = ctx.game.board
    who = ctx.mover
    bits, n_regions, full = _region_bits(ctx, cond, who)
    if n_regions == 0 or n_regions > 32:
        return False
    rel = board.nbr[board.relation_dirs(cond.relation)]
    if ctx.last_to >= 0:
        # a fresh connection always involves the piece that just moved,
        # so checking its component alone is equivalent move-by-move
        if ctx.owner[ctx.last_to] != who:
            return False
        acc = int(
            kernels.component_region_bits(ctx.owner, who, ctx.last_to, rel, bits)
        )
        if cond.mover_regions:
            return (acc & full) == full
        return _popcount(acc) >= cond.n
    mask = (ctx.owner == who).astype(np.uint8)
    if not mask.any():
        return False
    labels = np.asarray(kernels.label_components(mask, rel))
    acc_arr = np.zeros(board.n_sites, dtype=np.uint32)
    valid = labels >= 0
    np.bitwise_or.at(acc_arr, labels[valid], bits[valid])
    touched = acc_arr[np.unique(labels[valid])]
    if cond.mover_regions:
        return bool(((touched & full) == full).any())
    return any(_popcount(int(t)) >= cond.n for t in touched)


def eval_scalar(ctx: EndContext, cond: CondIR) -> bool:
    if cond.kind == "not":
        return not eval_scalar(ctx, cond.items[0])
    if cond.kind == "and":
        return all(eval_scalar(ctx, c) for c in cond.items)
    if cond.kind == "or":
        return any(eval_scalar(ctx, c) for c in cond.items)
    if cond.kind == "no_moves":
        player = ctx.mover if cond.who == "Mover" else 3 - ctx.mover
        return len(ctx.moves_for(player)) == 0
    if cond.kind == "line":
        board = ctx.game.board
        axes = board.line_axes_ortho if cond.ortho else board.line_axes
        if ctx.last_to >= 0:
            run = kernels.max_run_through(
                ctx.owner, ctx.last_to, ctx.mover, board.nbr, axes
            )
            return int(run) >= cond.n
        return bool(
            kernels.line_anywhere(ctx.owner, ctx.mover, cond.n, board.nbr, axes)
        )
    if cond.kind == "connected":
        return _connected(ctx, cond)
    if cond.kind == "is":
        site = ctx.ref_site(cond.ref or "")
        if site < 0:
            return False
        if cond.pred == "Empty":
            return ctx.owner[site] == 0
        if cond.pred == "Occupied":
            return ctx.owner[site] != 0
        if cond.pred == "Enemy":
            return ctx.owner[site] == 3 - ctx.mover
        return ctx.owner[site] == ctx.mover
    if cond.kind == "in":
        site = ctx.ref_site(cond.ref or "")
        if site < 0:
            return False
        mctx = _moves.MaskCtx(
            ctx.game, ctx.owner, ctx.ptype, ctx.mover, ctx.last_to, ctx.last_from
        )
        member = _moves.sites_bool(cond.sites, mctx)  # type: ignore[arg-type]
        return bool(member[site])
    raise AssertionError(cond.kind)


def first_outcome(ctx: EndContext) -> Outcome | None:
    for idx, (cond, (who, kind)) in enumerate(ctx.game.end_rules):
        if not eval_scalar(ctx, cond):
            continue
        subject = ctx.mover if who == "Mover" else 3 - ctx.mover
        if kind == "Draw":
            return Outcome(0, f"rule:{idx}")
        winner = subject if kind == "Win" else 3 - subject
        return Outcome(winner, f"rule:{idx}")
    return None
