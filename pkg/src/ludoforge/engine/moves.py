"""Legal-move generation.

Site conditions compile to boolean masks over the whole board (numpy), and
the per-direction candidate scans run in the kernels. The final move list
is deduplicated and canonically sorted, so generation order inside the
kernels never leaks into agent behavior.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .compile import ClauseIR, CompiledGame, CondIR, EffectIR, MoveIR, SitesIR
from . import kernels


@dataclass(frozen=True, slots=True)
class Move:
    kind: str  # Add | Step | Slide | Hop
    frm: int | None
    to: int
    captures: tuple[int, ...] = ()
    then: EffectIR | None = field(default=None, compare=False, repr=False)

    def key(self) -> tuple:
        return (-1 if self.frm is None else self.frm, self.to, self.kind, self.captures)


@dataclass
class MaskCtx:
    game: CompiledGame
    owner: np.ndarray
    ptype: np.ndarray
    mover: int
    last_to: int
    last_from: int

    def ref_site(self, ref: str) -> int:
        if ref == "last_to":
            return self.last_to
        if ref == "last_from":
            return self.last_from
        return -1  # to/from/between have no value outside their clause


def sites_bool(ir: SitesIR, ctx: MaskCtx) -> np.ndarray:
    board = ctx.game.board
    mask = np.zeros(board.n_sites, dtype=bool)
    if ir.kind == "static":
        mask[list(ir.static)] = True
    elif ir.kind == "empty":
        mask = ctx.owner == 0
    elif ir.kind == "around":
        site = ctx.ref_site(ir.ref or "")
        if site >= 0:
            mask[board.neighbors_of(site)] = True
    elif ir.kind == "player":
        player = {"Mover": ctx.mover, "Next": 3 - ctx.mover, "P1": 1, "P2": 2}[ir.player]
        for region in ctx.game.player_regions[player - 1]:
            mask[region] = True
    return mask


def cond_mask(cond: CondIR, ctx: MaskCtx, var: str) -> np.ndarray:
    """Boolean site mask for a condition bound to ``var`` (to / between)."""
    owner = ctx.owner
    if cond.kind == "not":
        return ~cond_mask(cond.items[0], ctx, var)
    if cond.kind == "and":
        out = cond_mask(cond.items[0], ctx, var)
        for c in cond.items[1:]:
            out = out & cond_mask(c, ctx, var)
        return out
    if cond.kind == "or":
        out = cond_mask(cond.items[0], ctx, var)
        for c in cond.items[1:]:
            out = out | cond_mask(c, ctx, var)
        return out
    if cond.kind == "is":
        if cond.ref == var:
            if cond.pred == "Empty":
                return owner == 0
            if cond.pred == "Occupied":
                return owner != 0
            if cond.pred == "Enemy":
                return owner == 3 - ctx.mover
            return owner == ctx.mover  # Friend
        site = ctx.ref_site(cond.ref or "")
        val = False
        if site >= 0:
            if cond.pred == "Empty":
                val = owner[site] == 0
            elif cond.pred == "Occupied":
                val = owner[site] != 0
            elif cond.pred == "Enemy":
                val = owner[site] == 3 - ctx.mover
            else:
                val = owner[site] == ctx.mover
        return np.full(owner.shape[0], val, dtype=bool)
    if cond.kind == "in":
        member = sites_bool(cond.sites, ctx)  # type: ignore[arg-type]
        if cond.ref == var:
            return member
        site = ctx.ref_site(cond.ref or "")
        val = bool(member[site]) if site >= 0 else False
        return np.full(owner.shape[0], val, dtype=bool)
    raise AssertionError(f"not a site-mask condition: {cond.kind}")


def _to_mask(clause: ClauseIR | None, ctx: MaskCtx, default: np.ndarray) -> np.ndarray:
    if clause is None:
        return default
    mask = cond_mask(clause.cond, ctx, "to") if clause.cond is not None else default
    if clause.sites is not None:
        mask = mask & sites_bool(clause.sites, ctx)
    return mask


def _mover_sites(ctx: MaskCtx) -> np.ndarray:
    return np.flatnonzero(ctx.owner == ctx.mover).astype(np.int32)


def _gen_ir(ir: MoveIR, ctx: MaskCtx, froms: np.ndarray | None) -> list[Move]:
    game, board = ctx.game, ctx.game.board
    empty_u8 = (ctx.owner == 0).astype(np.uint8)
    if ir.kind == "forEach":
        out: list[Move] = []
        for pt in game.ptypes:
            if pt.owner != ctx.mover or pt.move is None:
                continue
            mine = np.flatnonzero(
                (ctx.owner == ctx.mover) & (ctx.ptype == pt.index)
            ).astype(np.int32)
            if mine.size:
                out.extend(_gen_ir(pt.move, ctx, mine))
        return out
    if ir.kind == "or":
        out = []
        for sub in ir.items:
            out.extend(_gen_ir(sub, ctx, froms))
        return out
    if ir.kind == "Add":
        mask = (ctx.owner == 0) & _to_mask(ir.to, ctx, np.ones_like(empty_u8, dtype=bool))
        return [
            Move("Add", None, int(s), then=ir.then) for s in np.flatnonzero(mask)
        ]

    src = _mover_sites(ctx) if froms is None else froms
    if src.size == 0:
        return []
    dirs = game.dir_ids(ir.dirs, ctx.mover)
    if dirs.size == 0:
        return []
    if ir.kind == "Step":
        to_ok = _to_mask(ir.to, ctx, ctx.owner == 0).astype(np.uint8)
        rows = kernels.step_candidates(src, dirs, board.nbr, to_ok)
        return [
            Move(
                "Step", int(f), int(t),
                captures=((int(t),) if ctx.owner[t] != 0 else ()),
                then=ir.then,
            )
            for f, t in rows
        ]
    if ir.kind == "Slide":
        to_ok = _to_mask(ir.to, ctx, np.ones_like(empty_u8, dtype=bool)).astype(np.uint8)
        rows = kernels.slide_candidates(src, dirs, board.nbr, empty_u8, to_ok)
        return [Move("Slide", int(f), int(t), then=ir.then) for f, t in rows]
    if ir.kind == "Hop":
        if ir.between is not None and ir.between.cond is not None:
            between_ok = cond_mask(ir.between.cond, ctx, "between").astype(np.uint8)
        else:
            between_ok = (ctx.owner != 0).astype(np.uint8)
        remove_between = (
            ir.between is not None
            and ir.between.effect is not None
            and ir.between.effect.kind == "remove"
        )
        to_ok = _to_mask(ir.to, ctx, ctx.owner == 0).astype(np.uint8)
        rows = kernels.hop_candidates(src, dirs, board.nbr, between_ok, to_ok)
        out = []
        for f, b, t in rows:
            caps: tuple[int, ...] = ()
            if ctx.owner[t] != 0:
                caps = caps + (int(t),)
            if remove_between and ctx.owner[b] != 0:
                caps = caps + (int(b),)
            out.append(Move("Hop", int(f), int(t), captures=caps, then=ir.then))
        return out
    raise AssertionError(ir.kind)


def run_enclosure(
    game: CompiledGame,
    owner: np.ndarray,
    ptype: np.ndarray,
    mover: int,
    placed_to: int,
    effect: EffectIR,
) -> list[int]:
    """Sites of every fully-surrounded matching group adjacent to the move."""
    ctx = MaskCtx(game, owner, ptype, mover, placed_to, -1)
    target = cond_mask(effect.cond, ctx, "between").astype(np.uint8)  # type: ignore[arg-type]
    rel = game.board.nbr[game.board.relation_dirs(effect.relation)]
    captured = kernels.enclosed_captures(owner, target, placed_to, rel)
    return [int(s) for s in np.flatnonzero(captured)]


def then_effect_for(game: CompiledGame, move: Move) -> EffectIR | None:
    return move.then


def _post_hash(
    game: CompiledGame,
    ctx: MaskCtx,
    move: Move,
    cur_hash: int,
) -> int:
    """Hash of the position this move would produce (for repeat checks)."""
    z = game.zobrist
    owner, ptype = ctx.owner, ctx.ptype
    h = cur_hash
    removed = set()
    for c in move.captures:
        if owner[c] != 0:
            h ^= int(z[ptype[c], c])
            removed.add(c)
    if move.kind == "Add":
        pt = game.add_ptype[ctx.mover - 1]
        h ^= int(z[pt, move.to])
    else:
        assert move.frm is not None
        ptf = int(ptype[move.frm])
        h ^= int(z[ptf, move.frm]) ^ int(z[ptf, move.to])
    if move.then is not None and move.then.kind == "enclose":
        for site in _simulate_enclosure(game, ctx, move, removed):
            h ^= int(z[ptype[site], site])
    h ^= int(game.mover_keys[ctx.mover - 1]) ^ int(game.mover_keys[2 - ctx.mover])
    return h


def _simulate_enclosure(
    game: CompiledGame, ctx: MaskCtx, move: Move, removed: set[int]
) -> list[int]:
    owner = ctx.owner.copy()
    ptype = ctx.ptype.copy()
    for c in removed:
        owner[c] = 0
        ptype[c] = -1
    if move.kind == "Add":
        owner[move.to] = ctx.mover
        ptype[move.to] = game.add_ptype[ctx.mover - 1]
    else:
        assert move.frm is not None
        pt = ptype[move.frm]
        owner[move.frm] = 0
        ptype[move.frm] = -1
        owner[move.to] = ctx.mover
        ptype[move.to] = pt
    return [
        s
        for s in run_enclosure(game, owner, ptype, ctx.mover, move.to, move.then)  # type: ignore[arg-type]
        if s not in removed
    ]


def gen_moves(
    game: CompiledGame,
    owner: np.ndarray,
    ptype: np.ndarray,
    mover: int,
    last_to: int,
    last_from: int,
    history: frozenset[int],
    cur_hash: int,
) -> tuple[Move, ...]:
    ctx = MaskCtx(game, owner, ptype, mover, last_to, last_from)
    raw = _gen_ir(game.play, ctx, None)
    if _may_duplicate(game):
        seen: set[tuple] = set()
        moves: list[Move] = []
        for mv in sorted(raw, key=Move.key):
            k = mv.key()
            if k not in seen:
                seen.add(k)
                moves.append(mv)
    else:
        moves = sorted(raw, key=Move.key)
    if game.no_repeat:
        moves = [m for m in moves if _post_hash(game, ctx, m, cur_hash) not in history]
    return tuple(moves)


def _may_duplicate(game: CompiledGame) -> bool:
    """Only 'or' composites can emit the same (kind, from, to) twice."""
    flag = game.__dict__.get("_may_dup")
    if flag is None:
        def has_or(ir: MoveIR | None) -> bool:
            if ir is None:
                return False
            return ir.kind == "or" or any(has_or(sub) for sub in ir.items)

        flag = has_or(game.play) or any(has_or(pt.move) for pt in game.ptypes)
        game.__dict__["_may_dup"] = flag
    return flag
