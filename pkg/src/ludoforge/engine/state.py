"""Positions and move application.

A GameState is a value: applying a move builds a new state and never
touches the old one. Legal moves are computed eagerly on construction
(match runners, search, and move-starvation end rules all need them), so
every non-terminal state exposes a non-empty move list and a state whose
mover is stuck is already marked terminal (a draw, unless an end rule
said otherwise).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .compile import CompiledGame
from .ends import EndContext, Outcome, first_outcome
from .moves import Move, gen_moves, run_enclosure


class IllegalMove(Exception):
    pass


class PlacementConflict(Exception):
    pass


@dataclass(eq=False, slots=True)
class GameState:
    owner: np.ndarray  # int8, 0 = empty
    ptype: np.ndarray  # int8, -1 = empty
    mover: int
    last_to: int
    last_from: int
    move_counts: tuple[int, int]
    hash: int
    history: frozenset[int]
    terminal: Outcome | None
    legal: tuple[Move, ...]
    last_captures: tuple[int, ...] = ()


def _hash_arrays(
    game: CompiledGame, owner: np.ndarray, ptype: np.ndarray, mover: int
) -> int:
    h = int(game.mover_keys[mover - 1])
    for s in np.flatnonzero(owner).tolist():
        h ^= int(game.zobrist[ptype[s], s])
    return h


def position_hash(game: CompiledGame, state: GameState) -> int:
    """Recompute from scratch; depends only on placement and mover."""
    return _hash_arrays(game, state.owner, state.ptype, state.mover)


def initial_state(game: CompiledGame) -> GameState:
    s = game.board.n_sites
    owner = np.zeros(s, dtype=np.int8)
    ptype = np.full(s, -1, dtype=np.int8)
    for placement in game.start_rules:
        pt = game.ptypes[placement.ptype]
        for site in placement.sites:
            if owner[site] != 0:
                raise PlacementConflict(f"two placements target site {site}")
            owner[site] = pt.owner
            ptype[site] = pt.index
    h = _hash_arrays(game, owner, ptype, 1)
    history = frozenset((h,))
    legal = gen_moves(game, owner, ptype, 1, -1, -1, history, h)
    return GameState(
        owner=owner, ptype=ptype, mover=1, last_to=-1, last_from=-1,
        move_counts=(0, 0), hash=h, history=history, terminal=None, legal=legal,
    )


def legal_moves(game: CompiledGame, state: GameState) -> tuple[Move, ...]:
    return state.legal


def apply(game: CompiledGame, state: GameState, move: Move, check: bool = True) -> GameState:
    """Apply one move: placement update, effects, end rules, mover switch."""
    if state.terminal is not None:
        raise IllegalMove("state is terminal")
    if check:
        # resolve against the stored list; a caller-built Move carries no
        # effect annotations, the equal legal move does
        try:
            move = state.legal[state.legal.index(move)]
        except ValueError:
            raise IllegalMove(f"{move} is not legal here") from None

    owner = state.owner.copy()
    ptype = state.ptype.copy()
    mover = state.mover
    h = state.hash
    captures: list[int] = []

    def _remove(site: int) -> None:
        nonlocal h
        if owner[site] != 0:
            h ^= int(game.zobrist[ptype[site], site])
            owner[site] = 0
            ptype[site] = -1
            captures.append(site)

    for c in move.captures:
        _remove(c)
    if move.kind == "Add":
        pt = game.add_ptype[mover - 1]
        _remove(move.to)
        owner[move.to] = mover
        ptype[move.to] = pt
        h ^= int(game.zobrist[pt, move.to])
    else:
        assert move.frm is not None
        pt = int(ptype[move.frm])
        _remove(move.to)
        h ^= int(game.zobrist[pt, move.frm])
        owner[move.frm] = 0
        ptype[move.frm] = -1
        owner[move.to] = mover
        ptype[move.to] = pt
        h ^= int(game.zobrist[pt, move.to])

    if move.then is not None and move.then.kind == "enclose":
        for site in run_enclosure(game, owner, ptype, mover, move.to, move.then):
            _remove(site)

    nmover = 3 - mover
    h ^= int(game.mover_keys[mover - 1]) ^ int(game.mover_keys[nmover - 1])
    history = state.history | {h}
    counts = (
        (state.move_counts[0] + 1, state.move_counts[1])
        if mover == 1
        else (state.move_counts[0], state.move_counts[1] + 1)
    )
    last_from = -1 if move.frm is None else move.frm

    ctx = EndContext(
        game=game, owner=owner, ptype=ptype, mover=mover,
        last_to=move.to, last_from=last_from, hash=h, history=history,
    )
    end = first_outcome(ctx)
    if end is None:
        next_legal = ctx.moves_for(nmover)
        if not next_legal:
            end = Outcome(winner=0, reason="no-moves")
    else:
        next_legal = ()
    return GameState(
        owner=owner, ptype=ptype, mover=nmover,
        last_to=move.to, last_from=last_from,
        move_counts=counts, hash=h, history=history,
        terminal=end, legal=() if end else next_legal,
        last_captures=tuple(captures),
    )


def outcome(game: CompiledGame, state: GameState) -> Outcome | None:
    """End rules evaluated against a stored state.

    Anchors on the recorded last move when there is one; a state with no
    move history cannot satisfy a post-move rule.
    """
    if state.terminal is not None:
        return state.terminal
    if state.last_to < 0:
        return None
    ctx = EndContext(
        game=game, owner=state.owner, ptype=state.ptype, mover=3 - state.mover,
        last_to=state.last_to, last_from=state.last_from,
        hash=state.hash, history=state.history,
    )
    return first_outcome(ctx)
