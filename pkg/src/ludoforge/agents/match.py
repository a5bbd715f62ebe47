"""Match runner with a per-player move limit.

The trace records, per turn, the mover, the move, how many legal moves the
mover had (agency), and how many board sites were occupied for the first
time in this match (coverage). Matches that hit the move limit are draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..engine import CompiledGame, GameState, Move, Outcome, apply, initial_state
from .policies import AgentConfig, mcts_move, random_move


@dataclass(frozen=True, slots=True)
class TurnRecord:
    player: int
    move: Move
    legal_count: int
    new_sites: int


@dataclass(frozen=True)
class MatchTrace:
    turns: tuple[TurnRecord, ...]
    outcome: Outcome
    move_counts: tuple[int, int]
    initial_occupied: int
    ever_occupied: int
    n_sites: int
    captures_seen: bool

    @property
    def coverage(self) -> float:
        return self.ever_occupied / self.n_sites if self.n_sites else 0.0

    @property
    def length(self) -> int:
        return len(self.turns)


def _pick(game, state, cfg: AgentConfig, rng) -> Move:
    if cfg.kind == "random":
        return random_move(game, state, rng)
    return mcts_move(game, state, cfg, rng)


def play_match(
    game: CompiledGame,
    agents: tuple[AgentConfig, AgentConfig],
    move_limit: int,
    rng: np.random.Generator,
    start: GameState | None = None,
) -> MatchTrace:
    state = initial_state(game) if start is None else start
    ever = state.owner != 0
    initial_occupied = int(ever.sum())
    turns: list[TurnRecord] = []
    captures_seen = False

    while True:
        if state.terminal is not None:
            outcome = state.terminal
            break
        if not state.legal:
            outcome = Outcome(winner=0, reason="no-moves")
            break
        if state.move_counts[0] >= move_limit or state.move_counts[1] >= move_limit:
            outcome = Outcome(winner=0, reason="move-limit")
            break
        player = state.mover
        legal_count = len(state.legal)
        move = _pick(game, state, agents[player - 1], rng)
        state = apply(game, state, move, check=False)
        newly = int((~ever[state.owner != 0]).sum())
        ever |= state.owner != 0
        if state.last_captures:
            captures_seen = True
        turns.append(TurnRecord(player, move, legal_count, newly))

    return MatchTrace(
        turns=tuple(turns),
        outcome=outcome,
        move_counts=state.move_counts,
        initial_occupied=initial_occupied,
        ever_occupied=int(ever.sum()),
        n_sites=game.board.n_sites,
        captures_seen=captures_seen,
    )
