"""Move-selection policies: uniform random and UCT search.

Both are deterministic given (state, config, rng state). The search budget
is iteration-based by default so evaluations reproduce bit-for-bit; a
wall-clock budget exists for interactive play.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from ..engine import CompiledGame, GameState, Move, apply


class NoLegalMoves(Exception):
    pass


@dataclass(frozen=True)
class AgentConfig:
    kind: str = "mcts"  # "random" | "mcts"
    iterations: int = 1000
    think_time: float | None = None  # seconds; overrides iterations when set
    exploration_c: float = math.sqrt(2.0)
    rollout_cap: int = 100  # plies; truncated rollouts score as draws


def random_move(game: CompiledGame, state: GameState, rng: np.random.Generator) -> Move:
    if state.terminal is not None or not state.legal:
        raise NoLegalMoves("no legal moves")
    return state.legal[int(rng.integers(len(state.legal)))]


class _Node:
    __slots__ = ("state", "visits", "value", "children", "unexpanded", "moves")

    def __init__(self, state: GameState):
        self.state = state
        self.visits = 0
        self.value = 0.0  # accumulated from the perspective of state.mover
        self.moves = state.legal
        self.children: list[_Node | None] = [None] * len(self.moves)
        self.unexpanded = list(range(len(self.moves)))


def _outcome_value(winner: int, perspective: int) -> float:
    if winner == 0:
        return 0.5
    return 1.0 if winner == perspective else 0.0


def _rollout(
    game: CompiledGame, state: GameState, rng: np.random.Generator, cap: int
) -> int:
    plies = 0
    while state.terminal is None and plies < cap:
        mv = state.legal[int(rng.integers(len(state.legal)))]
        state = apply(game, state, mv, check=False)
        plies += 1
    return state.terminal.winner if state.terminal is not None else 0


def mcts_move(
    game: CompiledGame,
    state: GameState,
    config: AgentConfig,
    rng: np.random.Generator,
) -> Move:
    """UCT: mean value + c*sqrt(ln N / n), random rollouts, most-visited root move."""
    if state.terminal is not None or not state.legal:
        raise NoLegalMoves("no legal moves")
    root = _Node(state)
    c = config.exploration_c

    deadline = None
    if config.think_time is not None:
        deadline = time.monotonic() + config.think_time
    iteration = 0
    while True:
        if deadline is None:
            if iteration >= max(1, config.iterations):
                break
        elif time.monotonic() >= deadline and iteration >= 1:
            break
        iteration += 1

        path = [root]
        node = root
        # selection
        while node.state.terminal is None and not node.unexpanded:
            log_n = math.log(node.visits)
            best_i, best_score = 0, -1.0
            for i, child in enumerate(node.children):
                assert child is not None
                mean = child.value / child.visits
                # child.value is from the child mover's perspective: flip
                score = (1.0 - mean) + c * math.sqrt(log_n / child.visits)
                if score > best_score:
                    best_i, best_score = i, score
            node = node.children[best_i]  # type: ignore[assignment]
            path.append(node)
        # expansion
        if node.state.terminal is None and node.unexpanded:
            pick = int(rng.integers(len(node.unexpanded)))
            move_i = node.unexpanded.pop(pick)
            child = _Node(apply(game, node.state, node.moves[move_i], check=False))
            node.children[move_i] = child
            node = child
            path.append(node)
        # evaluation
        if node.state.terminal is not None:
            winner = node.state.terminal.winner
        else:
            winner = _rollout(game, node.state, rng, config.rollout_cap)
        # backup, each node scored from its own mover's perspective
        for n in path:
            n.visits += 1
            n.value += _outcome_value(winner, n.state.mover)

    visits = [(-1 if ch is None else ch.visits) for ch in root.children]
    best = int(np.argmax(visits))
    return root.moves[best]
