"""Engine vs the independent 3x3 oracle: full reachable-state agreement."""

from __future__ import annotations

import numpy as np
import pytest

from ludoforge.engine import apply, compile_game, initial_state
from ludoforge.gdl import parse_source

import ttt_oracle


@pytest.fixture(scope="module")
def ttt(corpus_sources):
    return compile_game(parse_source(corpus_sources["tictactoe"]))


def _engine_reachable(game):
    """(board tuple, mover) for every engine-reachable state, plus the
    engine's legal to-sites per state."""
    start = initial_state(game)
    seen = {}
    stack = [start]
    while stack:
        state = stack.pop()
        key = (tuple(int(x) for x in state.owner), state.mover)
        if key in seen:
            continue
        seen[key] = state
        for mv in state.legal:
            stack.append(apply(game, state, mv, check=False))
    return seen


def test_exhaustive_reachable_positions(ttt):
    engine_states = _engine_reachable(ttt)
    oracle_positions = ttt_oracle.reachable_positions()
    assert len(oracle_positions) == 5478  # the classic count
    oracle_keys = {(b, ttt_oracle.mover_of(b)) for b in oracle_positions}
    assert set(engine_states) == oracle_keys


def test_movegen_matches_oracle_everywhere(ttt):
    engine_states = _engine_reachable(ttt)
    for (board, _mover), state in engine_states.items():
        oracle_moves = set(ttt_oracle.moves_of(board))
        engine_moves = {mv.to for mv in state.legal}
        assert engine_moves == oracle_moves, board


def test_terminal_agreement(ttt):
    engine_states = _engine_reachable(ttt)
    for (board, _), state in engine_states.items():
        oracle_terminal = ttt_oracle.is_terminal(board)
        assert (state.terminal is not None) == oracle_terminal, board
        if state.terminal is not None:
            assert state.terminal.winner == ttt_oracle.winner_of(board)


def test_perfect_play_is_a_draw():
    assert ttt_oracle.minimax(ttt_oracle.EMPTY) == 0


def test_random_play_expectation_known_value():
    p1, p2, draw = ttt_oracle.random_play_outcome_probs(ttt_oracle.EMPTY)
    assert abs(float(p1) - 0.585) < 0.001  # the well-known first-mover edge
    assert p1 + p2 + draw == 1
