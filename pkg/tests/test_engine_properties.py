"""Cross-cutting engine properties: conservation, hashing, repetition,
connectivity monotonicity, and brute-force movegen agreement on small boards."""

from __future__ import annotations

import numpy as np
import pytest

from ludoforge.engine import (
    IllegalMove,
    PlacementConflict,
    apply,
    compile_game,
    initial_state,
    position_hash,
)
from ludoforge.engine.kernels import label_components
from ludoforge.gdl import parse_source


STEP_CYCLE = """
(game "Walkabout"
  (players 2)
  (equipment {
    (board (square 4))
    (piece "Walker" Each (move Step (to if:(is Empty (to)))))
  })
  (rules
    (start {
      (place "Walker1" (sites Bottom))
      (place "Walker2" (sites Top))
    })
    (play (forEach Piece))
  )
)
"""

STEP_CYCLE_NOREPEAT = STEP_CYCLE.replace(
    "(rules", "(rules\n    (meta (no Repeat))", 1
)


def _random_playout(game, plies, seed):
    s = initial_state(game)
    rng = np.random.default_rng(seed)
    states = [s]
    for _ in range(plies):
        if s.terminal is not None or not s.legal:
            break
        s = apply(game, s, s.legal[int(rng.integers(len(s.legal)))], check=False)
        states.append(s)
    return states


def test_piece_conservation_yavago(compiled):
    g = compiled("yavago")
    for seed in range(4):
        states = _random_playout(g, 80, seed)
        for prev, cur in zip(states, states[1:]):
            before = int((prev.owner != 0).sum())
            after = int((cur.owner != 0).sum())
            assert after <= before + 1  # a move adds at most the placed piece


def test_apply_rejects_illegal(compiled):
    g = compiled("tictactoe")
    s = initial_state(g)
    mv = s.legal[0]
    s2 = apply(g, s, mv)
    with pytest.raises(IllegalMove):
        apply(g, s2, mv)  # same site again


def test_apply_on_terminal_raises(compiled):
    g = compiled("tictactoe")
    s = initial_state(g)
    for site in [0, 3, 1, 4, 2]:
        s = apply(g, s, next(m for m in s.legal if m.to == site))
    assert s.terminal is not None
    from ludoforge.engine import Move

    with pytest.raises(IllegalMove):
        apply(g, s, Move("Add", None, 8))
    assert s.legal == ()


def test_placement_conflict():
    src = """
(game "Clash"
  (players 2)
  (equipment {(board (square 4)) (piece "P" Each (move Step (to if:(is Empty (to)))))})
  (rules
    (start {(place "P1" (sites Bottom)) (place "P2" (sites Bottom))})
    (play (forEach Piece))
  )
)
"""
    g = compile_game(parse_source(src))
    with pytest.raises(PlacementConflict):
        initial_state(g)


def test_hash_depends_only_on_placement_and_mover():
    g = compile_game(parse_source(STEP_CYCLE))
    s0 = initial_state(g)

    def run(seq):
        s = s0
        for frm, to in seq:
            s = apply(g, s, next(m for m in s.legal if m.frm == frm and m.to == to))
        return s

    # two interleavings of the same two moves per player
    a = run([(0, 4), (12, 8), (1, 5), (13, 9)])
    b = run([(1, 5), (13, 9), (0, 4), (12, 8)])
    assert np.array_equal(a.owner, b.owner) and a.mover == b.mover
    assert a.hash == b.hash
    assert position_hash(g, a) == position_hash(g, b)


def test_four_move_cycle_restores_hash():
    g = compile_game(parse_source(STEP_CYCLE))
    s0 = initial_state(g)
    h0 = s0.hash
    # P1: 0 -> 4, P2: 12 -> 8, P1: 4 -> 0, P2: 8 -> 12 returns to the start
    seq = [(0, 4), (12, 8), (4, 0), (8, 12)]
    s = s0
    for frm, to in seq:
        mv = next(m for m in s.legal if m.frm == frm and m.to == to)
        s = apply(g, s, mv)
    assert s.terminal is None
    assert np.array_equal(s.owner, s0.owner)
    assert s.mover == s0.mover
    assert s.hash == h0
    assert position_hash(g, s) == position_hash(g, s0) == h0


def test_incremental_hash_matches_recompute(compiled):
    for name in ("yavago", "breakthrough6", "hopthrough6"):
        g = compiled(name)
        for s in _random_playout(g, 40, 9):
            assert s.hash == position_hash(g, s)


def test_no_repeat_excludes_cycle_close():
    g = compile_game(parse_source(STEP_CYCLE_NOREPEAT))
    g_free = compile_game(parse_source(STEP_CYCLE))
    seq = [(0, 4), (12, 8), (4, 0)]
    s, s_free = initial_state(g), initial_state(g_free)
    for frm, to in seq:
        s = apply(g, s, next(m for m in s.legal if m.frm == frm and m.to == to))
        s_free = apply(
            g_free, s_free, next(m for m in s_free.legal if m.frm == frm and m.to == to)
        )
    free_moves = {(m.frm, m.to) for m in s_free.legal}
    guarded_moves = {(m.frm, m.to) for m in s.legal}
    assert (8, 12) in free_moves  # closing the loop is fine without the meta rule
    assert (8, 12) not in guarded_moves  # excluded: would repeat the start position
    assert guarded_moves == free_moves - {(8, 12)}


def test_distinct_positions_distinct_hashes(compiled):
    g = compiled("gomoku7")
    seen = {}
    for seed in range(3):
        for s in _random_playout(g, 30, seed):
            key = (s.owner.tobytes(), s.mover)
            h = s.hash
            if key in seen:
                assert seen[key] == h
            seen[key] = h
    hashes = {}
    for key, h in seen.items():
        assert hashes.setdefault(h, key) == key  # no collisions observed


def test_connectivity_never_breaks_for_mover(compiled):
    """Placing a stone may merge groups of the placing player, never split."""
    g = compiled("havabu6")
    rel = g.board.nbr  # Adjacent relation
    for seed in range(3):
        states = _random_playout(g, 30, seed)
        for prev, cur in zip(states, states[1:]):
            who = prev.mover
            before = np.asarray(label_components((prev.owner == who).astype(np.uint8), rel))
            after = np.asarray(label_components((cur.owner == who).astype(np.uint8), rel))
            pairs = {}
            for site in np.flatnonzero(prev.owner == who):
                pairs.setdefault(int(before[site]), set()).add(int(after[site]))
            for group in pairs.values():
                assert len(group) == 1  # old group stayed whole


def test_apply_keeps_state_invariants(compiled):
    for name in ("havabu6", "sliderace", "breakthrough6"):
        g = compiled(name)
        for s in _random_playout(g, 50, 21):
            assert s.mover in (1, 2)
            if s.terminal is not None:
                assert s.legal == ()
            assert s.hash in s.history
            occupied = s.owner != 0
            assert np.array_equal(occupied, s.ptype >= 0)
