"""Random and search agents, match running, trace accounting."""

from __future__ import annotations

import numpy as np
import pytest

from ludoforge.agents import AgentConfig, NoLegalMoves, mcts_move, play_match, random_move
from ludoforge.engine import apply, compile_game, initial_state
from ludoforge.gdl import parse_source

import ttt_oracle


def test_random_move_single_choice(compiled):
    g = compiled("tictactoe")
    s = initial_state(g)
    for site in [0, 3, 1, 4, 8, 2, 5, 7]:  # leave exactly one empty, no line yet
        s = apply(g, s, next(m for m in s.legal if m.to == site))
        if s.terminal:
            break
    if s.terminal is None:
        assert len(s.legal) == 1
        mv = random_move(g, s, np.random.default_rng(0))
        assert mv == s.legal[0]


def test_random_move_uniform_on_havabu(compiled):
    g = compiled("havabu")
    s = initial_state(g)
    rng = np.random.default_rng(123)
    counts = np.zeros(64, dtype=int)
    n = 10_000
    for _ in range(n):
        counts[random_move(g, s, rng).to] += 1
    freqs = counts / n
    assert np.all(np.abs(freqs - 1 / 64) < 0.01)


def test_random_move_terminal_raises(compiled):
    g = compiled("tictactoe")
    s = initial_state(g)
    for site in [0, 3, 1, 4, 2]:
        s = apply(g, s, next(m for m in s.legal if m.to == site))
    with pytest.raises(NoLegalMoves):
        random_move(g, s, np.random.default_rng(0))


def test_random_move_reproducible(compiled):
    g = compiled("havabu")
    s = initial_state(g)
    a = random_move(g, s, np.random.default_rng(9))
    b = random_move(g, s, np.random.default_rng(9))
    assert a == b


def test_mcts_deterministic(compiled):
    g = compiled("tictactoe")
    s = initial_state(g)
    cfg = AgentConfig(iterations=300, rollout_cap=20)
    a = mcts_move(g, s, cfg, np.random.default_rng(4))
    b = mcts_move(g, s, cfg, np.random.default_rng(4))
    assert a == b


def test_mcts_one_iteration_is_defined(compiled):
    g = compiled("tictactoe")
    s = initial_state(g)
    mv = mcts_move(g, s, AgentConfig(iterations=1), np.random.default_rng(0))
    assert mv in s.legal


def test_mcts_finds_forced_win_yavago(compiled):
    """One move from a five-line: search must fill the gap (one-ply oracle)."""
    g = compiled("yavago")
    board = g.board
    run = [0]
    for _ in range(4):
        run.append(int(board.nbr[0, run[-1]]))
    p1 = [run[0], run[1], run[3], run[4]]
    p2 = [int(c) for c in board.regions["Corners"].tolist() if c not in run][:4]
    s = initial_state(g)
    for site in [p1[0], p2[0], p1[1], p2[1], p1[2], p2[2], p1[3], p2[3]]:
        s = apply(g, s, next(m for m in s.legal if m.to == site))
    winning = {
        m.to for m in s.legal if apply(g, s, m, check=False).terminal is not None
        and apply(g, s, m, check=False).terminal.winner == 1
    }
    assert run[2] in winning  # the oracle agrees the gap wins
    mv = mcts_move(g, s, AgentConfig(iterations=300, rollout_cap=30), np.random.default_rng(2))
    assert mv.to in winning


def test_mcts_matches_ttt_oracle_value(compiled):
    """From a position where only one move avoids a loss, search finds it."""
    g = compiled("tictactoe")
    # X threatens the 0-1-2 row with 0 and 1 already placed
    s = initial_state(g)
    for site in [0, 4, 1]:
        s = apply(g, s, next(m for m in s.legal if m.to == site))
    # O to move; blocking at 2 is forced (oracle: all other moves lose)
    board = (1, 1, 0, 0, 2, 0, 0, 0, 0)
    losing = [
        site for site in ttt_oracle.moves_of(board)
        if ttt_oracle.minimax(ttt_oracle.play(board, site)) == 1
    ]
    assert set(losing) == set(ttt_oracle.moves_of(board)) - {2}
    mv = mcts_move(g, s, AgentConfig(iterations=600, rollout_cap=20), np.random.default_rng(3))
    assert mv.to == 2


def test_mcts_symmetric_moves_get_similar_visits(compiled):
    """Two mirror-image replies should split attention roughly evenly."""
    from ludoforge.agents.policies import _Node
    import math

    g = compiled("tictactoe")
    s = initial_state(g)
    for site in [4, 0]:  # X center, O corner; corners 2 and 6 mirror each other
        s = apply(g, s, next(m for m in s.legal if m.to == site))
    # count visits by running the search loop through the public API: rerun
    # mcts and inspect via a fresh tree built the same way
    cfg = AgentConfig(iterations=10_000, rollout_cap=20)
    rng = np.random.default_rng(11)
    # rebuild the root search to read visit counts
    from ludoforge.agents import policies

    root = policies._Node(s)
    c = cfg.exploration_c
    for _ in range(cfg.iterations):
        path, node = [root], root
        while node.state.terminal is None and not node.unexpanded:
            log_n = math.log(node.visits)
            best_i, best = 0, -1.0
            for i, ch in enumerate(node.children):
                score = (1.0 - ch.value / ch.visits) + c * math.sqrt(log_n / ch.visits)
                if score > best:
                    best_i, best = i, score
            node = node.children[best_i]
            path.append(node)
        if node.state.terminal is None and node.unexpanded:
            mi = node.unexpanded.pop(int(rng.integers(len(node.unexpanded))))
            child = policies._Node(apply(g, node.state, node.moves[mi], check=False))
            node.children[mi] = child
            node = child
            path.append(node)
        winner = (
            node.state.terminal.winner
            if node.state.terminal is not None
            else policies._rollout(g, node.state, rng, cfg.rollout_cap)
        )
        for n in path:
            n.visits += 1
            n.value += policies._outcome_value(winner, n.state.mover)
    visits = {mv.to: (ch.visits if ch else 0) for mv, ch in zip(root.moves, root.children)}
    v2, v6 = visits[2], visits[6]
    assert abs(v2 - v6) / max(v2, v6) < 0.2


def test_play_match_move_limit(compiled):
    g = compiled("gomoku")
    cfg = AgentConfig(kind="random")
    trace = play_match(g, (cfg, cfg), 1, np.random.default_rng(0))
    assert trace.outcome.winner == 0
    assert trace.outcome.reason == "move-limit"
    assert trace.length <= 2


def test_play_match_trace_accounting(compiled):
    for name in ("havabu6", "hopthrough6", "yavago"):
        g = compiled(name)
        cfg = AgentConfig(kind="random")
        for seed in range(5):
            t = play_match(g, (cfg, cfg), 50, np.random.default_rng(seed))
            assert t.initial_occupied + sum(r.new_sites for r in t.turns) == t.ever_occupied
            assert t.move_counts[0] <= 50 and t.move_counts[1] <= 50
            assert 0.0 <= t.coverage <= 1.0


def test_add_only_coverage_equals_length(compiled):
    g = compiled("havabu")  # no removals, no start placements
    cfg = AgentConfig(kind="random")
    t = play_match(g, (cfg, cfg), 50, np.random.default_rng(3))
    assert t.ever_occupied == t.length
    assert t.coverage == t.length / 64


def test_match_determinism(compiled):
    g = compiled("breakthrough6")
    cfg = AgentConfig(kind="mcts", iterations=30, rollout_cap=10)
    t1 = play_match(g, (cfg, cfg), 20, np.random.default_rng(7))
    t2 = play_match(g, (cfg, cfg), 20, np.random.default_rng(7))
    assert [r.move for r in t1.turns] == [r.move for r in t2.turns]
    assert t1.outcome == t2.outcome


def test_mcts_beats_random_smoke(compiled):
    """Cheap version of the dominance check (the full one runs in acceptance)."""
    g = compiled("tictactoe")
    mcts = AgentConfig(kind="mcts", iterations=300, rollout_cap=12)
    rnd = AgentConfig(kind="random")
    rng = np.random.default_rng(20)
    wins = losses = 0
    for i in range(40):
        seat = (i % 2) + 1
        agents = (mcts, rnd) if seat == 1 else (rnd, mcts)
        t = play_match(g, agents, 20, rng)
        if t.outcome.winner == seat:
            wins += 1
        elif t.outcome.winner != 0:
            losses += 1
    assert wins >= 8 * max(1, losses)
