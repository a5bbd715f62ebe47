"""The metric definitions, gates, and the evaluation hierarchy."""

from __future__ import annotations

import dataclasses

import numpy as np
import pytest

from ludoforge.fitness import EvalParams, Stage, evaluate, hmean_floored
from ludoforge.fitness.metrics import mcts_eval, random_eval, strategic_depth
from ludoforge.fitness.evaluate import screen, trace_summary
from ludoforge.agents import AgentConfig
from ludoforge.engine import compile_game
from ludoforge.gdl import parse_source

FAST = EvalParams(
    n_random=40, n_mcts=4, n_depth=4, mcts_iterations=60,
    move_limit=30, rollout_cap=12, seed=11,
)

FIRST_MOVE_WIN = (
    '(game "Flash" (players 2) '
    '(equipment {(board (square 3)) (piece "D" Each)}) '
    "(rules (play (move Add (to (sites Empty)))) "
    "(end (if (is Line 1) (result Mover Win)))))"
)

CORRIDOR = (
    '(game "Corridor" (players 2) '
    '(equipment {(board (square 8)) (piece "D" Each)}) '
    "(rules (play (or "
    "(move Add (to (sites Top) if:(is In (to) (sites Around (last To))))) "
    "(move Add (to (sites Corners) if:(not (is Occupied (last To)))))"
    "))))"
)


# --- hmean -------------------------------------------------------------------

def test_hmean_all_ones():
    assert hmean_floored([1.0] * 6) == 1.0


def test_hmean_floored_exact_value():
    assert abs(hmean_floored([1, 1, 1, 1, 1, 0]) - 6 / 105) < 1e-12


def test_hmean_constant_vector():
    assert hmean_floored([0.5] * 6) == pytest.approx(0.5)


def test_hmean_empty_raises():
    with pytest.raises(ValueError):
        hmean_floored([])


def test_hmean_bounds_and_monotonicity():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        v = rng.random(6)
        h = hmean_floored(v.tolist())
        assert 0.01 <= h <= 1.0
        floored = np.maximum(v, 0.01)
        assert floored.min() - 1e-12 <= h <= floored.max() + 1e-12
        assert h <= floored.mean() + 1e-12  # harmonic never above arithmetic
        i = int(rng.integers(6))
        w = v.copy()
        w[i] = min(1.0, w[i] + rng.random() * (1 - w[i]))
        assert hmean_floored(w.tolist()) >= h - 1e-12


# --- random_eval -------------------------------------------------------------

def test_random_eval_balance_symmetric(compiled):
    g = compiled("squava")
    stats, traces = random_eval(g, 100, 30, np.random.SeedSequence(5))
    assert stats.win_rate_p1 + stats.win_rate_p2 + stats.draw_rate == pytest.approx(1.0)
    assert stats.balance_gate > 0.7  # symmetric game, naive play
    assert len(traces) == 100


def test_random_eval_first_move_win_gate():
    g = compile_game(parse_source(FIRST_MOVE_WIN))
    stats, _ = random_eval(g, 50, 30, np.random.SeedSequence(1))
    assert stats.win_rate_p1 == 1.0
    assert stats.balance_gate == 0.0


def test_random_eval_agency_gate_low_for_corridor():
    g = compile_game(parse_source(CORRIDOR))
    stats, _ = random_eval(g, 60, 30, np.random.SeedSequence(2))
    assert stats.agency_gate < 0.5
    assert stats.balance_gate == 1.0  # all draws


# --- mcts_eval / strategic depth ---------------------------------------------

def test_mcts_eval_definitions(compiled):
    g = compiled("tictactoe")
    agent = AgentConfig(iterations=40, rollout_cap=10)
    metrics, traces = mcts_eval(g, 6, agent, 20, np.random.SeedSequence(3))
    draws = sum(1 for t in traces if t.outcome.winner == 0)
    by_rule = sum(1 for t in traces if t.outcome.reason.startswith("rule:"))
    assert metrics["decisiveness"] == pytest.approx(1 - draws / 6)
    assert metrics["completion"] == pytest.approx(by_rule / 6)
    for key in ("balance", "agency", "coverage"):
        assert 0.0 <= metrics[key] <= 1.0


def test_strategic_depth_bounds(compiled):
    g = compiled("tictactoe")
    agent = AgentConfig(iterations=200, rollout_cap=12)
    d = strategic_depth(g, 10, agent, 20, np.random.SeedSequence(4))
    assert 0.0 <= d <= 1.0
    assert d >= 0.5  # search should not lose to noise overall


# --- evaluate: the hierarchy ---------------------------------------------------

def test_evaluate_broken_syntax():
    r = evaluate("(game ", FAST)
    assert r.fitness.stage is Stage.UNCOMPILABLE and r.fitness.value == -3.0


def test_evaluate_empty_file():
    r = evaluate("", FAST)
    assert r.fitness.value == -3.0


def test_evaluate_no_board():
    src = (
        '(game "X" (players 2) (equipment {(piece "D" Each)}) '
        "(rules (play (move Add (to (sites Empty))))))"
    )
    r = evaluate(src, FAST)
    assert r.fitness.value == -3.0


def test_evaluate_no_placements_unplayable():
    src = (
        '(game "X" (players 2) '
        '(equipment {(board (square 4)) (piece "D" Each (move Step (to if:(is Empty (to)))))}) '
        "(rules (play (forEach Piece))))"
    )
    r = evaluate(src, FAST)
    assert r.fitness.stage is Stage.UNPLAYABLE and r.fitness.value == -2.0


def test_evaluate_first_move_win_gated():
    r = evaluate(FIRST_MOVE_WIN, FAST)
    assert r.fitness.stage is Stage.GATED and r.fitness.value == -1.0
    assert r.fitness.stats is not None
    assert r.fitness.stats.balance_gate < 0.5


def test_evaluate_corridor_gated_by_agency():
    r = evaluate(CORRIDOR, FAST)
    assert r.fitness.stage is Stage.GATED
    assert r.fitness.stats.agency_gate < 0.5
    assert r.fitness.stats.balance_gate >= 0.5


def test_evaluate_healthy_scored(corpus_sources):
    r = evaluate(corpus_sources["tictactoe"], FAST)
    assert r.fitness.stage is Stage.SCORED
    assert 0.01 <= r.fitness.value <= 1.0
    assert r.fitness.metrics is not None
    assert r.summary is not None


def test_evaluate_codomain(corpus_sources):
    no_placements = (
        '(game "X" (players 2) '
        '(equipment {(board (square 4)) (piece "D" Each (move Step (to if:(is Empty (to)))))}) '
        "(rules (play (forEach Piece))))"
    )
    values = set()
    for src in (FIRST_MOVE_WIN, CORRIDOR, corpus_sources["tictactoe"], "(game", no_placements):
        r = evaluate(src, FAST)
        v = r.fitness.value
        assert v in (-3.0, -2.0, -1.0) or 0.01 <= v <= 1.0
        values.add(r.fitness.stage)
    assert len(values) == 4  # all four stages exercised


def test_evaluate_reproducible(corpus_sources):
    a = evaluate(corpus_sources["squava"], FAST)
    b = evaluate(corpus_sources["squava"], FAST)
    assert a.fitness == b.fitness
    assert a.summary == b.summary


def test_evaluate_seed_changes_playouts(corpus_sources):
    a = evaluate(corpus_sources["squava"], FAST)
    b = evaluate(corpus_sources["squava"], dataclasses.replace(FAST, seed=99))
    assert a.fitness.stats != b.fitness.stats  # different playouts sampled


def test_gate_stage_skips_search(monkeypatch):
    """Gated games must never pay for the expensive search stage."""
    import sys

    ev = sys.modules["ludoforge.fitness.evaluate"]

    def boom(*args, **kwargs):
        raise AssertionError("search stage ran for a gated game")

    monkeypatch.setattr(ev, "mcts_eval", boom)
    monkeypatch.setattr(ev, "strategic_depth", boom)
    r = ev.evaluate(FIRST_MOVE_WIN, FAST)
    assert r.fitness.stage is Stage.GATED


def test_screen_stages(corpus_sources):
    assert screen("(game", FAST)["stage"] == "uncompilable"
    assert screen(FIRST_MOVE_WIN, FAST)["stage"] == "gated"
    assert screen(corpus_sources["tictactoe"], FAST)["stage"] == "passed-gates"


def test_trace_summary_matches_full_eval(corpus_sources):
    ok, summary = trace_summary(corpus_sources["squava"], FAST)
    full = evaluate(corpus_sources["squava"], FAST)
    assert ok and summary == full.summary
