"""Gameplay metrics pooled over batches of playouts.

Every metric lands in [0, 1] with 1 meaning good. Balance is one minus the
largest pairwise win-rate difference; agency pools turns across all
playouts of the batch; completion counts only games ended by an end rule
(move-limit and starvation terminations are non-completions).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..agents import AgentConfig, MatchTrace, play_match
from ..engine import CompiledGame


@dataclass(frozen=True)
class RandomEvalStats:
    n: int
    win_rate_p1: float
    win_rate_p2: float
    draw_rate: float
    balance_gate: float
    agency_gate: float


@dataclass(frozen=True)
class MetricVector:
    balance: float
    decisiveness: float
    completion: float
    agency: float
    coverage: float
    strategic_depth: float

    def values(self) -> tuple[float, ...]:
        return (
            self.balance, self.decisiveness, self.completion,
            self.agency, self.coverage, self.strategic_depth,
        )


def hmean_floored(values: list[float] | tuple[float, ...], floor: float = 0.01) -> float:
    """Harmonic mean with each input lifted to at least ``floor``."""
    if not values:
        raise ValueError("hmean_floored needs at least one value")
    return len(values) / sum(1.0 / max(v, floor) for v in values)


def _agency(traces: list[MatchTrace]) -> float:
    turns = sum(t.length for t in traces)
    if turns == 0:
        return 0.0
    rich = sum(1 for t in traces for turn in t.turns if turn.legal_count > 1)
    return rich / turns


def _balance(traces: list[MatchTrace]) -> float:
    n = len(traces)
    w1 = sum(1 for t in traces if t.outcome.winner == 1) / n
    w2 = sum(1 for t in traces if t.outcome.winner == 2) / n
    return 1.0 - abs(w1 - w2)


def run_matches(
    game: CompiledGame,
    agents: tuple[AgentConfig, AgentConfig],
    n: int,
    move_limit: int,
    seed_seq: np.random.SeedSequence,
) -> list[MatchTrace]:
    children = seed_seq.spawn(n)
    return [
        play_match(game, agents, move_limit, np.random.Generator(np.random.PCG64(c)))
        for c in children
    ]


def random_eval(
    game: CompiledGame,
    n: int,
    move_limit: int,
    seed_seq: np.random.SeedSequence,
) -> tuple[RandomEvalStats, list[MatchTrace]]:
    cfg = AgentConfig(kind="random")
    traces = run_matches(game, (cfg, cfg), n, move_limit, seed_seq)
    w1 = sum(1 for t in traces if t.outcome.winner == 1) / n
    w2 = sum(1 for t in traces if t.outcome.winner == 2) / n
    stats = RandomEvalStats(
        n=n,
        win_rate_p1=w1,
        win_rate_p2=w2,
        draw_rate=1.0 - w1 - w2,
        balance_gate=1.0 - abs(w1 - w2),
        agency_gate=_agency(traces),
    )
    return stats, traces


def mcts_eval(
    game: CompiledGame,
    n: int,
    agent: AgentConfig,
    move_limit: int,
    seed_seq: np.random.SeedSequence,
) -> tuple[dict, list[MatchTrace]]:
    """Balance, decisiveness, completion, agency, coverage from self-play."""
    traces = run_matches(game, (agent, agent), n, move_limit, seed_seq)
    decisive = sum(1 for t in traces if t.outcome.winner != 0) / n
    complete = sum(1 for t in traces if t.outcome.reason.startswith("rule:")) / n
    metrics = {
        "balance": _balance(traces),
        "decisiveness": decisive,
        "completion": complete,
        "agency": _agency(traces),
        "coverage": float(np.mean([t.coverage for t in traces])),
    }
    return metrics, traces


def strategic_depth(
    game: CompiledGame,
    n: int,
    agent: AgentConfig,
    move_limit: int,
    seed_seq: np.random.SeedSequence,
) -> float:
    """Share of games a search agent wins against a random agent,
    alternating seats; draws count as not won."""
    rnd = AgentConfig(kind="random")
    children = seed_seq.spawn(n)
    wins = 0
    for i, child in enumerate(children):
        mcts_seat = (i % 2) + 1
        agents = (agent, rnd) if mcts_seat == 1 else (rnd, agent)
        trace = play_match(
            game, agents, move_limit, np.random.Generator(np.random.PCG64(child))
        )
        if trace.outcome.winner == mcts_seat:
            wins += 1
    return wins / n
