"""The hierarchical fitness function.

A game earns a value in {-3, -2, -1} or [0.01, 1]:

* -3  does not parse, validate, or compile
* -2  compiles but cannot be played (no opening move, or broken placements)
* -1  fails a cheap random-playout gate: win-rate gap over 0.5 between the
      seats, or fewer than half of turns offering a real choice
* otherwise the floored harmonic mean of six search-based metrics

The expensive search metrics only run once every gate has passed. Given
the same source, parameters, and seed the result is bit-identical.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..agents import AgentConfig
from ..engine import PlacementConflict, UnsupportedConstruct, compile_game, initial_state
from ..gdl import GdlError, parse_source, validate
from .metrics import (
    MetricVector,
    RandomEvalStats,
    hmean_floored,
    mcts_eval,
    random_eval,
    strategic_depth,
)


class Stage(enum.Enum):
    UNCOMPILABLE = -3
    UNPLAYABLE = -2
    GATED = -1
    SCORED = 0


@dataclass(frozen=True)
class EvalParams:
    n_random: int = 100
    n_mcts: int = 10
    n_depth: int = 10
    mcts_iterations: int = 1000
    mcts_think_time: float | None = None
    exploration_c: float = 1.4142135623730951
    move_limit: int = 50
    rollout_cap: int | None = None  # defaults to 2 * move_limit
    balance_gate: float = 0.5
    agency_gate: float = 0.5
    seed: int = 0

    def agent(self) -> AgentConfig:
        cap = self.rollout_cap if self.rollout_cap is not None else 2 * self.move_limit
        return AgentConfig(
            kind="mcts",
            iterations=self.mcts_iterations,
            think_time=self.mcts_think_time,
            exploration_c=self.exploration_c,
            rollout_cap=cap,
        )


@dataclass(frozen=True)
class TraceSummary:
    """Behavioral digest of the random-playout traces, for concept bits."""

    n: int
    mean_branching: float
    mean_length: float
    mean_coverage: float
    draws_seen: bool
    captures_seen: bool


@dataclass(frozen=True)
class Fitness:
    value: float
    stage: Stage
    metrics: MetricVector | None = None
    stats: RandomEvalStats | None = None
    detail: str = ""


@dataclass(frozen=True)
class EvalResult:
    fitness: Fitness
    summary: TraceSummary | None = None


def _summarize(traces) -> TraceSummary | None:
    if not traces:
        return None
    lengths = [t.length for t in traces]
    branching = [turn.legal_count for t in traces for turn in t.turns]
    return TraceSummary(
        n=len(traces),
        mean_branching=float(np.mean(branching)) if branching else 0.0,
        mean_length=float(np.mean(lengths)),
        mean_coverage=float(np.mean([t.coverage for t in traces])),
        draws_seen=any(t.outcome.winner == 0 for t in traces),
        captures_seen=any(t.captures_seen for t in traces),
    )


def evaluate(source: str, params: EvalParams = EvalParams()) -> EvalResult:
    try:
        tree = parse_source(source)
    except GdlError as err:
        return EvalResult(Fitness(-3.0, Stage.UNCOMPILABLE, detail=str(err)))
    report = validate(tree)
    if not report.ok:
        return EvalResult(
            Fitness(-3.0, Stage.UNCOMPILABLE, detail="; ".join(report.messages()[:3]))
        )
    try:
        game = compile_game(tree)
    except (UnsupportedConstruct, GdlError) as err:
        return EvalResult(Fitness(-3.0, Stage.UNCOMPILABLE, detail=str(err)))

    try:
        start = initial_state(game)
    except PlacementConflict as err:
        return EvalResult(Fitness(-2.0, Stage.UNPLAYABLE, detail=str(err)))
    if not start.legal:
        return EvalResult(Fitness(-2.0, Stage.UNPLAYABLE, detail="no opening move"))

    root = np.random.SeedSequence(params.seed)
    ss_random, ss_mcts, ss_depth = root.spawn(3)

    stats, traces = random_eval(game, params.n_random, params.move_limit, ss_random)
    summary = _summarize(traces)
    if stats.balance_gate < params.balance_gate or stats.agency_gate < params.agency_gate:
        return EvalResult(Fitness(-1.0, Stage.GATED, stats=stats), summary)

    agent = params.agent()
    partial, _ = mcts_eval(game, params.n_mcts, agent, params.move_limit, ss_mcts)
    depth = strategic_depth(game, params.n_depth, agent, params.move_limit, ss_depth)
    metrics = MetricVector(strategic_depth=depth, **partial)
    value = hmean_floored(metrics.values())
    return EvalResult(Fitness(value, Stage.SCORED, metrics=metrics, stats=stats), summary)


def trace_summary(source: str, params: EvalParams = EvalParams()) -> tuple[bool, TraceSummary | None]:
    """(compilable, behavioral digest) without the search-stage cost.

    Used for reference-corpus concept vectors, where only the random-playout
    behavior matters. Unplayable-but-compilable games yield (True, None).
    """
    try:
        tree = parse_source(source)
        if not validate(tree).ok:
            return False, None
        game = compile_game(tree)
    except (GdlError, UnsupportedConstruct):
        return False, None
    try:
        start = initial_state(game)
    except PlacementConflict:
        return True, None
    if not start.legal:
        return True, None
    ss = np.random.SeedSequence(params.seed).spawn(1)[0]
    _, traces = random_eval(game, params.n_random, params.move_limit, ss)
    return True, _summarize(traces)


def screen(source: str, params: EvalParams = EvalParams()) -> dict:
    """Gate-only screening: which hierarchy stage a game reaches, cheaply."""
    try:
        tree = parse_source(source)
        report = validate(tree)
        if not report.ok:
            raise GdlError("; ".join(report.messages()[:3]), 0)
        game = compile_game(tree)
    except (GdlError, UnsupportedConstruct) as err:
        return {"stage": "uncompilable", "value": -3.0, "detail": str(err)}
    try:
        start = initial_state(game)
    except PlacementConflict as err:
        return {"stage": "unplayable", "value": -2.0, "detail": str(err)}
    if not start.legal:
        return {"stage": "unplayable", "value": -2.0, "detail": "no opening move"}
    ss = np.random.SeedSequence(params.seed).spawn(1)[0]
    stats, _ = random_eval(game, params.n_random, params.move_limit, ss)
    gated = (
        stats.balance_gate < params.balance_gate
        or stats.agency_gate < params.agency_gate
    )
    return {
        "stage": "gated" if gated else "passed-gates",
        "value": -1.0 if gated else None,
        "balance_gate": stats.balance_gate,
        "agency_gate": stats.agency_gate,
    }
