from .metrics import (
    MetricVector,
    RandomEvalStats,
    hmean_floored,
    mcts_eval,
    random_eval,
    strategic_depth,
)
from .evaluate import EvalParams, EvalResult, Fitness, Stage, TraceSummary, evaluate, screen

__all__ = [
    "MetricVector", "RandomEvalStats", "hmean_floored",
    "mcts_eval", "random_eval", "strategic_depth",
    "EvalParams", "EvalResult", "Fitness", "Stage", "TraceSummary", "evaluate", "screen",
]
