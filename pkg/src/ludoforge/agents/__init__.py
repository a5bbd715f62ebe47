from .policies import AgentConfig, NoLegalMoves, mcts_move, random_move
from .match import MatchTrace, TurnRecord, play_match

__all__ = [
    "AgentConfig", "NoLegalMoves", "mcts_move", "random_move",
    "MatchTrace", "TurnRecord", "play_match",
]
