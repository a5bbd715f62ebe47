from .board import BoardGraph, build_hex, build_square
from .compile import CompiledGame, UnsupportedConstruct, compile_game
from .ends import Outcome
from .moves import Move
from .state import (
    GameState,
    IllegalMove,
    PlacementConflict,
    apply,
    initial_state,
    legal_moves,
    outcome,
    position_hash,
)

__all__ = [
    "BoardGraph", "build_hex", "build_square",
    "CompiledGame", "UnsupportedConstruct", "compile_game",
    "Outcome", "Move",
    "GameState", "IllegalMove", "PlacementConflict",
    "apply", "initial_state", "legal_moves", "outcome", "position_hash",
]
