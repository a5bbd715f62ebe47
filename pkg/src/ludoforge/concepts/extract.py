"""Concept-vector extraction from a game's tree, board, and playout digest."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..engine import CompiledGame
from ..fitness import TraceSummary
from ..gdl.ast import GameTree, KeyArg, Node, Sym, iter_nodes
from .catalog import CATALOG_VERSION, CONCEPT_NAMES, DIMENSION


@dataclass(frozen=True)
class ConceptVector:
    bits: tuple[int, ...]
    version: str = CATALOG_VERSION

    def as_array(self) -> np.ndarray:
        return np.array(self.bits, dtype=np.float64)


def _move_kinds(tree: GameTree) -> set[str]:
    kinds = set()
    for node in iter_nodes(tree.root):
        if node.head == "move":
            for a in node.args:
                if isinstance(a, Sym):
                    kinds.add(a.name)
                    break
    return kinds


def extract_concepts(
    game: CompiledGame, tree: GameTree, summary: TraceSummary | None = None
) -> ConceptVector:
    nodes = list(iter_nodes(tree.root))
    heads = {n.head for n in nodes}
    kinds = _move_kinds(tree)
    board = game.board

    end_node = next((n for n in nodes if n.head == "end"), None)
    end_nodes = list(iter_nodes(end_node)) if end_node is not None else []
    end_heads_syms = [
        (n.head, [a.name for a in n.args if isinstance(a, Sym)]) for n in end_nodes
    ]
    end_rule_count = sum(1 for n in end_nodes if n.head == "if")
    line_lengths = [
        a
        for n in end_nodes
        if n.head == "is" and any(isinstance(x, Sym) and x.name == "Line" for x in n.args)
        for a in n.args
        if isinstance(a, int)
    ]

    def end_has(tag: str) -> bool:
        return any(tag in syms for head, syms in end_heads_syms if head == "is")

    to_clauses_with_if = any(
        n.head == "to" and any(isinstance(a, KeyArg) and a.name == "if" for a in n.args)
        for n in nodes
    )
    start_node = next((n for n in nodes if n.head == "start"), None)
    loss_seen = any(
        n.head == "result" and any(isinstance(a, Sym) and a.name == "Loss" for a in n.args)
        for n in nodes
    )
    names_p1 = {pt.name for pt in game.ptypes if pt.owner == 1}
    names_p2 = {pt.name for pt in game.ptypes if pt.owner == 2}
    asym = names_p1 != names_p2

    syntactic = {
        "board_hex": board.shape == "hex",
        "board_square": board.shape == "square",
        "board_rotated": board.rotation % 360 != 0,
        "board_small": board.n_sites <= 25,
        "board_medium": 25 < board.n_sites <= 64,
        "board_large": board.n_sites > 64,
        "move_add": "Add" in kinds,
        "move_step": "Step" in kinds,
        "move_slide": "Slide" in kinds,
        "move_hop": "Hop" in kinds,
        "move_choice": any(
            n.head == "or" and any(isinstance(a, Node) and a.head == "move" for a in n.args)
            for n in nodes
        ),
        "per_piece_moves": "forEach" in heads,
        "capture_removal": "remove" in heads,
        "capture_enclosure": "enclose" in heads,
        "placement_condition": to_clauses_with_if,
        "uses_last_move": any(n.head == "last" for n in nodes),
        "uses_neighborhood": any(
            n.head == "sites" and any(isinstance(a, Sym) and a.name == "Around" for a in n.args)
            for n in nodes
        ),
        "line_goal": end_has("Line"),
        "long_line_goal": any(x >= 5 for x in line_lengths),
        "connection_goal": end_has("Connected"),
        "corner_goal": any(
            head == "is" and "Connected" in syms and "Corners" in syms
            for head, syms in end_heads_syms
        ),
        "race_goal": any(
            head == "is" and "In" in syms for head, syms in end_heads_syms
        ),
        "starvation_goal": any(head == "no" for head, _ in end_heads_syms),
        "multiple_end_rules": end_rule_count >= 2,
        "loss_results": loss_seen,
        "no_repeat_rule": game.no_repeat,
        "has_placements": start_node is not None,
        "expanded_placements": start_node is not None
        and any(n.head == "expand" for n in iter_nodes(start_node)),
        "player_regions": bool(game.player_regions[0] or game.player_regions[1]),
        "asymmetric_pieces": asym,
        "directional_moves": "directions" in heads,
    }
    behavioral = {
        "branching_over_2": False,
        "branching_over_8": False,
        "branching_over_32": False,
        "length_over_10": False,
        "length_over_25": False,
        "draws_seen": False,
        "coverage_over_quarter": False,
        "coverage_over_half": False,
        "captures_seen": False,
    }
    if summary is not None:
        behavioral.update(
            {
                "branching_over_2": summary.mean_branching > 2,
                "branching_over_8": summary.mean_branching > 8,
                "branching_over_32": summary.mean_branching > 32,
                "length_over_10": summary.mean_length > 10,
                "length_over_25": summary.mean_length > 25,
                "draws_seen": summary.draws_seen,
                "coverage_over_quarter": summary.mean_coverage > 0.25,
                "coverage_over_half": summary.mean_coverage > 0.5,
                "captures_seen": summary.captures_seen,
            }
        )
    merged = {**syntactic, **behavioral}
    bits = tuple(int(bool(merged[name])) for name in CONCEPT_NAMES)
    assert len(bits) == DIMENSION
    return ConceptVector(bits)
