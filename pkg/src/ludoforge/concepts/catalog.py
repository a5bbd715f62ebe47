"""The concept catalog: 40 boolean game features, order-stable.

Syntactic concepts read the parsed tree and compiled board; behavioral
concepts threshold statistics from random playouts and default to 0 when
no trace data exists (a game that was never playable still gets a
well-defined, syntactic-only vector).

The catalog is versioned: archive coordinates are only comparable between
vectors extracted under the same version.
"""

from __future__ import annotations

CATALOG_VERSION = "mini-40/1"

SYNTACTIC_CONCEPTS = (
    "board_hex",
    "board_square",
    "board_rotated",
    "board_small",        # <= 25 sites
    "board_medium",       # 26..64 sites
    "board_large",        # > 64 sites
    "move_add",
    "move_step",
    "move_slide",
    "move_hop",
    "move_choice",        # an 'or' over move rules
    "per_piece_moves",    # forEach Piece
    "capture_removal",    # any remove effect
    "capture_enclosure",
    "placement_condition",  # if: filter on a to clause
    "uses_last_move",
    "uses_neighborhood",  # (sites Around ...)
    "line_goal",
    "long_line_goal",     # line length >= 5
    "connection_goal",
    "corner_goal",
    "race_goal",          # is In (last To)
    "starvation_goal",    # no Moves in an end rule
    "multiple_end_rules",
    "loss_results",
    "no_repeat_rule",
    "has_placements",
    "expanded_placements",
    "player_regions",
    "asymmetric_pieces",  # a piece owned by one player only
    "directional_moves",
)

BEHAVIORAL_CONCEPTS = (
    "branching_over_2",
    "branching_over_8",
    "branching_over_32",
    "length_over_10",
    "length_over_25",
    "draws_seen",
    "coverage_over_quarter",
    "coverage_over_half",
    "captures_seen",
)

CONCEPT_NAMES = SYNTACTIC_CONCEPTS + BEHAVIORAL_CONCEPTS
DIMENSION = len(CONCEPT_NAMES)
assert DIMENSION == 40
