"""Mutation-operator measurement: novelty and validity rates.

``novel``  -- the candidate's canonical text differs from its parent's
``valid``  -- the candidate parses, validates, and compiles
A useful operator needs both at once; the harness reports all three rates
over n attempts at uniformly sampled (game, site) pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..engine import UnsupportedConstruct, compile_game
from ..gdl import GameTree, GdlError, parse_source, print_canonical, validate
from .request import MutationRequest, mutation_sites

Operator = Callable[[MutationRequest, GameTree, np.random.Generator], "str | None"]


@dataclass(frozen=True)
class MutationStats:
    attempts: int
    novel: float
    valid: float
    novel_and_valid: float

    def row(self) -> str:
        return (
            f"{self.novel * 100:8.2f} {self.valid * 100:8.2f} "
            f"{self.novel_and_valid * 100:8.2f}"
        )


def _is_valid(source: str) -> bool:
    try:
        tree = parse_source(source)
        if not validate(tree).ok:
            return False
        compile_game(tree)
        return True
    except (GdlError, UnsupportedConstruct):
        return False


def mutation_stats(
    corpus_sources: list[str],
    operator: Operator,
    n: int,
    rng: np.random.Generator,
) -> MutationStats:
    trees = [parse_source(s) for s in corpus_sources]
    canonicals = [print_canonical(t) for t in trees]
    novel = valid = both = 0
    for _ in range(n):
        gi = int(rng.integers(len(trees)))
        tree, canon = trees[gi], canonicals[gi]
        sites = mutation_sites(tree)
        site = sites[int(rng.integers(len(sites)))]
        try:
            candidate = operator(MutationRequest(tree.source, site), tree, rng)
        except Exception:
            candidate = None
        if candidate is None:
            continue  # a failed attempt is neither novel nor valid
        is_novel = candidate != canon
        is_valid = _is_valid(candidate)
        novel += is_novel
        valid += is_valid
        both += is_novel and is_valid
    return MutationStats(
        attempts=n, novel=novel / n, valid=valid / n, novel_and_valid=both / n
    )


def stats_table(rows: dict[str, MutationStats]) -> str:
    out = [f"{'operator':<24} {'novel%':>8} {'valid%':>8} {'both%':>8}"]
    for name, st in rows.items():
        out.append(f"{name:<24} {st.row()}")
    return "\n".join(out) + "\n"
