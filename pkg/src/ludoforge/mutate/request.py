"""Mutation requests: a site to rewrite, framed as (prefix, target, suffix)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..gdl import ExpressionSite, GameTree, extract_expressions


class NoSites(Exception):
    pass


@dataclass(frozen=True)
class MutationRequest:
    source: str
    site: ExpressionSite

    @property
    def prefix(self) -> str:
        return self.source[: self.site.span[0]]

    @property
    def target(self) -> str:
        return self.source[self.site.span[0] : self.site.span[1]]

    @property
    def suffix(self) -> str:
        return self.source[self.site.span[1] :]


def mutation_sites(tree: GameTree) -> list[ExpressionSite]:
    """Every expression except the whole game (rewriting the root would be
    regeneration, not mutation)."""
    return extract_expressions(tree)[1:]


def make_request(
    tree: GameTree,
    rng: np.random.Generator,
    bandit=None,
) -> MutationRequest:
    sites = mutation_sites(tree)
    if not sites:
        raise NoSites("tree has no inner expressions")
    if bandit is not None:
        site = bandit.select(sites, rng)
    else:
        site = sites[int(rng.integers(len(sites)))]
    return MutationRequest(tree.source, site)
