"""UCB1 bandit over mutation sites, one arm per leading keyword.

A pull is any mutation attempt routed through the bandit; a success is an
attempt whose candidate entered the archive (new cell or displacement).
Arms seen for the first time take priority, then the usual empirical mean
plus confidence bonus decides, ties broken by arm name for determinism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..gdl import ExpressionSite


class NoSites(Exception):
    pass


@dataclass
class BanditStats:
    exploration_c: float = math.sqrt(2.0)
    pulls: dict[str, int] = field(default_factory=dict)
    successes: dict[str, int] = field(default_factory=dict)

    @property
    def total_pulls(self) -> int:
        return sum(self.pulls.values())

    def score(self, arm: str) -> float:
        n = self.pulls[arm]
        mean = self.successes.get(arm, 0) / n
        return mean + self.exploration_c * math.sqrt(math.log(self.total_pulls) / n)

    def select(self, sites: list[ExpressionSite], rng: np.random.Generator) -> ExpressionSite:
        if not sites:
            raise NoSites("no mutation sites")
        by_arm: dict[str, list[ExpressionSite]] = {}
        for s in sites:
            by_arm.setdefault(s.head, []).append(s)
        arms = sorted(by_arm)
        fresh = [a for a in arms if self.pulls.get(a, 0) == 0]
        if fresh:
            arm = fresh[int(rng.integers(len(fresh)))]
        else:
            best_score = max(self.score(a) for a in arms)
            arm = next(a for a in arms if self.score(a) == best_score)
        options = by_arm[arm]
        return options[int(rng.integers(len(options)))]

    def update(self, arm: str, success: bool) -> None:
        self.pulls[arm] = self.pulls.get(arm, 0) + 1
        if success:
            self.successes[arm] = self.successes.get(arm, 0) + 1
