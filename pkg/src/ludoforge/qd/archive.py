"""The elite archive: one best candidate per concept-space cell.

A candidate enters an empty cell unconditionally and displaces an occupant
only by strictly exceeding its fitness, so the grid total is monotone.
Uncompilable games are never archived (their concepts are undefined);
everything else -- including unplayable and gated games -- may hold cells.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..concepts import CellCoord, ConceptVector
from ..fitness import Fitness, Stage

QD_OFFSET = 2.0  # fitness shifted by the archivable minimum so sums grow


@dataclass(frozen=True)
class CandidateRecord:
    id: str
    source: str  # canonical text
    fitness: Fitness
    concepts: ConceptVector
    cell: tuple[int, int]
    parent_id: str | None
    mutated_span: tuple[int, int] | None
    operator: str
    generation: int
    step: int  # logical timestamps: step and in-step sequence number
    seq: int


@dataclass
class Archive:
    regions_per_axis: int = 40
    grid: dict[tuple[int, int], CandidateRecord] = field(default_factory=dict)
    baseline_cells: set[tuple[int, int]] = field(default_factory=set)
    history: list[dict] = field(default_factory=list)

    def qd_score(self) -> float:
        return sum(r.fitness.value + QD_OFFSET for r in self.grid.values())

    def add(self, candidate: CandidateRecord) -> tuple[str, CandidateRecord | None]:
        """-> ("inserted" | "replaced" | "rejected", displaced record)."""
        if candidate.fitness.stage is Stage.UNCOMPILABLE:
            raise ValueError("uncompilable candidates have no archive coordinates")
        cell = candidate.cell
        old = self.grid.get(cell)
        if old is None:
            self.grid[cell] = candidate
            self._log("inserted", candidate, None)
            return "inserted", None
        if candidate.fitness.value > old.fitness.value:
            self.grid[cell] = candidate
            self._log("replaced", candidate, old)
            return "replaced", old
        self._log("rejected", candidate, old)
        return "rejected", old

    def _log(self, result: str, candidate: CandidateRecord, old) -> None:
        self.history.append(
            {
                "result": result,
                "cell": list(candidate.cell),
                "id": candidate.id,
                "replaced": None if old is None else old.id,
                "qd_score": self.qd_score(),
                "occupied": len(self.grid),
            }
        )

    def report(self) -> dict:
        playable = [r for r in self.grid.values() if r.fitness.value > 0]
        high = [r for r in self.grid.values() if r.fitness.value > 0.5]
        novel_playable = [r for r in playable if r.cell not in self.baseline_cells]
        novel_high = [r for r in high if r.cell not in self.baseline_cells]
        return {
            "qd_score": self.qd_score(),
            "occupied": len(self.grid),
            "playable": len(playable),
            "high_fitness": len(high),
            "novel_playable": len(novel_playable),
            "novel_high_fitness": len(novel_high),
            "baseline_cells": len(self.baseline_cells),
        }

    def records(self) -> list[CandidateRecord]:
        return sorted(self.grid.values(), key=lambda r: r.cell)
