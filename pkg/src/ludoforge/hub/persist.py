"""Run-directory access: replaying event logs and exporting views.

A run directory holds config.json, projection.json, events.jsonl (the
source of truth), an elites/ snapshot, and report.json. Everything here is
derived from the event log so a crashed run loses at most its current step.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..qd import CandidateRecord
from ..qd.loop import record_from_dict


def read_events(run_dir: str | Path) -> list[dict]:
    path = Path(run_dir) / "events.jsonl"
    return [
        json.loads(line)
        for line in path.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]


def final_grid(run_dir: str | Path) -> dict[tuple[int, int], CandidateRecord]:
    """Replay the log into the final cell -> elite mapping."""
    grid: dict[tuple[int, int], CandidateRecord] = {}
    for ev in read_events(run_dir):
        if ev["t"] == "seed" and ev["result"] in ("inserted", "replaced"):
            rec = record_from_dict(ev["record"])
            grid[rec.cell] = rec
        elif ev["t"] == "archived" and ev["result"] in ("inserted", "replaced"):
            rec = record_from_dict(ev["record"])
            grid[rec.cell] = rec
    return grid


def qd_over_time(run_dir: str | Path) -> list[tuple[int, float, int]]:
    """(step, qd_score, occupied) per completed step."""
    out = []
    for ev in read_events(run_dir):
        if ev["t"] == "step_end":
            out.append((ev["step"], ev["qd_score"], ev["occupied"]))
    return out


def export_heatmap(run_dir: str | Path, regions_per_axis: int = 40) -> str:
    """Best-fitness-per-cell matrix as tab-separated text (rows = y axis,
    columns = x axis, blank = unoccupied)."""
    grid = final_grid(run_dir)
    lines = ["\t".join(["y\\x"] + [str(i) for i in range(regions_per_axis)])]
    for j in range(regions_per_axis):
        row = [str(j)]
        for i in range(regions_per_axis):
            rec = grid.get((i, j))
            row.append("" if rec is None else f"{rec.fitness.value:.4f}")
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"
